"""Semantic types and the type environment.

Types are immutable and compared structurally. Enum and struct types are
referenced by name; their definitions live in the TypeEnv. The built-in
Option<T> and Result<T, E> families are materialized per concrete
instantiation as ordinary enum definitions with mangled names, so the rest
of the toolkit never deals with type parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

# ── Type references ──────────────────────────────────────────────

INT_BOUNDS = {
    "i8": (-(2 ** 7), 2 ** 7 - 1),
    "u8": (0, 2 ** 8 - 1),
    "i16": (-(2 ** 15), 2 ** 15 - 1),
    "u16": (0, 2 ** 16 - 1),
    "i32": (-(2 ** 31), 2 ** 31 - 1),
    "u32": (0, 2 ** 32 - 1),
}


@dataclass(frozen=True)
class Type:
    pass


@dataclass(frozen=True)
class IntType(Type):
    name: str  # one of INT_BOUNDS

    def bounds(self) -> tuple[int, int]:
        return INT_BOUNDS[self.name]

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class BoolType(Type):
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class CharType(Type):
    def __str__(self) -> str:
        return "char"


@dataclass(frozen=True)
class StrType(Type):
    def __str__(self) -> str:
        return "str"


@dataclass(frozen=True)
class NeverType(Type):
    def __str__(self) -> str:
        return "!"


@dataclass(frozen=True)
class EnumType(Type):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class StructType(Type):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TupleType(Type):
    elems: tuple[Type, ...]

    def __str__(self) -> str:
        if len(self.elems) == 1:
            return f"({self.elems[0]},)"
        return "(" + ", ".join(str(e) for e in self.elems) + ")"


@dataclass(frozen=True)
class ArrayType(Type):
    elem: Type
    length: int

    def __str__(self) -> str:
        return f"[{self.elem}; {self.length}]"


@dataclass(frozen=True)
class SliceType(Type):
    elem: Type

    def __str__(self) -> str:
        return f"[{self.elem}]"


@dataclass(frozen=True)
class RefType(Type):
    mutable: bool
    inner: Type

    def __str__(self) -> str:
        return ("&mut " if self.mutable else "&") + str(self.inner)


BOOL = BoolType()
CHAR = CharType()
STR = StrType()
NEVER = NeverType()
UNIT = TupleType(())
I8 = IntType("i8")
U8 = IntType("u8")
I16 = IntType("i16")
U16 = IntType("u16")
I32 = IntType("i32")
U32 = IntType("u32")

INT_TYPES = {t.name: t for t in (I8, U8, I16, U16, I32, U32)}


def strip_refs(ty: Type) -> Type:
    """Peel reference layers; spaces and matching see through them."""
    while isinstance(ty, RefType):
        ty = ty.inner
    return ty


# ── Definition info ──────────────────────────────────────────────


@dataclass
class VariantInfo:
    name: str
    style: str  # 'unit' | 'tuple' | 'struct'
    # Payload field types, in declaration order. For struct-style variants
    # field_names holds the names, same order.
    field_types: list[Type] = field(default_factory=list)
    field_names: list[str] = field(default_factory=list)


@dataclass
class EnumInfo:
    name: str
    variants: list[VariantInfo] = field(default_factory=list)
    # Set for the built-in option/result instantiations.
    builtin: Optional[str] = None  # 'option' | 'result'

    def variant(self, name: str) -> Optional[VariantInfo]:
        for v in self.variants:
            if v.name == name:
                return v
        return None

    def variant_names(self) -> list[str]:
        return [v.name for v in self.variants]


@dataclass
class StructInfo:
    name: str
    style: str  # 'unit' | 'tuple' | 'named'
    field_types: list[Type] = field(default_factory=list)
    field_names: list[str] = field(default_factory=list)


@dataclass
class ConstInfo:
    name: str
    ty: Type
    value: object = None  # a runtime Value, filled by the const evaluator


@dataclass
class StaticInfo:
    name: str
    ty: Type
    mutable: bool = False
    value: object = None


@dataclass
class FnInfo:
    name: str
    param_names: list[str] = field(default_factory=list)
    param_types: list[Type] = field(default_factory=list)
    ret: Type = None  # type: ignore[assignment]
    defn: object = None  # the FnDef node


# ── Environment ──────────────────────────────────────────────────


class TypeEnv:
    """All named definitions of a program, plus per-program knobs shared by
    space construction (the slice length cap)."""

    def __init__(self) -> None:
        self.enums: dict[str, EnumInfo] = {}
        self.structs: dict[str, StructInfo] = {}
        self.consts: dict[str, ConstInfo] = {}
        self.statics: dict[str, StaticInfo] = {}
        self.fns: dict[str, FnInfo] = {}
        # Length cap L for slice spaces: explicit lengths 0..=L are tracked
        # individually, everything longer is pooled. Set by the checker to
        # one more than the widest slice pattern in the program.
        self.slice_len_cap: int = 4

    # Option<T> / Result<T, E> are synthesized on first use. The success
    # variant is declared first so witnesses prefer it.
    def option_of(self, inner: Type) -> EnumType:
        name = f"Option<{inner}>"
        if name not in self.enums:
            self.enums[name] = EnumInfo(
                name=name,
                variants=[
                    VariantInfo("Some", "tuple", [inner]),
                    VariantInfo("None", "unit"),
                ],
                builtin="option",
            )
        return EnumType(name)

    def result_of(self, ok: Type, err: Type) -> EnumType:
        name = f"Result<{ok}, {err}>"
        if name not in self.enums:
            self.enums[name] = EnumInfo(
                name=name,
                variants=[
                    VariantInfo("Ok", "tuple", [ok]),
                    VariantInfo("Err", "tuple", [err]),
                ],
                builtin="result",
            )
        return EnumType(name)

    def enum_info(self, ty: Type) -> Optional[EnumInfo]:
        ty = strip_refs(ty)
        if isinstance(ty, EnumType):
            return self.enums.get(ty.name)
        return None

    def struct_info(self, ty: Type) -> Optional[StructInfo]:
        ty = strip_refs(ty)
        if isinstance(ty, StructType):
            return self.structs.get(ty.name)
        return None
