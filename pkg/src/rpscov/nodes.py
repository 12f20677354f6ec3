"""AST node definitions for the RPS language: items, type expressions,
patterns, expressions and statements.

Every node carries a SourceSpan. Pattern and expression nodes also carry a
`ty` slot filled in by the type checker, and pattern nodes a `refutability`
slot filled in by the classifier. Patterns are already their own tree of
sub-patterns: each node's children are exactly its syntactic child
sub-patterns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from rpscov.spans import SourceSpan

# ── Type expressions (surface syntax for types) ──────────────────


@dataclass
class TypeExpr:
    span: SourceSpan


@dataclass
class NamedType(TypeExpr):
    # `u8`, `bool`, `Person`, `Option<i32>` (generic args only for the
    # built-in option/result types; the checker rejects them elsewhere).
    name: str
    args: list[TypeExpr] = field(default_factory=list)


@dataclass
class TupleType(TypeExpr):
    elems: list[TypeExpr] = field(default_factory=list)


@dataclass
class ArrayType(TypeExpr):
    elem: TypeExpr = None  # type: ignore[assignment]
    length: int = 0


@dataclass
class SliceTypeExpr(TypeExpr):
    elem: TypeExpr = None  # type: ignore[assignment]


@dataclass
class RefType(TypeExpr):
    mutable: bool = False
    inner: TypeExpr = None  # type: ignore[assignment]


# ── Patterns ─────────────────────────────────────────────────────


@dataclass
class Pattern:
    span: SourceSpan
    ty: object = field(default=None, compare=False, repr=False)
    refutability: object = field(default=None, compare=False, repr=False)

    def children(self) -> list[Pattern]:
        return []


@dataclass
class LiteralPat(Pattern):
    # lit_kind: 'int' | 'bool' | 'char' | 'str'
    value: object = None
    lit_kind: str = "int"
    suffix: Optional[str] = None


@dataclass
class NameRefPat(Pattern):
    """A bare single-segment name: binding or path, undecidable until
    type checking. The checker fills `resolution` with one of 'binding',
    'const', 'variant', 'unit_struct' and, for variants, `enum_name`."""

    name: str = ""
    resolution: Optional[str] = field(default=None, compare=False)
    enum_name: Optional[str] = field(default=None, compare=False)


@dataclass
class IdentPat(Pattern):
    # Unambiguous binding form: has `ref`/`mut` modifiers or an `@` sub-pattern.
    name: str = ""
    by_ref: bool = False
    mutable: bool = False
    sub: Optional[Pattern] = None

    def children(self) -> list[Pattern]:
        return [self.sub] if self.sub is not None else []


@dataclass
class WildcardPat(Pattern):
    pass


@dataclass
class RestPat(Pattern):
    pass


@dataclass
class RangePat(Pattern):
    # Bounds are literal values (int, or char stored as 1-char str); either
    # side may be open. `inclusive` describes the upper bound.
    lo: Optional[object] = None
    hi: Optional[object] = None
    inclusive: bool = True
    lit_kind: str = "int"
    suffix: Optional[str] = None


@dataclass
class RefPat(Pattern):
    mutable: bool = False
    inner: Pattern = None  # type: ignore[assignment]
    # Set on nodes inserted by match-ergonomics normalization.
    implicit: bool = field(default=False, compare=False)

    def children(self) -> list[Pattern]:
        return [self.inner]


@dataclass
class FieldPat:
    name: str = ""
    pat: Optional[Pattern] = None  # None = shorthand binding
    span: SourceSpan = None  # type: ignore[assignment]


@dataclass
class StructPat(Pattern):
    path: list[str] = field(default_factory=list)
    fields: list[FieldPat] = field(default_factory=list)
    has_rest: bool = False

    def children(self) -> list[Pattern]:
        return [f.pat for f in self.fields if f.pat is not None]


@dataclass
class TupleStructPat(Pattern):
    path: list[str] = field(default_factory=list)
    elems: list[Pattern] = field(default_factory=list)

    def children(self) -> list[Pattern]:
        return list(self.elems)


@dataclass
class TuplePat(Pattern):
    elems: list[Pattern] = field(default_factory=list)

    def children(self) -> list[Pattern]:
        return list(self.elems)


@dataclass
class GroupPat(Pattern):
    inner: Pattern = None  # type: ignore[assignment]

    def children(self) -> list[Pattern]:
        return [self.inner]


@dataclass
class SlicePat(Pattern):
    elems: list[Pattern] = field(default_factory=list)

    def children(self) -> list[Pattern]:
        return list(self.elems)


@dataclass
class PathPat(Pattern):
    # Multi-segment path (`Person::Crew`), or a resolved bare name.
    path: list[str] = field(default_factory=list)
    resolution: Optional[str] = field(default=None, compare=False)  # 'const' | 'variant' | 'unit_struct'
    enum_name: Optional[str] = field(default=None, compare=False)


@dataclass
class OrPat(Pattern):
    alts: list[Pattern] = field(default_factory=list)

    def children(self) -> list[Pattern]:
        return list(self.alts)


SUB_PATTERN_KINDS = (
    "Literal", "Identifier", "Wildcard", "Rest", "Range", "Reference",
    "Struct", "TupleStruct", "Tuple", "Grouped", "Slice", "Path", "Or",
)


def sub_pattern_kind(p: Pattern) -> str:
    """The sub-pattern kind name of a (resolved) pattern node."""
    if isinstance(p, LiteralPat):
        return "Literal"
    if isinstance(p, IdentPat):
        return "Identifier"
    if isinstance(p, NameRefPat):
        if p.resolution in (None, "binding"):
            return "Identifier"
        return "Path"
    if isinstance(p, WildcardPat):
        return "Wildcard"
    if isinstance(p, RestPat):
        return "Rest"
    if isinstance(p, RangePat):
        return "Range"
    if isinstance(p, RefPat):
        return "Reference"
    if isinstance(p, StructPat):
        return "Struct"
    if isinstance(p, TupleStructPat):
        return "TupleStruct"
    if isinstance(p, TuplePat):
        return "Tuple"
    if isinstance(p, GroupPat):
        return "Grouped"
    if isinstance(p, SlicePat):
        return "Slice"
    if isinstance(p, PathPat):
        return "Path"
    if isinstance(p, OrPat):
        return "Or"
    raise AssertionError(f"unknown pattern node {p!r}")


def walk_pattern(p: Pattern):
    """Yield every node of a pattern tree, depth first, left to right."""
    yield p
    for c in p.children():
        yield from walk_pattern(c)


# ── Expressions ──────────────────────────────────────────────────


@dataclass
class Expr:
    span: SourceSpan
    ty: object = field(default=None, compare=False, repr=False)


@dataclass
class LitExpr(Expr):
    value: object = None
    lit_kind: str = "int"
    suffix: Optional[str] = None


@dataclass
class PathExpr(Expr):
    path: list[str] = field(default_factory=list)
    # Filled by the checker: 'local' | 'const' | 'static' | 'variant' | 'unit_struct'
    resolution: Optional[str] = field(default=None, compare=False)
    enum_name: Optional[str] = field(default=None, compare=False)


@dataclass
class CallExpr(Expr):
    callee: PathExpr = None  # type: ignore[assignment]
    args: list[Expr] = field(default_factory=list)
    # Filled by the checker: 'fn' | 'variant' | 'tuple_struct'
    call_kind: Optional[str] = field(default=None, compare=False)
    enum_name: Optional[str] = field(default=None, compare=False)


@dataclass
class StructExpr(Expr):
    path: list[str] = field(default_factory=list)
    fields: list[tuple[str, Expr]] = field(default_factory=list)
    enum_name: Optional[str] = field(default=None, compare=False)


@dataclass
class TupleExpr(Expr):
    elems: list[Expr] = field(default_factory=list)


@dataclass
class ArrayExpr(Expr):
    elems: list[Expr] = field(default_factory=list)


@dataclass
class RefExpr(Expr):
    mutable: bool = False
    inner: Expr = None  # type: ignore[assignment]


@dataclass
class UnaryExpr(Expr):
    op: str = "-"  # '-' | '!'
    operand: Expr = None  # type: ignore[assignment]


@dataclass
class BinaryExpr(Expr):
    op: str = "+"  # + - * / % == != < <= > >= && ||
    lhs: Expr = None  # type: ignore[assignment]
    rhs: Expr = None  # type: ignore[assignment]


@dataclass
class FieldExpr(Expr):
    base: Expr = None  # type: ignore[assignment]
    name: str = ""  # field name, or decimal index for tuples


@dataclass
class IndexExpr(Expr):
    base: Expr = None  # type: ignore[assignment]
    index: Expr = None  # type: ignore[assignment]


@dataclass
class Block:
    stmts: list[Stmt] = field(default_factory=list)
    tail: Optional[Expr] = None
    span: SourceSpan = None  # type: ignore[assignment]
    ty: object = field(default=None, compare=False, repr=False)


@dataclass
class BlockExpr(Expr):
    block: Block = None  # type: ignore[assignment]


@dataclass
class IfExpr(Expr):
    cond: Expr = None  # type: ignore[assignment]
    then: Block = None  # type: ignore[assignment]
    else_: Union[Block, "IfExpr", None] = None


@dataclass
class IfLetExpr(Expr):
    pat: Pattern = None  # type: ignore[assignment]
    scrutinee: Expr = None  # type: ignore[assignment]
    then: Block = None  # type: ignore[assignment]
    else_: Union[Block, "IfExpr", "IfLetExpr", None] = None


@dataclass
class MatchArm:
    pat: Pattern = None  # type: ignore[assignment]
    guard: Optional[Expr] = None
    body: Expr = None  # type: ignore[assignment]
    span: SourceSpan = None  # type: ignore[assignment]
    # Filled by contextual pruning: True when the arm cannot fail in context.
    pruned: bool = field(default=False, compare=False)


@dataclass
class MatchExpr(Expr):
    scrutinee: Expr = None  # type: ignore[assignment]
    arms: list[MatchArm] = field(default_factory=list)
    from_question_mark: bool = field(default=False, compare=False)


@dataclass
class QuestionMarkExpr(Expr):
    inner: Expr = None  # type: ignore[assignment]


@dataclass
class ReturnExpr(Expr):
    value: Optional[Expr] = None


@dataclass
class PrintExpr(Expr):
    newline: bool = False
    template: str = ""


@dataclass
class PanicExpr(Expr):
    message: str = ""


# ── Statements ───────────────────────────────────────────────────


@dataclass
class Stmt:
    span: SourceSpan


@dataclass
class LetStmt(Stmt):
    pat: Pattern = None  # type: ignore[assignment]
    ty_ann: Optional[TypeExpr] = None
    init: Expr = None  # type: ignore[assignment]


@dataclass
class LetElseStmt(Stmt):
    pat: Pattern = None  # type: ignore[assignment]
    ty_ann: Optional[TypeExpr] = None
    init: Expr = None  # type: ignore[assignment]
    else_block: Block = None  # type: ignore[assignment]


@dataclass
class AssignStmt(Stmt):
    name: str = ""
    value: Expr = None  # type: ignore[assignment]


@dataclass
class ExprStmt(Stmt):
    expr: Expr = None  # type: ignore[assignment]
    has_semi: bool = True


@dataclass
class WhileStmt(Stmt):
    cond: Expr = None  # type: ignore[assignment]
    body: Block = None  # type: ignore[assignment]


# ── Items ────────────────────────────────────────────────────────


@dataclass
class Item:
    span: SourceSpan


@dataclass
class EnumVariant:
    name: str = ""
    # style: 'unit' | 'tuple' | 'struct'
    style: str = "unit"
    tuple_fields: list[TypeExpr] = field(default_factory=list)
    named_fields: list[tuple[str, TypeExpr]] = field(default_factory=list)
    span: SourceSpan = None  # type: ignore[assignment]


@dataclass
class EnumDef(Item):
    name: str = ""
    variants: list[EnumVariant] = field(default_factory=list)


@dataclass
class StructDef(Item):
    name: str = ""
    style: str = "unit"  # 'unit' | 'tuple' | 'named'
    tuple_fields: list[TypeExpr] = field(default_factory=list)
    named_fields: list[tuple[str, TypeExpr]] = field(default_factory=list)


@dataclass
class ConstDef(Item):
    name: str = ""
    ty: TypeExpr = None  # type: ignore[assignment]
    value: Expr = None  # type: ignore[assignment]


@dataclass
class StaticDef(Item):
    name: str = ""
    mutable: bool = False
    ty: TypeExpr = None  # type: ignore[assignment]
    value: Expr = None  # type: ignore[assignment]


@dataclass
class Param:
    name: str = ""
    ty: TypeExpr = None  # type: ignore[assignment]
    mutable: bool = False
    span: SourceSpan = None  # type: ignore[assignment]


@dataclass
class FnDef(Item):
    name: str = ""
    params: list[Param] = field(default_factory=list)
    ret: Optional[TypeExpr] = None
    body: Block = None  # type: ignore[assignment]


@dataclass
class Program:
    items: list[Item] = field(default_factory=list)
    span: SourceSpan = None  # type: ignore[assignment]

    def functions(self) -> list[FnDef]:
        return [i for i in self.items if isinstance(i, FnDef)]


# ── Structural identity ──────────────────────────────────────────

_FINGERPRINT_SKIP = {
    "span", "ty", "refutability", "resolution", "enum_name", "call_kind",
    "pruned", "implicit", "from_question_mark",
}


def fingerprint(x: object) -> object:
    """A hashable shape of a node tree that ignores spans and analysis
    annotations. Two parses of equivalent source have equal fingerprints."""
    import dataclasses

    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        parts = [type(x).__name__]
        for f in dataclasses.fields(x):
            if f.name in _FINGERPRINT_SKIP:
                continue
            parts.append((f.name, fingerprint(getattr(x, f.name))))
        return tuple(parts)
    if isinstance(x, (list, tuple)):
        return tuple(fingerprint(e) for e in x)
    return x

