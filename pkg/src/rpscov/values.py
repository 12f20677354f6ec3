"""Runtime values.

Values are immutable; mutation of locals and statics rebinds the slot.
References are modelled as transparent wrappers so equality and matching
see through them, mirroring how value spaces treat reference types.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from rpscov import types as T
from rpscov.errors import Panic, TypeCheckError


@dataclass(frozen=True)
class Value:
    pass


@dataclass(frozen=True)
class IntVal(Value):
    value: int
    ty: str = "i32"  # int type name, for overflow checks and display


@dataclass(frozen=True)
class BoolVal(Value):
    value: bool


@dataclass(frozen=True)
class CharVal(Value):
    value: str  # single code point


@dataclass(frozen=True)
class StrVal(Value):
    value: str


@dataclass(frozen=True)
class TupleVal(Value):
    elems: tuple[Value, ...]


@dataclass(frozen=True)
class ArrayVal(Value):
    elems: tuple[Value, ...]


@dataclass(frozen=True)
class SliceVal(Value):
    elems: tuple[Value, ...]


@dataclass(frozen=True)
class StructVal(Value):
    name: str
    fields: tuple[tuple[str, Value], ...] = ()

    def field(self, name: str) -> Value:
        for n, v in self.fields:
            if n == name:
                return v
        raise KeyError(name)


@dataclass(frozen=True)
class EnumVal(Value):
    enum_name: str
    variant: str
    payload: tuple[Value, ...] = ()
    field_names: tuple[str, ...] = ()  # nonempty for struct-style variants


@dataclass(frozen=True)
class RefVal(Value):
    inner: Value


def deref(v: Value) -> Value:
    while isinstance(v, RefVal):
        v = v.inner
    return v


def values_equal(a: Value, b: Value) -> bool:
    """Structural equality, transparent to references."""
    a, b = deref(a), deref(b)
    if isinstance(a, IntVal) and isinstance(b, IntVal):
        return a.value == b.value
    # arrays compare equal to slices with the same elements, so values
    # that crossed the &[T; N] → &[T] coercion stay comparable
    if isinstance(a, (TupleVal, ArrayVal, SliceVal)):
        if not isinstance(b, (TupleVal, ArrayVal, SliceVal)):
            return False
        return len(a.elems) == len(b.elems) and all(
            values_equal(x, y) for x, y in zip(a.elems, b.elems)
        )
    if type(a) is not type(b):
        return False
    if isinstance(a, (BoolVal, CharVal, StrVal)):
        return a.value == b.value
    if isinstance(a, StructVal):
        assert isinstance(b, StructVal)
        return a.name == b.name and all(
            values_equal(x, y) for (_, x), (_, y) in zip(a.fields, b.fields)
        )
    if isinstance(a, EnumVal):
        assert isinstance(b, EnumVal)
        return (
            a.enum_name == b.enum_name
            and a.variant == b.variant
            and len(a.payload) == len(b.payload)
            and all(values_equal(x, y) for x, y in zip(a.payload, b.payload))
        )
    raise AssertionError(f"uncomparable values {a!r} / {b!r}")


def _escape_char(c: str) -> str:
    if c == "'":
        return "\\'"
    if c == "\\":
        return "\\\\"
    if c == "\n":
        return "\\n"
    if c == "\t":
        return "\\t"
    return c


def _escape_str(s: str) -> str:
    out = []
    for c in s:
        if c == '"':
            out.append('\\"')
        elif c == "\\":
            out.append("\\\\")
        elif c == "\n":
            out.append("\\n")
        elif c == "\t":
            out.append("\\t")
        else:
            out.append(c)
    return "".join(out)


def render_value(v: Value) -> str:
    """Render a value as source-like text; used by witnesses, traces and
    `{name}` interpolation in print templates."""
    if isinstance(v, RefVal):
        return "&" + render_value(v.inner)
    if isinstance(v, IntVal):
        return str(v.value)
    if isinstance(v, BoolVal):
        return "true" if v.value else "false"
    if isinstance(v, CharVal):
        return f"'{_escape_char(v.value)}'"
    if isinstance(v, StrVal):
        return f'"{_escape_str(v.value)}"'
    if isinstance(v, TupleVal):
        if len(v.elems) == 1:
            return f"({render_value(v.elems[0])},)"
        return "(" + ", ".join(render_value(e) for e in v.elems) + ")"
    if isinstance(v, (ArrayVal, SliceVal)):
        return "[" + ", ".join(render_value(e) for e in v.elems) + "]"
    if isinstance(v, StructVal):
        if not v.fields:
            return v.name
        inner = ", ".join(f"{n}: {render_value(x)}" for n, x in v.fields)
        return f"{v.name} {{ {inner} }}"
    if isinstance(v, EnumVal):
        base = v.variant
        if v.field_names:
            inner = ", ".join(
                f"{n}: {render_value(x)}" for n, x in zip(v.field_names, v.payload)
            )
            return f"{base} {{ {inner} }}"
        if v.payload:
            return base + "(" + ", ".join(render_value(e) for e in v.payload) + ")"
        return base
    raise AssertionError(f"unrenderable value {v!r}")


def parse_template(template: str) -> list[tuple[str, str]]:
    """Split a print template into ('text', ...) and ('name', ...) parts.
    `{{` and `}}` escape literal braces; `{name}` interpolates a value."""
    parts: list[tuple[str, str]] = []
    i, n = 0, len(template)
    text: list[str] = []
    while i < n:
        c = template[i]
        if c == "{":
            if i + 1 < n and template[i + 1] == "{":
                text.append("{")
                i += 2
                continue
            j = template.find("}", i + 1)
            if j < 0:
                raise ValueError("unclosed `{` in template")
            name = template[i + 1 : j]
            if not name.isidentifier():
                raise ValueError(f"bad interpolation name {name!r}")
            if text:
                parts.append(("text", "".join(text)))
                text = []
            parts.append(("name", name))
            i = j + 1
            continue
        if c == "}":
            if i + 1 < n and template[i + 1] == "}":
                text.append("}")
                i += 2
                continue
            raise ValueError("stray `}` in template")
        text.append(c)
        i += 1
    if text:
        parts.append(("text", "".join(text)))
    return parts


def interpolate(template: str, lookup) -> str:
    """Render a template given a name-to-Value lookup function."""
    out = []
    for kind, payload in parse_template(template):
        if kind == "text":
            out.append(payload)
        else:
            v = deref(lookup(payload))
            # Bare strings and chars print without quotes, as in format!.
            if isinstance(v, StrVal):
                out.append(v.value)
            elif isinstance(v, CharVal):
                out.append(v.value)
            else:
                out.append(render_value(v))
    return "".join(out)


# ── Checked arithmetic ───────────────────────────────────────────
# Shared by constant evaluation and the interpreter; overflow and
# division by zero raise TypeCheckError in const context, Panic at
# runtime, with the same messages.


def apply_unary(op: str, v: Value, span, const: bool = False) -> Value:
    v = deref(v)
    err = TypeCheckError if const else Panic
    if op == "-":
        assert isinstance(v, IntVal)
        result = -v.value
        lo, hi = T.INT_BOUNDS[v.ty]
        if not (lo <= result <= hi):
            raise err(f"attempt to negate with overflow in {v.ty}", span)
        return IntVal(result, v.ty)
    assert isinstance(v, BoolVal)
    return BoolVal(not v.value)


def apply_binary(op: str, a: Value, b: Value, span, const: bool = False) -> Value:
    err = TypeCheckError if const else Panic
    a, b = deref(a), deref(b)
    if op in ("==", "!="):
        eq = values_equal(a, b)
        return BoolVal(eq if op == "==" else not eq)
    if op in ("&&", "||"):
        assert isinstance(a, BoolVal) and isinstance(b, BoolVal)
        return BoolVal(a.value and b.value if op == "&&" else a.value or b.value)
    if op in ("<", "<=", ">", ">="):
        ka = a.value if isinstance(a, IntVal) else ord(a.value)  # type: ignore[union-attr]
        kb = b.value if isinstance(b, IntVal) else ord(b.value)  # type: ignore[union-attr]
        return BoolVal({"<": ka < kb, "<=": ka <= kb, ">": ka > kb, ">=": ka >= kb}[op])
    assert isinstance(a, IntVal) and isinstance(b, IntVal)
    if op == "+":
        result = a.value + b.value
    elif op == "-":
        result = a.value - b.value
    elif op == "*":
        result = a.value * b.value
    elif op in ("/", "%"):
        if b.value == 0:
            what = "divide" if op == "/" else "calculate the remainder"
            raise err(f"attempt to {what} by zero", span)
        # Rust semantics: quotient truncates toward zero.
        q = abs(a.value) // abs(b.value)
        if (a.value < 0) != (b.value < 0):
            q = -q
        r = a.value - q * b.value
        result = q if op == "/" else r
    else:
        raise AssertionError(op)
    lo, hi = T.INT_BOUNDS[a.ty]
    if not (lo <= result <= hi):
        verb = {
            "+": "add",
            "-": "subtract",
            "*": "multiply",
            "/": "divide",
            "%": "calculate the remainder",
        }[op]
        raise err(f"attempt to {verb} with overflow in {a.ty}", span)
    return IntVal(result, a.ty)


# ── Exhaustive enumeration (oracle support) ──────────────────────


def enumerate_type(ty: T.Type, env: T.TypeEnv, max_slice_len: int = 4) -> Iterator[Value]:
    """Enumerate every value of a type, in a fixed order. Only usable for
    small finite domains (tests cap the size); slices enumerate lengths
    0..=max_slice_len."""
    ty = T.strip_refs(ty)
    if isinstance(ty, T.IntType):
        lo, hi = ty.bounds()
        for n in range(lo, hi + 1):
            yield IntVal(n, ty.name)
    elif isinstance(ty, T.BoolType):
        yield BoolVal(False)
        yield BoolVal(True)
    elif isinstance(ty, T.CharType):
        for cp in range(0, 0xD800):
            yield CharVal(chr(cp))
        for cp in range(0xE000, 0x110000):
            yield CharVal(chr(cp))
    elif isinstance(ty, T.TupleType):
        yield from (
            TupleVal(t) for t in _enumerate_product(ty.elems, env, max_slice_len)
        )
    elif isinstance(ty, T.ArrayType):
        yield from (
            ArrayVal(t)
            for t in _enumerate_product((ty.elem,) * ty.length, env, max_slice_len)
        )
    elif isinstance(ty, T.SliceType):
        for n in range(0, max_slice_len + 1):
            yield from (
                SliceVal(t)
                for t in _enumerate_product((ty.elem,) * n, env, max_slice_len)
            )
    elif isinstance(ty, T.EnumType):
        info = env.enums[ty.name]
        for v in info.variants:
            if not v.field_types:
                yield EnumVal(ty.name, v.name, (), tuple(v.field_names))
            else:
                for t in _enumerate_product(tuple(v.field_types), env, max_slice_len):
                    yield EnumVal(ty.name, v.name, t, tuple(v.field_names))
    elif isinstance(ty, T.StructType):
        info = env.structs[ty.name]
        if not info.field_types:
            yield StructVal(info.name, ())
        elif info.style == "tuple":
            for t in _enumerate_product(tuple(info.field_types), env, max_slice_len):
                yield StructVal(
                    info.name, tuple((str(i), x) for i, x in enumerate(t))
                )
        else:
            for t in _enumerate_product(tuple(info.field_types), env, max_slice_len):
                yield StructVal(info.name, tuple(zip(info.field_names, t)))
    else:
        raise ValueError(f"cannot enumerate type {ty}")


def _enumerate_product(
    tys, env: T.TypeEnv, max_slice_len: int
) -> Iterator[tuple[Value, ...]]:
    if not tys:
        yield ()
        return
    head, rest = tys[0], tys[1:]
    for v in enumerate_type(head, env, max_slice_len):
        for tail in _enumerate_product(rest, env, max_slice_len):
            yield (v,) + tail


def domain_size(ty: T.Type, env: T.TypeEnv, max_slice_len: int = 4) -> int:
    """Number of values enumerate_type would yield (without enumerating
    structures, but counting integers by range width)."""
    ty = T.strip_refs(ty)
    if isinstance(ty, T.IntType):
        lo, hi = ty.bounds()
        return hi - lo + 1
    if isinstance(ty, T.BoolType):
        return 2
    if isinstance(ty, T.CharType):
        return 0xD800 + (0x110000 - 0xE000)
    if isinstance(ty, T.TupleType):
        n = 1
        for e in ty.elems:
            n *= domain_size(e, env, max_slice_len)
        return n
    if isinstance(ty, T.ArrayType):
        return domain_size(ty.elem, env, max_slice_len) ** ty.length
    if isinstance(ty, T.SliceType):
        e = domain_size(ty.elem, env, max_slice_len)
        return sum(e ** n for n in range(0, max_slice_len + 1))
    if isinstance(ty, T.EnumType):
        total = 0
        for v in env.enums[ty.name].variants:
            n = 1
            for f in v.field_types:
                n *= domain_size(f, env, max_slice_len)
            total += n
        return total
    if isinstance(ty, T.StructType):
        n = 1
        for f in env.structs[ty.name].field_types:
            n *= domain_size(f, env, max_slice_len)
        return n
    raise ValueError(f"no domain size for {ty}")
