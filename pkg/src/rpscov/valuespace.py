"""Exact value-space algebra.

A Space denotes a set of runtime values of one type. Every operation
(union, intersection, subtraction) is exact: the representation is closed
under all three, so emptiness, subset and equality checks are decidable.
This is what makes refutability classification and exhaustiveness
witnesses trustworthy rather than approximate.

Representations:
  IntSpace    sorted disjoint closed intervals over the type's bounds
  CharSpace   intervals over Unicode scalar values (surrogates excluded)
  BoolSpace   subset of {false, true}
  StrSpace    finite point set, or complement of one (co-finite)
  TupleSpace / ArraySpace / StructSpace
              union of disjoint rectangles (one factor space per column)
  EnumSpace   one rectangle union per declared variant
  SliceSpace  explicit rectangle union per length 0..=cap, plus a pooled
              tail of width-cap prefixes covering all longer slices

References are transparent: the space of &T is the space of T.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from rpscov import types as T
from rpscov.values import (
    ArrayVal,
    BoolVal,
    CharVal,
    EnumVal,
    IntVal,
    SliceVal,
    StrVal,
    StructVal,
    TupleVal,
    Value,
    deref,
)

CHAR_DOMAIN = ((0x0000, 0xD7FF), (0xE000, 0x10FFFF))


class SubtractionUnsupported(Exception):
    """Raised if a set operation would leave the representable family.

    The current representations are closed under union, intersection and
    subtraction, so this is never raised in practice; it remains the
    declared failure mode should a non-closed representation be added.
    """


# ── Interval sets ────────────────────────────────────────────────


@dataclass(frozen=True)
class IntervalSet:
    """Sorted, disjoint, non-adjacent closed integer intervals."""

    ivs: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def of(pairs: Iterable[tuple[int, int]]) -> IntervalSet:
        items = sorted((lo, hi) for lo, hi in pairs if lo <= hi)
        merged: list[tuple[int, int]] = []
        for lo, hi in items:
            if merged and lo <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return IntervalSet(tuple(merged))

    def is_empty(self) -> bool:
        return not self.ivs

    def contains(self, n: int) -> bool:
        return any(lo <= n <= hi for lo, hi in self.ivs)

    def min(self) -> int:
        return self.ivs[0][0]

    def count(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.ivs)

    def union(self, other: IntervalSet) -> IntervalSet:
        return IntervalSet.of(self.ivs + other.ivs)

    def intersect(self, other: IntervalSet) -> IntervalSet:
        out = []
        for alo, ahi in self.ivs:
            for blo, bhi in other.ivs:
                lo, hi = max(alo, blo), min(ahi, bhi)
                if lo <= hi:
                    out.append((lo, hi))
        return IntervalSet.of(out)

    def subtract(self, other: IntervalSet) -> IntervalSet:
        pieces = list(self.ivs)
        for blo, bhi in other.ivs:
            nxt = []
            for lo, hi in pieces:
                if bhi < lo or blo > hi:
                    nxt.append((lo, hi))
                    continue
                if lo < blo:
                    nxt.append((lo, blo - 1))
                if bhi < hi:
                    nxt.append((bhi + 1, hi))
            pieces = nxt
        return IntervalSet.of(pieces)


# ── Space classes ────────────────────────────────────────────────


@dataclass
class Space:
    def is_empty(self) -> bool:
        raise NotImplementedError

    def contains(self, v: Value) -> bool:
        raise NotImplementedError

    def witness(self, env: T.TypeEnv) -> Value:
        raise NotImplementedError


@dataclass
class EmptySpace(Space):
    """The untyped empty space; identity for union, absorbing otherwise."""

    def is_empty(self) -> bool:
        return True

    def contains(self, v: Value) -> bool:
        return False

    def witness(self, env: T.TypeEnv) -> Value:
        raise ValueError("empty space has no witness")


EMPTY = EmptySpace()


@dataclass
class IntSpace(Space):
    ty_name: str
    ivs: IntervalSet

    @staticmethod
    def full(ty_name: str) -> IntSpace:
        lo, hi = T.INT_BOUNDS[ty_name]
        return IntSpace(ty_name, IntervalSet.of([(lo, hi)]))

    def is_empty(self) -> bool:
        return self.ivs.is_empty()

    def contains(self, v: Value) -> bool:
        v = deref(v)
        return isinstance(v, IntVal) and self.ivs.contains(v.value)

    def witness(self, env: T.TypeEnv) -> Value:
        return IntVal(self.ivs.min(), self.ty_name)

    def _union(self, o: IntSpace) -> IntSpace:
        return IntSpace(self.ty_name, self.ivs.union(o.ivs))

    def _intersect(self, o: IntSpace) -> IntSpace:
        return IntSpace(self.ty_name, self.ivs.intersect(o.ivs))

    def _subtract(self, o: IntSpace) -> IntSpace:
        return IntSpace(self.ty_name, self.ivs.subtract(o.ivs))


@dataclass
class CharSpace(Space):
    ivs: IntervalSet

    @staticmethod
    def full() -> CharSpace:
        return CharSpace(IntervalSet.of(CHAR_DOMAIN))

    @staticmethod
    def of_range(lo: int, hi: int) -> CharSpace:
        # Clip to the scalar-value domain so surrogate gaps never appear.
        return CharSpace(IntervalSet.of([(lo, hi)]).intersect(IntervalSet.of(CHAR_DOMAIN)))

    def is_empty(self) -> bool:
        return self.ivs.is_empty()

    def contains(self, v: Value) -> bool:
        v = deref(v)
        return isinstance(v, CharVal) and self.ivs.contains(ord(v.value))

    def witness(self, env: T.TypeEnv) -> Value:
        return CharVal(chr(self.ivs.min()))

    def _union(self, o: CharSpace) -> CharSpace:
        return CharSpace(self.ivs.union(o.ivs))

    def _intersect(self, o: CharSpace) -> CharSpace:
        return CharSpace(self.ivs.intersect(o.ivs))

    def _subtract(self, o: CharSpace) -> CharSpace:
        return CharSpace(self.ivs.subtract(o.ivs))


@dataclass
class BoolSpace(Space):
    members: frozenset[bool] = frozenset()

    @staticmethod
    def full() -> BoolSpace:
        return BoolSpace(frozenset((False, True)))

    def is_empty(self) -> bool:
        return not self.members

    def contains(self, v: Value) -> bool:
        v = deref(v)
        return isinstance(v, BoolVal) and v.value in self.members

    def witness(self, env: T.TypeEnv) -> Value:
        return BoolVal(min(self.members))

    def _union(self, o: BoolSpace) -> BoolSpace:
        return BoolSpace(self.members | o.members)

    def _intersect(self, o: BoolSpace) -> BoolSpace:
        return BoolSpace(self.members & o.members)

    def _subtract(self, o: BoolSpace) -> BoolSpace:
        return BoolSpace(self.members - o.members)


@dataclass
class StrSpace(Space):
    """Finite set of strings, or the complement of one."""

    finite: bool
    points: frozenset[str] = frozenset()

    @staticmethod
    def full() -> StrSpace:
        return StrSpace(False, frozenset())

    @staticmethod
    def singleton(s: str) -> StrSpace:
        return StrSpace(True, frozenset((s,)))

    def is_empty(self) -> bool:
        return self.finite and not self.points

    def contains(self, v: Value) -> bool:
        v = deref(v)
        if not isinstance(v, StrVal):
            return False
        return (v.value in self.points) == self.finite

    def witness(self, env: T.TypeEnv) -> Value:
        if self.finite:
            return StrVal(min(self.points))
        k = 0
        while "a" * k in self.points:
            k += 1
        return StrVal("a" * k)

    def _union(self, o: StrSpace) -> StrSpace:
        if self.finite and o.finite:
            return StrSpace(True, self.points | o.points)
        if self.finite:
            return StrSpace(False, o.points - self.points)
        if o.finite:
            return StrSpace(False, self.points - o.points)
        return StrSpace(False, self.points & o.points)

    def _intersect(self, o: StrSpace) -> StrSpace:
        if self.finite and o.finite:
            return StrSpace(True, self.points & o.points)
        if self.finite:
            return StrSpace(True, self.points - o.points)
        if o.finite:
            return StrSpace(True, o.points - self.points)
        return StrSpace(False, self.points | o.points)

    def _subtract(self, o: StrSpace) -> StrSpace:
        if self.finite and o.finite:
            return StrSpace(True, self.points - o.points)
        if self.finite:
            return StrSpace(True, self.points & o.points)
        if o.finite:
            return StrSpace(False, self.points | o.points)
        return StrSpace(True, o.points - self.points)


# ── Rectangle unions ─────────────────────────────────────────────

Cell = tuple  # tuple[Space, ...]


@dataclass
class ProductSpace:
    """Union of disjoint rectangles over a fixed number of columns."""

    arity: int
    cells: list[Cell] = field(default_factory=list)

    @staticmethod
    def of(cells: Iterable[Cell], arity: int) -> ProductSpace:
        kept = [c for c in cells if not any(f.is_empty() for f in c)]
        return ProductSpace(arity, kept)

    @staticmethod
    def unit() -> ProductSpace:
        return ProductSpace(0, [()])

    def is_empty(self) -> bool:
        return not self.cells

    def contains_tuple(self, vs: tuple[Value, ...]) -> bool:
        return any(
            all(f.contains(v) for f, v in zip(cell, vs)) for cell in self.cells
        )

    def witness_tuple(self, env: T.TypeEnv) -> tuple[Value, ...]:
        cell = self.cells[0]
        return tuple(f.witness(env) for f in cell)

    def _union(self, o: ProductSpace) -> ProductSpace:
        extra = o._subtract(self)
        return ProductSpace(self.arity, self.cells + extra.cells)

    def _intersect(self, o: ProductSpace) -> ProductSpace:
        out = []
        for a in self.cells:
            for b in o.cells:
                cell = tuple(space_intersect(x, y) for x, y in zip(a, b))
                if not any(f.is_empty() for f in cell):
                    out.append(cell)
        return ProductSpace(self.arity, out)

    def _subtract(self, o: ProductSpace) -> ProductSpace:
        cells = list(self.cells)
        for b in o.cells:
            nxt: list[Cell] = []
            for a in cells:
                nxt.extend(_cell_subtract(a, b))
            cells = nxt
        return ProductSpace(self.arity, cells)


def _cell_subtract(a: Cell, b: Cell) -> list[Cell]:
    """Difference of two rectangles as disjoint rectangles."""
    inter = [space_intersect(x, y) for x, y in zip(a, b)]
    if any(f.is_empty() for f in inter):
        return [a]
    out: list[Cell] = []
    prefix: list[Space] = []
    for i, (x, y) in enumerate(zip(a, b)):
        diff = space_subtract(x, y)
        if not diff.is_empty():
            out.append(tuple(prefix) + (diff,) + tuple(a[i + 1 :]))
        prefix.append(inter[i])
    return out


@dataclass
class TupleSpace(Space):
    inner: ProductSpace

    def is_empty(self) -> bool:
        return self.inner.is_empty()

    def contains(self, v: Value) -> bool:
        v = deref(v)
        return isinstance(v, TupleVal) and self.inner.contains_tuple(v.elems)

    def witness(self, env: T.TypeEnv) -> Value:
        return TupleVal(self.inner.witness_tuple(env))

    def _union(self, o: TupleSpace) -> TupleSpace:
        return TupleSpace(self.inner._union(o.inner))

    def _intersect(self, o: TupleSpace) -> TupleSpace:
        return TupleSpace(self.inner._intersect(o.inner))

    def _subtract(self, o: TupleSpace) -> TupleSpace:
        return TupleSpace(self.inner._subtract(o.inner))


@dataclass
class ArraySpace(Space):
    inner: ProductSpace

    def is_empty(self) -> bool:
        return self.inner.is_empty()

    def contains(self, v: Value) -> bool:
        v = deref(v)
        return isinstance(v, ArrayVal) and self.inner.contains_tuple(v.elems)

    def witness(self, env: T.TypeEnv) -> Value:
        return ArrayVal(self.inner.witness_tuple(env))

    def _union(self, o: ArraySpace) -> ArraySpace:
        return ArraySpace(self.inner._union(o.inner))

    def _intersect(self, o: ArraySpace) -> ArraySpace:
        return ArraySpace(self.inner._intersect(o.inner))

    def _subtract(self, o: ArraySpace) -> ArraySpace:
        return ArraySpace(self.inner._subtract(o.inner))


@dataclass
class StructSpace(Space):
    name: str
    inner: ProductSpace

    def is_empty(self) -> bool:
        return self.inner.is_empty()

    def contains(self, v: Value) -> bool:
        v = deref(v)
        return (
            isinstance(v, StructVal)
            and v.name == self.name
            and self.inner.contains_tuple(tuple(x for _, x in v.fields))
        )

    def witness(self, env: T.TypeEnv) -> Value:
        info = env.structs[self.name]
        vals = self.inner.witness_tuple(env)
        if info.style == "tuple":
            names = [str(i) for i in range(len(vals))]
        else:
            names = info.field_names
        return StructVal(self.name, tuple(zip(names, vals)))

    def _union(self, o: StructSpace) -> StructSpace:
        return StructSpace(self.name, self.inner._union(o.inner))

    def _intersect(self, o: StructSpace) -> StructSpace:
        return StructSpace(self.name, self.inner._intersect(o.inner))

    def _subtract(self, o: StructSpace) -> StructSpace:
        return StructSpace(self.name, self.inner._subtract(o.inner))


@dataclass
class EnumSpace(Space):
    """Per-variant payload spaces, keyed in declaration order."""

    enum_name: str
    variants: dict[str, ProductSpace] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return all(p.is_empty() for p in self.variants.values())

    def contains(self, v: Value) -> bool:
        v = deref(v)
        if not isinstance(v, EnumVal) or v.enum_name != self.enum_name:
            return False
        prod = self.variants.get(v.variant)
        return prod is not None and prod.contains_tuple(v.payload)

    def witness(self, env: T.TypeEnv) -> Value:
        info = env.enums[self.enum_name]
        for name, prod in self.variants.items():
            if not prod.is_empty():
                vi = info.variant(name)
                return EnumVal(
                    self.enum_name,
                    name,
                    prod.witness_tuple(env),
                    tuple(vi.field_names) if vi else (),
                )
        raise ValueError("empty enum space has no witness")

    def _zip(self, o: EnumSpace, op) -> EnumSpace:
        out: dict[str, ProductSpace] = {}
        for name in self.variants:
            out[name] = op(self.variants[name], o.variants[name])
        return EnumSpace(self.enum_name, out)

    def _union(self, o: EnumSpace) -> EnumSpace:
        return self._zip(o, lambda a, b: a._union(b))

    def _intersect(self, o: EnumSpace) -> EnumSpace:
        return self._zip(o, lambda a, b: a._intersect(b))

    def _subtract(self, o: EnumSpace) -> EnumSpace:
        return self._zip(o, lambda a, b: a._subtract(b))


@dataclass
class SliceSpace(Space):
    """Slices by length: explicit products for lengths 0..=cap, and a
    width-cap prefix pool for every longer length. The pool's cells
    constrain the first `cap` elements; later elements are unconstrained.
    Binary operations align caps first, which is exact because widening
    only unfolds the pool into explicit lengths."""

    elem_top: Space
    cap: int
    explicit: dict[int, ProductSpace] = field(default_factory=dict)
    tail: ProductSpace = None  # type: ignore[assignment]

    def is_empty(self) -> bool:
        return all(p.is_empty() for p in self.explicit.values()) and self.tail.is_empty()

    def contains(self, v: Value) -> bool:
        v = deref(v)
        if not isinstance(v, (SliceVal, ArrayVal)):
            return False
        n = len(v.elems)
        if n <= self.cap:
            return self.explicit[n].contains_tuple(v.elems)
        return self.tail.contains_tuple(v.elems[: self.cap])

    def witness(self, env: T.TypeEnv) -> Value:
        for n in range(0, self.cap + 1):
            if not self.explicit[n].is_empty():
                return SliceVal(self.explicit[n].witness_tuple(env))
        prefix = self.tail.witness_tuple(env)
        return SliceVal(prefix + (self.elem_top.witness(env),))

    def _rescale(self, new_cap: int) -> SliceSpace:
        if new_cap == self.cap:
            return self
        assert new_cap > self.cap
        explicit = dict(self.explicit)
        for n in range(self.cap + 1, new_cap + 1):
            pad = n - self.cap
            explicit[n] = ProductSpace.of(
                (c + (self.elem_top,) * pad for c in self.tail.cells), n
            )
        pad = new_cap - self.cap
        tail = ProductSpace.of(
            (c + (self.elem_top,) * pad for c in self.tail.cells), new_cap
        )
        return SliceSpace(self.elem_top, new_cap, explicit, tail)

    def _binop(self, o: SliceSpace, op) -> SliceSpace:
        cap = max(self.cap, o.cap)
        a, b = self._rescale(cap), o._rescale(cap)
        explicit = {n: op(a.explicit[n], b.explicit[n]) for n in range(cap + 1)}
        elem_top = a.elem_top if not isinstance(a.elem_top, EmptySpace) else b.elem_top
        return SliceSpace(elem_top, cap, explicit, op(a.tail, b.tail))

    def _union(self, o: SliceSpace) -> SliceSpace:
        return self._binop(o, lambda a, b: a._union(b))

    def _intersect(self, o: SliceSpace) -> SliceSpace:
        return self._binop(o, lambda a, b: a._intersect(b))

    def _subtract(self, o: SliceSpace) -> SliceSpace:
        return self._binop(o, lambda a, b: a._subtract(b))


# ── Top-level operations ─────────────────────────────────────────


def space_union(a: Space, b: Space) -> Space:
    if isinstance(a, EmptySpace):
        return b
    if isinstance(b, EmptySpace):
        return a
    _check_compatible(a, b)
    return a._union(b)  # type: ignore[attr-defined]


def space_intersect(a: Space, b: Space) -> Space:
    if isinstance(a, EmptySpace) or isinstance(b, EmptySpace):
        return EMPTY
    _check_compatible(a, b)
    return a._intersect(b)  # type: ignore[attr-defined]


def space_subtract(a: Space, b: Space) -> Space:
    if isinstance(a, EmptySpace):
        return EMPTY
    if isinstance(b, EmptySpace):
        return a
    _check_compatible(a, b)
    return a._subtract(b)  # type: ignore[attr-defined]


def space_is_subset(a: Space, b: Space) -> bool:
    return space_subtract(a, b).is_empty()


def space_equal(a: Space, b: Space) -> bool:
    return space_is_subset(a, b) and space_is_subset(b, a)


def _check_compatible(a: Space, b: Space) -> None:
    if type(a) is not type(b):
        raise TypeError(f"space type mismatch: {type(a).__name__} vs {type(b).__name__}")
    if isinstance(a, IntSpace) and a.ty_name != b.ty_name:  # type: ignore[union-attr]
        raise TypeError(f"int space mismatch: {a.ty_name} vs {b.ty_name}")  # type: ignore[union-attr]
    if isinstance(a, EnumSpace) and a.enum_name != b.enum_name:  # type: ignore[union-attr]
        raise TypeError(f"enum space mismatch: {a.enum_name} vs {b.enum_name}")  # type: ignore[union-attr]


def space_complement(a: Space, ty: T.Type, env: T.TypeEnv) -> Space:
    return space_subtract(value_space_of(ty, env), a)


# ── Top spaces ───────────────────────────────────────────────────


def top_product(tys: Iterable[T.Type], env: T.TypeEnv) -> ProductSpace:
    factors = tuple(value_space_of(t, env) for t in tys)
    return ProductSpace.of([factors], len(factors))


def value_space_of(ty: T.Type, env: T.TypeEnv) -> Space:
    """The space of all values of a type."""
    ty = T.strip_refs(ty)
    if isinstance(ty, T.IntType):
        return IntSpace.full(ty.name)
    if isinstance(ty, T.BoolType):
        return BoolSpace.full()
    if isinstance(ty, T.CharType):
        return CharSpace.full()
    if isinstance(ty, T.StrType):
        return StrSpace.full()
    if isinstance(ty, T.NeverType):
        return EMPTY
    if isinstance(ty, T.TupleType):
        return TupleSpace(top_product(ty.elems, env))
    if isinstance(ty, T.ArrayType):
        return ArraySpace(top_product((ty.elem,) * ty.length, env))
    if isinstance(ty, T.SliceType):
        cap = max(1, env.slice_len_cap)
        elem_top = value_space_of(ty.elem, env)
        explicit = {n: top_product((ty.elem,) * n, env) for n in range(cap + 1)}
        tail = top_product((ty.elem,) * cap, env)
        return SliceSpace(elem_top, cap, explicit, tail)
    if isinstance(ty, T.EnumType):
        info = env.enums[ty.name]
        variants = {v.name: top_product(v.field_types, env) for v in info.variants}
        return EnumSpace(ty.name, variants)
    if isinstance(ty, T.StructType):
        info = env.structs[ty.name]
        return StructSpace(ty.name, top_product(info.field_types, env))
    raise ValueError(f"no value space for type {ty}")


def space_of_value(v: Value, env: T.TypeEnv) -> Space:
    """The singleton space containing exactly one value."""
    from rpscov import values as V

    v = deref(v)
    if isinstance(v, IntVal):
        return IntSpace(v.ty, IntervalSet.of([(v.value, v.value)]))
    if isinstance(v, BoolVal):
        return BoolSpace(frozenset((v.value,)))
    if isinstance(v, CharVal):
        cp = ord(v.value)
        return CharSpace(IntervalSet.of([(cp, cp)]))
    if isinstance(v, StrVal):
        return StrSpace.singleton(v.value)
    if isinstance(v, TupleVal):
        return TupleSpace(_singleton_product(v.elems, env))
    if isinstance(v, ArrayVal):
        return ArraySpace(_singleton_product(v.elems, env))
    if isinstance(v, V.SliceVal):
        cap = max(1, env.slice_len_cap)
        n = len(v.elems)
        if n > cap:
            raise ValueError(f"slice value longer than length cap {cap}")
        prod = _singleton_product(v.elems, env)
        explicit = {
            k: prod if k == n else ProductSpace(k, []) for k in range(cap + 1)
        }
        # Element type is only needed to widen the pool, which stays empty
        # here; recover a factor space from the value when possible.
        elem_top = space_of_value(v.elems[0], env) if v.elems else EMPTY
        return SliceSpace(elem_top, cap, explicit, ProductSpace(cap, []))
    if isinstance(v, StructVal):
        return StructSpace(
            v.name, _singleton_product(tuple(x for _, x in v.fields), env)
        )
    if isinstance(v, EnumVal):
        info = env.enums[v.enum_name]
        variants = {
            vi.name: (
                _singleton_product(v.payload, env)
                if vi.name == v.variant
                else ProductSpace(len(vi.field_types), [])
            )
            for vi in info.variants
        }
        return EnumSpace(v.enum_name, variants)
    raise ValueError(f"no singleton space for value {v!r}")


def _singleton_product(vs: tuple[Value, ...], env: T.TypeEnv) -> ProductSpace:
    cell = tuple(space_of_value(x, env) for x in vs)
    return ProductSpace.of([cell], len(cell))


def empty_like(ty: T.Type, env: T.TypeEnv) -> Space:
    """A typed empty space matching value_space_of's shape for `ty`."""
    ty = T.strip_refs(ty)
    if isinstance(ty, T.IntType):
        return IntSpace(ty.name, IntervalSet())
    if isinstance(ty, T.BoolType):
        return BoolSpace(frozenset())
    if isinstance(ty, T.CharType):
        return CharSpace(IntervalSet())
    if isinstance(ty, T.StrType):
        return StrSpace(True, frozenset())
    if isinstance(ty, T.TupleType):
        return TupleSpace(ProductSpace(len(ty.elems), []))
    if isinstance(ty, T.ArrayType):
        return ArraySpace(ProductSpace(ty.length, []))
    if isinstance(ty, T.SliceType):
        top = value_space_of(ty, env)
        assert isinstance(top, SliceSpace)
        explicit = {n: ProductSpace(n, []) for n in range(top.cap + 1)}
        return SliceSpace(top.elem_top, top.cap, explicit, ProductSpace(top.cap, []))
    if isinstance(ty, T.EnumType):
        info = env.enums[ty.name]
        variants = {
            v.name: ProductSpace(len(v.field_types), []) for v in info.variants
        }
        return EnumSpace(ty.name, variants)
    if isinstance(ty, T.StructType):
        info = env.structs[ty.name]
        return StructSpace(ty.name, ProductSpace(len(info.field_types), []))
    return EMPTY
