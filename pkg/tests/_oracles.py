"""Independent oracles and random generators for the test suite.

Everything here re-derives results from first principles instead of calling
the code under test:

* ``all_values`` enumerates every value of an enumerable type directly from
  the type shape (slices are enumerated up to an explicit length bound).
* ``oracle_matches`` is a second, minimal pattern matcher written straight
  from the matching rules; it shares only the AST/value data classes with
  the package.
* ``eval_structure_oracle`` evaluates a boolean structure with
  short-circuit, independently of the package's evaluator.
* ``naive_independence_pairs``/``naive_mcdc_ok`` apply the pair rule
  literally over all pairs of observed vectors.
* ``PatternGen``/``DecisionGen`` produce random well-typed pattern sources
  and random decision structures/vector sets.
"""

from __future__ import annotations

import random
from typing import Callable, Iterable, Optional

from rpscov import nodes as N
from rpscov import types as T
from rpscov import values as V

# ── Independent value enumeration ────────────────────────────────────

MAX_DOMAIN = 60_000


def all_values(ty: T.Type, env: T.TypeEnv, slice_len_max: int = 5) -> list[V.Value]:
    """Every value of ``ty``; slices are cut off at ``slice_len_max``."""
    out = list(_enum(ty, env, slice_len_max))
    assert len(out) <= MAX_DOMAIN, f"domain of {ty} too large for the oracle"
    return out


def _enum(ty: T.Type, env: T.TypeEnv, cap: int) -> Iterable[V.Value]:
    if isinstance(ty, T.RefType):
        for v in _enum(ty.inner, env, cap):
            yield V.RefVal(v)
    elif isinstance(ty, T.BoolType):
        yield V.BoolVal(False)
        yield V.BoolVal(True)
    elif isinstance(ty, T.IntType):
        lo, hi = ty.bounds()
        assert hi - lo + 1 <= MAX_DOMAIN, f"{ty} not enumerable"
        for i in range(lo, hi + 1):
            yield V.IntVal(i, ty.name)
    elif isinstance(ty, T.TupleType):
        for combo in _product([list(_enum(t, env, cap)) for t in ty.elems]):
            yield V.TupleVal(tuple(combo))
    elif isinstance(ty, T.ArrayType):
        elems = list(_enum(ty.elem, env, cap))
        for combo in _product([elems] * ty.length):
            yield V.ArrayVal(tuple(combo))
    elif isinstance(ty, T.SliceType):
        elems = list(_enum(ty.elem, env, cap))
        for n in range(cap + 1):
            for combo in _product([elems] * n):
                yield V.SliceVal(tuple(combo))
    elif isinstance(ty, T.EnumType):
        info = env.enums[ty.name]
        for var in info.variants:
            names = tuple(var.field_names)
            if not var.field_types:
                yield V.EnumVal(ty.name, var.name, (), names)
            else:
                doms = [list(_enum(t, env, cap)) for t in var.field_types]
                for combo in _product(doms):
                    yield V.EnumVal(ty.name, var.name, tuple(combo), names)
    elif isinstance(ty, T.StructType):
        info = env.structs[ty.name]
        if not info.field_types:
            yield V.StructVal(ty.name, ())
        else:
            doms = [list(_enum(t, env, cap)) for t in info.field_types]
            for combo in _product(doms):
                yield V.StructVal(
                    ty.name, tuple(zip(info.field_names, combo))
                )
    else:
        raise AssertionError(f"not enumerable: {ty}")


def _product(domains: list[list]) -> Iterable[tuple]:
    if not domains:
        yield ()
        return
    head, rest = domains[0], domains[1:]
    for v in head:
        for combo in _product(rest):
            yield (v, *combo)


# ── Independent pattern matcher ──────────────────────────────────────


def oracle_matches(p: N.Pattern, v: V.Value, env: T.TypeEnv) -> bool:
    """Boolean-only reference matcher, written straight from the rules."""
    while isinstance(v, V.RefVal):
        v = v.inner
    if isinstance(p, (N.WildcardPat, N.RestPat)):
        return True
    if isinstance(p, N.GroupPat):
        return oracle_matches(p.inner, v, env)
    if isinstance(p, N.RefPat):
        return oracle_matches(p.inner, v, env)
    if isinstance(p, N.IdentPat):
        return p.sub is None or oracle_matches(p.sub, v, env)
    if isinstance(p, N.NameRefPat):
        res = p.resolution
        if res is None:
            res = _resolve_by_value(p.name, v, env)
        if res == "binding":
            return True
        if res == "const":
            return _oracle_eq(env.consts[p.name].value, v)
        if res == "variant":
            return isinstance(v, V.EnumVal) and v.variant == p.name
        if res == "unit_struct":
            return True  # single-valued struct type
        raise AssertionError(f"unresolved name pattern {p.name!r}")
    if isinstance(p, N.PathPat):
        res = p.resolution
        name = p.path[-1]
        if res is None:
            res = "variant" if len(p.path) >= 2 else _resolve_by_value(name, v, env)
        if res == "const":
            return _oracle_eq(env.consts[name].value, v)
        if res == "variant":
            return isinstance(v, V.EnumVal) and v.variant == name
        if res == "unit_struct":
            return True
        raise AssertionError(f"unresolved path pattern {p.path!r}")
    if isinstance(p, N.LiteralPat):
        return _oracle_eq(_lit_val(p), v)
    if isinstance(p, N.RangePat):
        x = v.value if isinstance(v, V.IntVal) else ord(v.value)
        lo = p.lo if isinstance(p.lo, int) else (None if p.lo is None else ord(p.lo))
        hi = p.hi if isinstance(p.hi, int) else (None if p.hi is None else ord(p.hi))
        if lo is not None and x < lo:
            return False
        if hi is not None:
            if p.inclusive and x > hi:
                return False
            if not p.inclusive and x >= hi:
                return False
        return True
    if isinstance(p, N.TuplePat):
        assert isinstance(v, V.TupleVal)
        return _match_seq(p.elems, list(v.elems), env)
    if isinstance(p, N.SlicePat):
        assert isinstance(v, (V.ArrayVal, V.SliceVal))
        return _match_seq(p.elems, list(v.elems), env)
    if isinstance(p, N.TupleStructPat):
        name = p.path[-1]
        if isinstance(v, V.EnumVal):
            if v.variant != name:
                return False
            return _match_seq(p.elems, list(v.payload), env)
        assert isinstance(v, V.StructVal)
        return _match_seq(p.elems, [f for _, f in v.fields], env)
    if isinstance(p, N.StructPat):
        name = p.path[-1]
        if isinstance(v, V.EnumVal):
            if v.variant != name:
                return False
            fields = dict(zip(v.field_names, v.payload))
        else:
            assert isinstance(v, V.StructVal)
            fields = dict(v.fields)
        return all(
            fp.pat is None or oracle_matches(fp.pat, fields[fp.name], env)
            for fp in p.fields
        )
    if isinstance(p, N.OrPat):
        return any(oracle_matches(alt, v, env) for alt in p.alts)
    raise AssertionError(f"oracle cannot match {type(p).__name__}")


def _resolve_by_value(name: str, v: V.Value, env: T.TypeEnv) -> str:
    """Mirror of bare-name resolution, keyed off the runtime value's shape
    instead of the static type (equivalent for well-typed programs)."""
    if isinstance(v, V.EnumVal):
        info = env.enums.get(v.enum_name)
        if info is not None:
            var = info.variant(name)
            if var is not None and var.style == "unit":
                return "variant"
    if name in env.consts:
        return "const"
    sinfo = env.structs.get(name)
    if sinfo is not None and sinfo.style == "unit":
        return "unit_struct"
    return "binding"


def _is_rest(q: N.Pattern) -> bool:
    return isinstance(q, N.RestPat) or (
        isinstance(q, N.IdentPat) and isinstance(q.sub, N.RestPat)
    )


def _match_seq(pats: list[N.Pattern], vals: list[V.Value], env) -> bool:
    rest_at = next((i for i, q in enumerate(pats) if _is_rest(q)), None)
    if rest_at is None:
        if len(pats) != len(vals):
            return False
        return all(oracle_matches(q, x, env) for q, x in zip(pats, vals))
    before, after = pats[:rest_at], pats[rest_at + 1:]
    if len(vals) < len(before) + len(after):
        return False
    head = vals[: len(before)]
    tail = vals[len(vals) - len(after):] if after else []
    return all(oracle_matches(q, x, env) for q, x in zip(before, head)) and all(
        oracle_matches(q, x, env) for q, x in zip(after, tail)
    )


def _oracle_eq(a: V.Value, b: V.Value) -> bool:
    while isinstance(a, V.RefVal):
        a = a.inner
    while isinstance(b, V.RefVal):
        b = b.inner
    if isinstance(a, (V.TupleVal, V.ArrayVal, V.SliceVal)):
        if not isinstance(b, (V.TupleVal, V.ArrayVal, V.SliceVal)):
            return False
        return len(a.elems) == len(b.elems) and all(
            _oracle_eq(x, y) for x, y in zip(a.elems, b.elems)
        )
    if isinstance(a, V.EnumVal):
        return (
            isinstance(b, V.EnumVal)
            and a.variant == b.variant
            and all(_oracle_eq(x, y) for x, y in zip(a.payload, b.payload))
        )
    if isinstance(a, V.StructVal):
        return isinstance(b, V.StructVal) and all(
            _oracle_eq(x, y)
            for (_, x), (_, y) in zip(a.fields, b.fields)
        )
    return type(a) is type(b) and a.value == b.value  # type: ignore[attr-defined]


def _lit_val(p: N.LiteralPat) -> V.Value:
    if p.lit_kind == "int":
        return V.IntVal(p.value, p.suffix or "i32")
    if p.lit_kind == "bool":
        return V.BoolVal(p.value)
    if p.lit_kind == "char":
        return V.CharVal(p.value)
    return V.StrVal(p.value)


# ── Independent boolean-structure evaluation and MC/DC oracle ────────


def eval_structure_oracle(
    s, assign: Callable[[int], bool]
) -> tuple[bool, dict[int, bool]]:
    """Short-circuit evaluation; returns (outcome, evaluated-conditions)."""
    seen: dict[int, bool] = {}

    def go(node) -> bool:
        tag = node[0]
        if tag == "const":
            return node[1]
        if tag == "cond":
            i = node[1]
            if i not in seen:
                seen[i] = assign(i)
            return seen[i]
        if tag == "not":
            return not go(node[1])
        if tag == "and":
            for child in node[1]:
                if not go(child):
                    return False
            return True
        if tag == "or":
            for child in node[1]:
                if go(child):
                    return True
            return False
        raise AssertionError(f"bad structure node {node!r}")

    return go(s), seen


def oracle_reachable_vectors(s, n: int) -> list[tuple[tuple[str, ...], bool]]:
    """All realizable (conds, outcome) pairs of an n-condition structure."""
    seen: set[tuple[tuple[str, ...], bool]] = set()
    for bits in range(2 ** n):
        assign = [(bits >> i) & 1 == 1 for i in range(n)]
        outcome, ev = eval_structure_oracle(s, lambda i: assign[i])
        conds = tuple(
            ("T" if ev[i] else "F") if i in ev else "-" for i in range(n)
        )
        seen.add((conds, outcome))
    return sorted(seen)


def naive_independence_pairs(
    vectors: list[tuple[tuple[str, ...], bool]], n: int
) -> dict[int, list[tuple[int, int, str]]]:
    """All-pairs scan applying the pair rule literally: the condition is
    evaluated with opposite values in the two vectors, the decision
    outcomes differ, and every other condition is equal in both or
    unevaluated in at least one. The pair is unique-cause when all other
    positions are exactly equal, masking otherwise."""
    pairs: dict[int, list[tuple[int, int, str]]] = {i: [] for i in range(n)}
    for a in range(len(vectors)):
        for b in range(a + 1, len(vectors)):
            (ca, oa), (cb, ob) = vectors[a], vectors[b]
            if oa == ob:
                continue
            for i in range(n):
                if {ca[i], cb[i]} != {"T", "F"}:
                    continue
                others = [j for j in range(n) if j != i]
                if not all(
                    ca[j] == cb[j] or ca[j] == "-" or cb[j] == "-"
                    for j in others
                ):
                    continue
                kind = (
                    "unique_cause"
                    if all(ca[j] == cb[j] for j in others)
                    else "masking"
                )
                pairs[i].append((a, b, kind))
    return pairs


def naive_mcdc_ok(
    vectors: list[tuple[tuple[str, ...], bool]],
    n: int,
    exempt: Optional[set[int]] = None,
) -> bool:
    exempt = exempt or set()
    pairs = naive_independence_pairs(vectors, n)
    for i in range(n):
        if i in exempt:
            continue
        seen = {c[i] for c, _ in vectors}
        if "T" not in seen or "F" not in seen or not pairs[i]:
            return False
    return True


# ── Type rendering and pattern embedding ─────────────────────────────


def type_src(ty: T.Type) -> str:
    """Render a type back to source form."""
    if isinstance(ty, T.RefType):
        return "&" + type_src(ty.inner)
    if isinstance(ty, T.SliceType):
        return f"[{type_src(ty.elem)}]"
    if isinstance(ty, T.ArrayType):
        return f"[{type_src(ty.elem)}; {ty.length}]"
    if isinstance(ty, T.TupleType):
        if len(ty.elems) == 1:
            return f"({type_src(ty.elems[0])},)"
        return "(" + ", ".join(type_src(t) for t in ty.elems) + ")"
    if isinstance(ty, T.BoolType):
        return "bool"
    if isinstance(ty, T.CharType):
        return "char"
    if isinstance(ty, T.StrType):
        return "str"
    if isinstance(ty, T.IntType):
        return ty.name
    if isinstance(ty, (T.EnumType, T.StructType)):
        return ty.name
    raise AssertionError(f"cannot render {ty}")


def checked_patterns(pairs: list[tuple[str, T.Type]], prelude: str):
    """Embed patterns in one program (one probe function each), run the
    checker, and return ([pattern-node, ...], env) with names resolved and
    ergonomics applied exactly as in production."""
    from rpscov.check import check_program, iter_patterns
    from rpscov.parser import parse_program

    chunks = [prelude]
    for k, (pat_src, ty) in enumerate(pairs):
        chunks.append(
            f"\nfn probe{k}(x: {type_src(ty)}) -> i32 {{\n"
            f"    match x {{\n        {pat_src} => 1,\n        _ => 0\n    }}\n}}\n"
        )
    prog = parse_program("".join(chunks), "<probe>")
    env = check_program(prog)
    found: dict[str, N.Pattern] = {}
    for fn_name, p in iter_patterns(prog):
        found.setdefault(fn_name, p)
    return [found[f"probe{k}"] for k in range(len(pairs))], env


def checked_pattern(pat_src: str, ty: T.Type, prelude: str):
    """Single-pattern form of `checked_patterns`; returns (p, p.ty, env)."""
    ps, env = checked_patterns([(pat_src, ty)], prelude)
    return ps[0], ps[0].ty, env


# ── Random pattern generation ────────────────────────────────────────


class PatternGen:
    """Random well-typed pattern sources over enumerable types.

    Types are drawn from bool, u8, two generated enums, one generated
    struct, and tuples/arrays/slices of those; slice element types are kept
    tiny so exhaustive enumeration stays feasible.
    """

    PRELUDE = """
enum Light { Red, Green }

enum Shape { Dot, Line(u8), Rect { w: u8, h: bool } }

struct Pair(bool, u8);
"""

    def __init__(self, rng: random.Random) -> None:
        self.rng = rng
        self._ctr = 0

    def build_env(self) -> T.TypeEnv:
        from rpscov.check import check_program
        from rpscov.parser import parse_program

        return check_program(parse_program(self.PRELUDE, "<prelude>"))

    # — types —

    def random_type(self) -> T.Type:
        r = self.rng
        roll = r.random()
        if roll < 0.45:
            return self.scalar_type()
        if roll < 0.60:
            # one arbitrary scalar, the rest tiny: keeps domains enumerable
            elems = [self.scalar_type()] + [
                self.tiny_type() for _ in range(r.randint(0, 2))
            ]
            r.shuffle(elems)
            return T.TupleType(tuple(elems))
        if roll < 0.75:
            return T.ArrayType(self.tiny_type(), r.randint(0, 3))
        if roll < 0.90:
            return T.RefType(False, T.SliceType(self.tiny_type()))
        return T.RefType(False, self.scalar_type())

    def scalar_type(self) -> T.Type:
        return self.rng.choice(
            [
                T.BoolType(),
                T.IntType("u8"),
                T.EnumType("Light"),
                T.EnumType("Shape"),
                T.StructType("Pair"),
            ]
        )

    def tiny_type(self) -> T.Type:
        return self.rng.choice([T.BoolType(), T.EnumType("Light")])

    # — patterns (source text) —

    def gen_pattern(self, ty: T.Type) -> str:
        self._ctr = 0
        return self._pat(ty, 0, True)

    def _pat(self, ty: T.Type, depth: int, bindings: bool) -> str:
        r = self.rng
        if depth > 3 or r.random() < 0.12:
            return self._name_or_wild(bindings)
        if r.random() < 0.08:
            return f"({self._pat(ty, depth + 1, bindings)})"
        if bindings and r.random() < 0.08 and not isinstance(ty, T.RefType):
            return f"{self._fresh()} @ {self._shaped(ty, depth + 1, False)}"
        if r.random() < 0.12:
            alts = [self._or_alt(ty, depth + 1) for _ in range(r.randint(2, 3))]
            return " | ".join(alts)
        return self._shaped(ty, depth, bindings)

    def _or_alt(self, ty: T.Type, depth: int) -> str:
        p = self._shaped(ty, depth, False)
        return p if "|" not in p else f"({p})"

    def _shaped(self, ty: T.Type, depth: int, bindings: bool) -> str:
        r = self.rng
        if isinstance(ty, T.RefType):
            if r.random() < 0.3 and not isinstance(ty.inner, T.SliceType):
                inner = self._shaped(ty.inner, depth + 1, bindings)
                if ".." in inner:  # a range directly under `&` must be grouped
                    inner = f"({inner})"
                return f"&{inner}"
            return self._shaped(ty.inner, depth, bindings)
        if isinstance(ty, T.BoolType):
            return r.choice(["true", "false", self._name_or_wild(bindings)])
        if isinstance(ty, T.IntType):
            return self._int_pat(bindings)
        if isinstance(ty, T.TupleType):
            inner = ", ".join(
                self._pat(t, depth + 1, bindings) for t in ty.elems
            )
            return f"({inner},)" if len(ty.elems) == 1 else f"({inner})"
        if isinstance(ty, T.ArrayType):
            use_rest = r.random() < 0.35
            width = ty.length if not use_rest else r.randint(0, ty.length)
            elems = [
                self._pat(ty.elem, depth + 1, bindings) for _ in range(width)
            ]
            if use_rest:
                elems.insert(r.randint(0, len(elems)), "..")
            return "[" + ", ".join(elems) + "]"
        if isinstance(ty, T.SliceType):
            use_rest = r.random() < 0.6
            width = r.randint(0, 3)
            elems = [
                self._pat(ty.elem, depth + 1, bindings) for _ in range(width)
            ]
            if use_rest:
                tail = ".."
                if bindings and r.random() < 0.4:
                    tail = f"{self._fresh()} @ .."
                elems.append(tail)
            return "[" + ", ".join(elems) + "]"
        if isinstance(ty, T.EnumType):
            return self._enum_pat(ty.name, depth, bindings)
        if isinstance(ty, T.StructType):
            if r.random() < 0.6:
                a = self._pat(T.BoolType(), depth + 1, bindings)
                b = self._pat(T.IntType("u8"), depth + 1, bindings)
                return f"Pair({a}, {b})"
            return "Pair(..)"
        raise AssertionError(f"no pattern shape for {ty}")

    def _enum_pat(self, name: str, depth: int, bindings: bool) -> str:
        r = self.rng
        if name == "Light":
            return r.choice(["Light::Red", "Light::Green", "Red", "Green"])
        variant = r.choice(["Dot", "Line", "Rect"])
        if variant == "Dot":
            return "Shape::Dot"
        if variant == "Line":
            inner = self._pat(T.IntType("u8"), depth + 1, bindings)
            return f"Shape::Line({inner})"
        style = r.random()
        if style < 0.3:
            return "Shape::Rect { .. }"
        w = self._pat(T.IntType("u8"), depth + 1, bindings)
        if style < 0.6:
            return f"Shape::Rect {{ w: {w}, .. }}"
        h = self._pat(T.BoolType(), depth + 1, bindings)
        return f"Shape::Rect {{ w: {w}, h: {h} }}"

    def _int_pat(self, bindings: bool) -> str:
        r = self.rng
        roll = r.random()
        if roll < 0.35:
            return str(r.randint(0, 255))
        lo, hi = sorted((r.randint(0, 255), r.randint(0, 255)))
        if roll < 0.50:
            return f"{lo}..={hi}"
        if roll < 0.62:
            return f"{lo}.."
        if roll < 0.74:
            return f"..={hi}"
        if roll < 0.82 and lo < hi:
            return f"{lo}..{hi}"
        if roll < 0.90:
            return "0..=255"
        return self._name_or_wild(bindings)

    def _name_or_wild(self, bindings: bool) -> str:
        if bindings and self.rng.random() < 0.5:
            return self._fresh()
        return "_"

    def _fresh(self) -> str:
        self._ctr += 1
        return f"x{self._ctr}"


# ── Random decision structures ───────────────────────────────────────


class DecisionGen:
    """Random And/Or/Not structures using each condition exactly once."""

    def __init__(self, rng: random.Random) -> None:
        self.rng = rng

    def random_structure(self, n: int):
        ids = list(range(n))
        self.rng.shuffle(ids)
        return self._build([("cond", i) for i in ids])

    def _build(self, leaves: list):
        r = self.rng
        if len(leaves) == 1:
            leaf = leaves[0]
            return ("not", leaf) if r.random() < 0.2 else leaf
        k = r.randint(1, len(leaves) - 1)
        left = self._build(leaves[:k])
        right = self._build(leaves[k:])
        node = (r.choice(("and", "or")), (left, right))
        return ("not", node) if r.random() < 0.15 else node

    def random_vector_set(self, s, n: int, k: Optional[int] = None):
        reachable = oracle_reachable_vectors(s, n)
        if k is None:
            k = self.rng.randint(1, min(len(reachable), n + 3))
        return self.rng.sample(reachable, min(k, len(reachable)))
