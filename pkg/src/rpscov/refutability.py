"""Refutability classification and pattern denotations.

Every sub-pattern is classified three ways:

  DirectlyRefutable    the node itself performs a check that can fail
  IndirectlyRefutable  the node cannot fail, but a descendant can
  Irrefutable          neither the node nor any descendant can fail

A pattern is refutable iff its root is not Irrefutable. The directly
refutable nodes are exactly the measurable conditions of the pattern.

`pattern_denotation` computes the exact set of scrutinee values a pattern
matches, as a value space. Guards are not part of a pattern and do not
restrict its denotation.

Slice patterns matched against dynamic slices support two rules, selected
by `slice_rule`:

  'verbatim'   the node is directly refutable iff none of its immediate
               element patterns is a range pattern
  'corrected'  the node is directly refutable iff its length constraint
               is not total (some slice length is excluded)

The default everywhere is 'verbatim'; see the decision emitters for the
observable consequences.
"""

from __future__ import annotations

from enum import Enum
from typing import Optional

from rpscov import nodes as N
from rpscov import types as T
from rpscov import valuespace as VS
from rpscov.errors import TypeCheckError
from rpscov.pretty import render_pattern


class RefutabilityClass(str, Enum):
    DIRECTLY_REFUTABLE = "DirectlyRefutable"
    INDIRECTLY_REFUTABLE = "IndirectlyRefutable"
    IRREFUTABLE = "Irrefutable"


DR = RefutabilityClass.DIRECTLY_REFUTABLE
IR = RefutabilityClass.INDIRECTLY_REFUTABLE
IRR = RefutabilityClass.IRREFUTABLE

SLICE_RULES = ("verbatim", "corrected")


# ── Shared shape helpers ─────────────────────────────────────────


def is_rest_elem(p: N.Pattern) -> bool:
    """True for `..` and for `name @ ..` in sequence element position."""
    if isinstance(p, N.RestPat):
        return True
    return isinstance(p, N.IdentPat) and isinstance(p.sub, N.RestPat)


def split_rest(elems: list[N.Pattern], span) -> tuple[list[N.Pattern], Optional[N.Pattern], list[N.Pattern]]:
    """Split sequence elements around at most one rest element."""
    rest_idx = [i for i, e in enumerate(elems) if is_rest_elem(e)]
    if len(rest_idx) > 1:
        raise TypeCheckError("at most one `..` per sequence pattern", span)
    if not rest_idx:
        return list(elems), None, []
    i = rest_idx[0]
    return list(elems[:i]), elems[i], list(elems[i + 1 :])


def positional_types(
    elems: list[N.Pattern], types: list[T.Type], span
) -> list[tuple[N.Pattern, T.Type]]:
    """Pair non-rest elements of a fixed-arity sequence with their types."""
    before, rest, after = split_rest(elems, span)
    n = len(types)
    if rest is None:
        if len(elems) != n:
            raise TypeCheckError(
                f"pattern has {len(elems)} elements but type has {n}", span
            )
        return list(zip(elems, types))
    if len(before) + len(after) > n:
        raise TypeCheckError("pattern has more elements than the type", span)
    pairs = list(zip(before, types[: len(before)]))
    pairs += list(zip(after, types[n - len(after) :]))
    return pairs


def resolve_struct_path(path: list[str], ty: T.Type, env: T.TypeEnv, span):
    """Resolve the path of a struct or tuple-struct pattern against the
    scrutinee type. Returns ('struct', StructInfo) or
    ('variant', EnumInfo, VariantInfo)."""
    ty = T.strip_refs(ty)
    if len(path) == 2:
        base, vname = path
        info = None
        if isinstance(ty, T.EnumType):
            cand = env.enums.get(ty.name)
            if cand is not None and (
                cand.name == base
                or (cand.builtin == "option" and base == "Option")
                or (cand.builtin == "result" and base == "Result")
            ):
                info = cand
        if info is None:
            info = env.enums.get(base)
        if info is None:
            raise TypeCheckError(f"unknown enum {base!r}", span)
        var = info.variant(vname)
        if var is None:
            raise TypeCheckError(f"enum {info.name} has no variant {vname!r}", span)
        return ("variant", info, var)
    name = path[0]
    if isinstance(ty, T.EnumType):
        info = env.enums.get(ty.name)
        if info is not None:
            var = info.variant(name)
            if var is not None:
                return ("variant", info, var)
    sinfo = env.structs.get(name)
    if sinfo is not None:
        return ("struct", sinfo)
    raise TypeCheckError(f"cannot resolve pattern path {name!r}", span)


def resolve_bare_name(name: str, ty: T.Type, env: T.TypeEnv) -> tuple[str, Optional[str]]:
    """Resolve a bare single-segment pattern name. Returns
    (resolution, enum_name). Precedence: unit variant of the scrutinee
    enum, then constant, then unit struct, then fresh binding."""
    ty = T.strip_refs(ty)
    if isinstance(ty, T.EnumType):
        info = env.enums.get(ty.name)
        if info is not None:
            var = info.variant(name)
            if var is not None and var.style == "unit":
                return ("variant", info.name)
    if name in env.consts:
        return ("const", None)
    sinfo = env.structs.get(name)
    if sinfo is not None and sinfo.style == "unit":
        return ("unit_struct", None)
    return ("binding", None)


def _resolution_of(p, ty: T.Type, env: T.TypeEnv) -> tuple[str, Optional[str]]:
    if p.resolution is not None:
        return p.resolution, p.enum_name
    return resolve_bare_name(p.name, ty, env)


def _variant_count(enum_name: str, env: T.TypeEnv) -> int:
    return len(env.enums[enum_name].variants)


def struct_field_pairs(
    p: N.StructPat, info, span
) -> list[tuple[Optional[N.Pattern], str, T.Type]]:
    """Pair struct-pattern fields with their declared types, in declared
    order. The pattern slot is None for fields left to `..` or bound by
    shorthand without a sub-pattern... shorthand yields a binding, which
    is returned as None-with-name and handled by callers as irrefutable."""
    by_name = {}
    for f in p.fields:
        if f.name in by_name:
            raise TypeCheckError(f"field {f.name!r} bound twice", span)
        by_name[f.name] = f
    declared = list(zip(info.field_names, info.field_types))
    known = {n for n, _ in declared}
    for f in p.fields:
        if f.name not in known:
            raise TypeCheckError(f"no field {f.name!r} on {info.name}", span)
    if not p.has_rest:
        missing = [n for n, _ in declared if n not in by_name]
        if missing:
            raise TypeCheckError(
                f"pattern does not cover field(s) {', '.join(missing)}", span
            )
    out = []
    for fname, fty in declared:
        f = by_name.get(fname)
        out.append((f.pat if f is not None else None, fname, fty))
    return out


# ── Denotation ───────────────────────────────────────────────────


def pattern_denotation(p: N.Pattern, ty: T.Type, env: T.TypeEnv) -> VS.Space:
    """The exact set of values of type `ty` the pattern matches."""
    ty = T.strip_refs(ty)

    if isinstance(p, (N.WildcardPat, N.RestPat)):
        return VS.value_space_of(ty, env)
    if isinstance(p, N.IdentPat):
        if p.sub is not None:
            return pattern_denotation(p.sub, ty, env)
        return VS.value_space_of(ty, env)
    if isinstance(p, N.NameRefPat):
        res, enum_name = _resolution_of(p, ty, env)
        if res == "binding":
            return VS.value_space_of(ty, env)
        if res == "const":
            info = env.consts[p.name]
            return VS.space_of_value(info.value, env)
        if res == "unit_struct":
            return VS.value_space_of(ty, env)
        return _variant_denotation(enum_name or ty.name, p.name, [], env)  # type: ignore[union-attr]
    if isinstance(p, N.LiteralPat):
        return _literal_space(p.value, p.lit_kind, ty)
    if isinstance(p, N.RangePat):
        return _range_space(p, ty)
    if isinstance(p, N.RefPat):
        return pattern_denotation(p.inner, ty, env)
    if isinstance(p, N.GroupPat):
        return pattern_denotation(p.inner, ty, env)
    if isinstance(p, N.OrPat):
        out: VS.Space = VS.EMPTY
        for alt in p.alts:
            out = VS.space_union(out, pattern_denotation(alt, ty, env))
        return out
    if isinstance(p, N.TuplePat):
        if not isinstance(ty, T.TupleType):
            raise TypeCheckError(f"tuple pattern against {ty}", p.span)
        types = list(ty.elems)
        cell = [VS.value_space_of(t, env) for t in types]
        _fill_positional(cell, p.elems, types, env, p.span)
        return VS.TupleSpace(VS.ProductSpace.of([tuple(cell)], len(cell)))
    if isinstance(p, N.StructPat):
        target = resolve_struct_path(p.path, ty, env, p.span)
        if target[0] == "struct":
            info = target[1]
            cell = []
            for fpat, _, fty in struct_field_pairs(p, info, p.span):
                if fpat is None:
                    cell.append(VS.value_space_of(fty, env))
                else:
                    cell.append(pattern_denotation(fpat, fty, env))
            return VS.StructSpace(
                info.name, VS.ProductSpace.of([tuple(cell)], len(cell))
            )
        _, einfo, var = target
        pairs = _variant_struct_pairs(p, var, p.span)
        cell = [
            pattern_denotation(fp, ft, env) if fp is not None else VS.value_space_of(ft, env)
            for fp, ft in pairs
        ]
        return _variant_denotation(einfo.name, var.name, cell, env)
    if isinstance(p, N.TupleStructPat):
        target = resolve_struct_path(p.path, ty, env, p.span)
        if target[0] == "struct":
            info = target[1]
            types = list(info.field_types)
            cell = [VS.value_space_of(t, env) for t in types]
            _fill_positional(cell, p.elems, types, env, p.span)
            return VS.StructSpace(
                info.name, VS.ProductSpace.of([tuple(cell)], len(cell))
            )
        _, einfo, var = target
        types = list(var.field_types)
        cell = [VS.value_space_of(t, env) for t in types]
        _fill_positional(cell, p.elems, types, env, p.span)
        return _variant_denotation(einfo.name, var.name, cell, env)
    if isinstance(p, N.PathPat):
        if p.resolution == "const" or (p.resolution is None and len(p.path) == 1 and p.path[0] in env.consts):
            info = env.consts[p.path[0]]
            return VS.space_of_value(info.value, env)
        if len(p.path) == 1 and p.resolution in (None, "unit_struct"):
            return VS.value_space_of(ty, env)
        target = resolve_struct_path(p.path, ty, env, p.span)
        if target[0] == "struct":
            return VS.value_space_of(ty, env)
        _, einfo, var = target
        return _variant_denotation(einfo.name, var.name, [], env)
    if isinstance(p, N.SlicePat):
        if isinstance(ty, T.ArrayType):
            types = [ty.elem] * ty.length
            cell = [VS.value_space_of(t, env) for t in types]
            _fill_positional(cell, p.elems, types, env, p.span)
            return VS.ArraySpace(VS.ProductSpace.of([tuple(cell)], len(cell)))
        if isinstance(ty, T.SliceType):
            return _slice_denotation(p, ty, env)
        raise TypeCheckError(f"slice pattern against {ty}", p.span)
    raise AssertionError(f"unknown pattern node {p!r}")


def _fill_positional(cell, elems, types, env, span) -> None:
    before, rest, after = split_rest(elems, span)
    n = len(types)
    if rest is None and len(elems) != n:
        raise TypeCheckError(f"pattern has {len(elems)} elements but type has {n}", span)
    if len(before) + len(after) > n:
        raise TypeCheckError("pattern has more elements than the type", span)
    for i, pat in enumerate(before):
        cell[i] = pattern_denotation(pat, types[i], env)
    for j, pat in enumerate(after):
        i = n - len(after) + j
        cell[i] = pattern_denotation(pat, types[i], env)


def _variant_struct_pairs(p: N.StructPat, var, span):
    by_name = {f.name: f for f in p.fields}
    known = set(var.field_names)
    for f in p.fields:
        if f.name not in known:
            raise TypeCheckError(f"no field {f.name!r} on variant {var.name}", span)
    if not p.has_rest:
        missing = [n for n in var.field_names if n not in by_name]
        if missing:
            raise TypeCheckError(
                f"pattern does not cover field(s) {', '.join(missing)}", span
            )
    out = []
    for fname, fty in zip(var.field_names, var.field_types):
        f = by_name.get(fname)
        out.append((f.pat if f is not None else None, fty))
    return out


def _variant_denotation(enum_name: str, variant: str, cell, env: T.TypeEnv) -> VS.EnumSpace:
    info = env.enums[enum_name]
    variants = {}
    for v in info.variants:
        if v.name == variant:
            variants[v.name] = VS.ProductSpace.of([tuple(cell)], len(cell))
        else:
            variants[v.name] = VS.ProductSpace(len(v.field_types), [])
    return VS.EnumSpace(enum_name, variants)


def _literal_space(value, kind: str, ty: T.Type) -> VS.Space:
    if kind == "int":
        if not isinstance(ty, T.IntType):
            raise TypeCheckError(f"integer literal pattern against {ty}")
        return VS.IntSpace(ty.name, VS.IntervalSet.of([(value, value)]))
    if kind == "bool":
        return VS.BoolSpace(frozenset((bool(value),)))
    if kind == "char":
        cp = ord(str(value))
        return VS.CharSpace(VS.IntervalSet.of([(cp, cp)]))
    if kind == "str":
        return VS.StrSpace.singleton(str(value))
    raise AssertionError(kind)


def _range_space(p: N.RangePat, ty: T.Type) -> VS.Space:
    if p.lit_kind == "int":
        if not isinstance(ty, T.IntType):
            raise TypeCheckError(f"integer range pattern against {ty}", p.span)
        tmin, tmax = ty.bounds()
        lo = int(p.lo) if p.lo is not None else tmin
        hi = int(p.hi) if p.hi is not None else tmax
        if p.hi is not None and not p.inclusive:
            hi -= 1
        return VS.IntSpace(ty.name, VS.IntervalSet.of([(lo, hi)]))
    if p.lit_kind == "char":
        if not isinstance(ty, T.CharType):
            raise TypeCheckError(f"char range pattern against {ty}", p.span)
        lo = ord(str(p.lo)) if p.lo is not None else 0
        hi = ord(str(p.hi)) if p.hi is not None else 0x10FFFF
        if p.hi is not None and not p.inclusive:
            hi -= 1
        return VS.CharSpace.of_range(lo, hi)
    raise TypeCheckError("range patterns cover integers and chars only", p.span)


def _slice_denotation(p: N.SlicePat, ty: T.SliceType, env: T.TypeEnv) -> VS.SliceSpace:
    before, rest, after = split_rest(p.elems, p.span)
    if rest is not None and after:
        raise TypeCheckError(
            "`..` must be trailing in a pattern against a slice", p.span
        )
    cap = max(1, env.slice_len_cap)
    w = len(before)
    if w > cap:
        raise TypeCheckError("slice pattern wider than the tracked length cap", p.span)
    denots = tuple(pattern_denotation(e, ty.elem, env) for e in before)
    elem_top = VS.value_space_of(ty.elem, env)
    explicit = {}
    for n in range(cap + 1):
        if rest is None:
            cells = [denots] if n == w else []
        else:
            cells = [denots + (elem_top,) * (n - w)] if n >= w else []
        explicit[n] = VS.ProductSpace.of(cells, n)
    if rest is None:
        tail = VS.ProductSpace(cap, [])
    else:
        tail = VS.ProductSpace.of([denots + (elem_top,) * (cap - w)], cap)
    return VS.SliceSpace(elem_top, cap, explicit, tail)


# ── Classification ───────────────────────────────────────────────


def classify_pattern(
    p: N.Pattern, ty: T.Type, env: T.TypeEnv, slice_rule: str = "verbatim"
) -> RefutabilityClass:
    """Classify every node of the pattern tree, annotating each node's
    `refutability` field, and return the root class."""
    if slice_rule not in SLICE_RULES:
        raise ValueError(f"unknown slice rule {slice_rule!r}")
    return _classify(p, ty, env, slice_rule)


def _set(p: N.Pattern, c: RefutabilityClass) -> RefutabilityClass:
    p.refutability = c
    return c


def _classify(p: N.Pattern, ty: T.Type, env: T.TypeEnv, rule: str) -> RefutabilityClass:
    ty = T.strip_refs(ty)

    if isinstance(p, N.LiteralPat):
        return _set(p, DR)
    if isinstance(p, (N.WildcardPat, N.RestPat)):
        return _set(p, IRR)
    if isinstance(p, N.IdentPat):
        if p.sub is None:
            return _set(p, IRR)
        c = _classify(p.sub, ty, env, rule)
        return _set(p, IRR if c is IRR else IR)
    if isinstance(p, N.NameRefPat):
        res, enum_name = _resolution_of(p, ty, env)
        p.resolution, p.enum_name = res, enum_name
        if res == "binding":
            return _set(p, IRR)
        if res == "const":
            return _set(p, DR)
        if res == "unit_struct":
            return _set(p, IRR)
        n = _variant_count(enum_name or ty.name, env)  # type: ignore[union-attr]
        return _set(p, DR if n > 1 else IRR)
    if isinstance(p, N.RangePat):
        space = _range_space(p, ty)
        top = VS.value_space_of(ty, env)
        return _set(p, IRR if VS.space_equal(space, top) else DR)
    if isinstance(p, (N.RefPat, N.GroupPat)):
        c = _classify(p.inner, ty, env, rule)
        return _set(p, IRR if c is IRR else IR)
    if isinstance(p, N.TuplePat):
        if not isinstance(ty, T.TupleType):
            raise TypeCheckError(f"tuple pattern against {ty}", p.span)
        cs = [
            _classify(e, t, env, rule)
            for e, t in positional_types(p.elems, list(ty.elems), p.span)
        ]
        for e in p.elems:
            if is_rest_elem(e) and e.refutability is None:
                _classify_rest_only(e)
        return _set(p, IRR if all(c is IRR for c in cs) else IR)
    if isinstance(p, N.StructPat):
        target = resolve_struct_path(p.path, ty, env, p.span)
        if target[0] == "struct":
            info = target[1]
            cs = [
                _classify(fp, ft, env, rule)
                for fp, _, ft in struct_field_pairs(p, info, p.span)
                if fp is not None
            ]
            return _set(p, IRR if all(c is IRR for c in cs) else IR)
        _, einfo, var = target
        cs = [
            _classify(fp, ft, env, rule)
            for fp, ft in _variant_struct_pairs(p, var, p.span)
            if fp is not None
        ]
        return _set(p, _variant_node_class(einfo, cs))
    if isinstance(p, N.TupleStructPat):
        target = resolve_struct_path(p.path, ty, env, p.span)
        if target[0] == "struct":
            info = target[1]
            cs = [
                _classify(e, t, env, rule)
                for e, t in positional_types(p.elems, list(info.field_types), p.span)
            ]
            _classify_rests(p.elems)
            return _set(p, IRR if all(c is IRR for c in cs) else IR)
        _, einfo, var = target
        cs = [
            _classify(e, t, env, rule)
            for e, t in positional_types(p.elems, list(var.field_types), p.span)
        ]
        _classify_rests(p.elems)
        return _set(p, _variant_node_class(einfo, cs))
    if isinstance(p, N.PathPat):
        if p.resolution == "const" or (
            p.resolution is None and len(p.path) == 1 and p.path[0] in env.consts
        ):
            return _set(p, DR)
        if len(p.path) == 1 and p.resolution == "unit_struct":
            return _set(p, IRR)
        target = resolve_struct_path(p.path, ty, env, p.span)
        if target[0] == "struct":
            return _set(p, IRR)
        _, einfo, _ = target
        n = len(einfo.variants)
        return _set(p, DR if n > 1 else IRR)
    if isinstance(p, N.SlicePat):
        if isinstance(ty, T.ArrayType):
            cs = [
                _classify(e, t, env, rule)
                for e, t in positional_types(p.elems, [ty.elem] * ty.length, p.span)
            ]
            _classify_rests(p.elems)
            return _set(p, IRR if all(c is IRR for c in cs) else IR)
        if not isinstance(ty, T.SliceType):
            raise TypeCheckError(f"slice pattern against {ty}", p.span)
        before, rest, after = split_rest(p.elems, p.span)
        if rest is not None and after:
            raise TypeCheckError(
                "`..` must be trailing in a pattern against a slice", p.span
            )
        cs = [_classify(e, ty.elem, env, rule) for e in before]
        if rest is not None:
            _classify_rest_only(rest)
        if rule == "verbatim":
            has_range_child = any(isinstance(e, N.RangePat) for e in p.elems)
            return _set(p, IR if has_range_child else DR)
        length_total = rest is not None and len(before) == 0
        if not length_total:
            return _set(p, DR)
        return _set(p, IRR if all(c is IRR for c in cs) else IR)
    if isinstance(p, N.OrPat):
        cs = [_classify(a, ty, env, rule) for a in p.alts]
        if any(c is IRR for c in cs):
            return _set(p, IRR)
        union: VS.Space = VS.EMPTY
        for a in p.alts:
            union = VS.space_union(union, pattern_denotation(a, ty, env))
        top = VS.value_space_of(ty, env)
        if VS.space_equal(union, top):
            return _set(p, IRR)
        return _set(p, IR)
    raise AssertionError(f"unknown pattern node {p!r}")


def _classify_rests(elems: list[N.Pattern]) -> None:
    for e in elems:
        if is_rest_elem(e) and e.refutability is None:
            _classify_rest_only(e)


def _classify_rest_only(e: N.Pattern) -> None:
    # Rest elements sit outside positional pairing; they are irrefutable.
    if isinstance(e, N.IdentPat):
        _set(e.sub, IRR)  # type: ignore[arg-type]
    _set(e, IRR)


def _variant_node_class(einfo, child_classes) -> RefutabilityClass:
    if len(einfo.variants) > 1:
        return DR
    if any(c is not IRR for c in child_classes):
        return IR
    return IRR


def pattern_is_refutable(
    p: N.Pattern, ty: T.Type, env: T.TypeEnv, slice_rule: str = "verbatim"
) -> bool:
    return classify_pattern(p, ty, env, slice_rule) is not IRR


# ── Tree dump ────────────────────────────────────────────────────

_ABBREV = {DR: "directly-refutable", IR: "indirectly-refutable", IRR: "irrefutable"}


def dump_pattern_tree(
    p: N.Pattern, ty: T.Type, env: T.TypeEnv, slice_rule: str = "verbatim"
) -> str:
    """Indented decomposition of a pattern into classified sub-patterns."""
    classify_pattern(p, ty, env, slice_rule)
    lines: list[str] = []

    def walk(node: N.Pattern, depth: int) -> None:
        kind = N.sub_pattern_kind(node)
        cls = _ABBREV.get(node.refutability, "?")
        lines.append(f"{'  ' * depth}{kind} `{render_pattern(node)}`  {cls}")
        for c in node.children():
            walk(c, depth + 1)

    walk(p, 0)
    return "\n".join(lines)
