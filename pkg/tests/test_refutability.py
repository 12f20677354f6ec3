"""Refutability classification tests.

Known-value tests pin the per-node rules (literals, bindings, ranges,
wrappers, structs, enums, tuples, arrays, slices, paths, or-patterns)
and the indented tree dump. Property tests check agreement with brute
enumeration: a pattern classifies irrefutable exactly when it matches
every value of its type — exact under the corrected slice rule, and
deviating only on rest-only slice sub-patterns under the verbatim rule.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import PatternGen, all_values, checked_pattern, checked_patterns, oracle_matches
from rpscov import nodes as N
from rpscov import types as T
from rpscov.parser import parse_pattern
from rpscov.refutability import (
    RefutabilityClass,
    classify_pattern,
    dump_pattern_tree,
    pattern_is_refutable,
)

DR = RefutabilityClass.DIRECTLY_REFUTABLE
IR = RefutabilityClass.INDIRECTLY_REFUTABLE
IRR = RefutabilityClass.IRREFUTABLE


def _cls(pat_src: str, ty: T.Type, rule: str = "verbatim") -> RefutabilityClass:
    p, pty, env = checked_pattern(pat_src, ty, PatternGen.PRELUDE)
    return classify_pattern(p, pty, env, rule)


# ── Per-node rules ───────────────────────────────────────────────────


def test_class_values_are_stable_names():
    assert DR.value == "DirectlyRefutable"
    assert IR.value == "IndirectlyRefutable"
    assert IRR.value == "Irrefutable"


def test_literals_and_bindings():
    """Literals are directly refutable; bindings and _ are irrefutable."""
    assert _cls("3", T.IntType("u8")) is DR
    assert _cls("true", T.BoolType()) is DR
    assert _cls("_", T.BoolType()) is IRR
    assert _cls("x", T.IntType("u8")) is IRR
    assert _cls("mut m", T.IntType("u8")) is IRR


def test_identifier_with_sub_pattern():
    """`name @ sub` is irrefutable iff sub is; else indirectly refutable."""
    assert _cls("x @ 3", T.IntType("u8")) is IR
    assert _cls("x @ _", T.IntType("u8")) is IRR


def test_range_rules():
    """Full-domain ranges are irrefutable; partial ones directly refutable."""
    assert _cls("0..=255", T.IntType("u8")) is IRR
    assert _cls("0..=254", T.IntType("u8")) is DR
    assert _cls("1..", T.IntType("u8")) is DR
    assert _cls("-128..=127", T.IntType("i8")) is IRR
    assert _cls("0..", T.IntType("u8")) is IRR


def test_wrapper_rules():
    """Groups and references pass irrefutability through, demote DR to IR."""
    assert _cls("(3)", T.IntType("u8")) is IR
    assert _cls("(_)", T.IntType("u8")) is IRR
    assert _cls("&true", T.RefType(False, T.BoolType())) is IR
    assert _cls("&x", T.RefType(False, T.BoolType())) is IRR


def test_struct_and_enum_rules():
    """Structs follow their children; multi-variant enums are DR."""
    assert _cls("Pair(a, b)", T.StructType("Pair")) is IRR
    assert _cls("Pair(true, _)", T.StructType("Pair")) is IR
    assert _cls("Pair(..)", T.StructType("Pair")) is IRR
    assert _cls("Shape::Dot", T.EnumType("Shape")) is DR
    assert _cls("Shape::Line(x)", T.EnumType("Shape")) is DR
    assert _cls("Light::Red", T.EnumType("Light")) is DR
    assert _cls("Red", T.EnumType("Light")) is DR


def test_single_variant_enum():
    """A one-variant enum's variant pattern cannot fail at the top."""
    prelude = PatternGen.PRELUDE + "\nenum Only { Just(u8) }\n"
    p, pty, env = checked_pattern("Only::Just(x)", T.EnumType("Only"), prelude)
    assert classify_pattern(p, pty, env) is IRR
    p, pty, env = checked_pattern("Only::Just(3)", T.EnumType("Only"), prelude)
    assert classify_pattern(p, pty, env) is IR


def test_tuple_and_array_rules():
    two = T.TupleType((T.BoolType(), T.IntType("u8")))
    assert _cls("(a, b)", two) is IRR
    assert _cls("(true, b)", two) is IR
    arr = T.ArrayType(T.BoolType(), 2)
    assert _cls("[x, y]", arr) is IRR
    assert _cls("[true, y]", arr) is IR
    assert _cls("[_, ..]", arr) is IRR


def test_slice_rules_verbatim_vs_corrected():
    """Verbatim: DR without a range child, IR with one — even for `[..]`.
    Corrected: rest-only patterns become irrefutable."""
    ty = T.RefType(False, T.SliceType(T.IntType("u8")))

    def slice_cls(src, rule):
        p, pty, env = checked_pattern(src, ty, PatternGen.PRELUDE)
        classify_pattern(p, pty, env, rule)
        return p.inner.refutability  # below the implicit reference node

    assert slice_cls("[..]", "verbatim") is DR
    assert slice_cls("[..]", "corrected") is IRR
    assert slice_cls("[x @ ..]", "verbatim") is DR
    assert slice_cls("[x @ ..]", "corrected") is IRR
    assert slice_cls("[1, ..]", "verbatim") is DR
    assert slice_cls("[1, ..]", "corrected") is DR
    assert slice_cls("[1..=5, ..]", "verbatim") is IR
    assert slice_cls("[1..=5, ..]", "corrected") is DR
    assert slice_cls("[_, _]", "verbatim") is DR
    assert slice_cls("[_, _]", "corrected") is DR


def test_or_pattern_rules():
    """An or of refutable alternatives is IR in general, but irrefutable
    when the alternatives jointly cover the whole type."""
    assert _cls("Red | Green", T.EnumType("Light")) is IRR
    assert _cls("Shape::Dot | Shape::Line(_)", T.EnumType("Shape")) is IR
    assert _cls("true | false", T.BoolType()) is IRR
    assert _cls("0..=100 | 50..=255", T.IntType("u8")) is IRR
    assert _cls("0..=100 | 102..=255", T.IntType("u8")) is IR
    assert _cls("_ | 3", T.IntType("u8")) is IRR


def test_pattern_is_refutable_boolean_view():
    assert not pattern_is_refutable(
        *_checked("_", T.BoolType())
    )
    assert pattern_is_refutable(*_checked("true", T.BoolType()))


def _checked(src, ty):
    p, pty, env = checked_pattern(src, ty, PatternGen.PRELUDE)
    return p, pty, env


# ── Tree dump ────────────────────────────────────────────────────────


def test_dump_pattern_tree_pinned():
    """The indented decomposition of a mixed slice pattern."""
    ty = T.RefType(False, T.SliceType(T.EnumType("Option<i32>")))
    prelude = PatternGen.PRELUDE + "\nfn touch(o: Option<i32>) -> i32 { 0 }\n"
    p, pty, env = checked_pattern(
        "[Some(first), None, Some(1..)]", ty, prelude
    )
    got = dump_pattern_tree(p, pty, env, "verbatim")
    assert got == (
        "Reference `[Some(first), None, Some(1..)]`  indirectly-refutable\n"
        "  Slice `[Some(first), None, Some(1..)]`  directly-refutable\n"
        "    TupleStruct `Some(first)`  directly-refutable\n"
        "      Identifier `first`  irrefutable\n"
        "    Path `None`  directly-refutable\n"
        "    TupleStruct `Some(1..)`  directly-refutable\n"
        "      Range `1..`  directly-refutable"
    )


# ── Enumeration agreement ────────────────────────────────────────────


def _has_rest_only_slice(p: N.Pattern, under_slice_ty: bool = False) -> bool:
    """Does any sub-pattern hit the verbatim rest-only anomaly?"""
    if isinstance(p, N.SlicePat):
        from rpscov.refutability import is_rest_elem

        if p.elems and all(is_rest_elem(e) for e in p.elems):
            return True
    return any(_has_rest_only_slice(c) for c in p.children())


@pytest.mark.property_based
@given(st.integers(0, 10**9))
@settings(max_examples=80, deadline=None)
def test_corrected_classification_matches_enumeration(seed):
    """Under the corrected rule: irrefutable ⟺ matches the whole domain."""
    gen = PatternGen(random.Random(seed))
    ty = gen.random_type()
    src = gen.gen_pattern(ty)
    p, pty, env = checked_pattern(src, ty, gen.PRELUDE)
    domain = all_values(pty, env, slice_len_max=env.slice_len_cap + 2)
    matches_all = all(oracle_matches(p, v, env) for v in domain)
    cls = classify_pattern(p, pty, env, "corrected")
    assert (cls is IRR) == matches_all, f"{src!r} over {ty}: {cls.value}"


@pytest.mark.property_based
@given(st.integers(0, 10**9))
@settings(max_examples=80, deadline=None)
def test_verbatim_deviations_are_rest_only_slices(seed):
    """The verbatim rule disagrees with enumeration only on patterns
    containing a rest-only slice sub-pattern against a slice type."""
    gen = PatternGen(random.Random(seed))
    ty = gen.random_type()
    src = gen.gen_pattern(ty)
    p, pty, env = checked_pattern(src, ty, gen.PRELUDE)
    domain = all_values(pty, env, slice_len_max=env.slice_len_cap + 2)
    matches_all = all(oracle_matches(p, v, env) for v in domain)
    cls = classify_pattern(p, pty, env, "verbatim")
    if (cls is IRR) != matches_all:
        assert _has_rest_only_slice(p), f"unexpected deviation on {src!r}"


@pytest.mark.property_based
@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_grouping_preserves_refutability(seed):
    """Wrapping in parentheses never changes refutable vs irrefutable."""
    gen = PatternGen(random.Random(seed))
    ty = gen.random_type()
    src = gen.gen_pattern(ty)
    (p, q), env = checked_patterns([(src, ty), (f"({src})", ty)], gen.PRELUDE)
    a = classify_pattern(p, p.ty, env)
    b = classify_pattern(q, q.ty, env)
    assert (a is IRR) == (b is IRR)
