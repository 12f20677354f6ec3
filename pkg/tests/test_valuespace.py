"""Value-space algebra tests.

The representation claims to be exact: union, intersection, subtraction,
complement, subset and equality must agree with pointwise membership over
the whole (enumerated) domain. Property tests draw random spaces as
denotations of random checked patterns; known-value tests pin interval
arithmetic, bool/str edge cases, and slice length pooling.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import PatternGen, all_values, checked_pattern, checked_patterns
from rpscov import types as T
from rpscov import valuespace as VS
from rpscov import values as V
from rpscov.refutability import pattern_denotation


# ── IntervalSet ──────────────────────────────────────────────────────


def test_interval_set_known():
    """Construction merges overlaps and adjacency; ops are exact."""
    s = VS.IntervalSet.of([(5, 9), (0, 3), (4, 4)])
    assert s.ivs == ((0, 9),)
    assert s.count() == 10

    s = VS.IntervalSet.of([(0, 2), (5, 7)])
    assert s.ivs == ((0, 2), (5, 7))
    assert s.contains(2) and not s.contains(3)

    full = VS.IntervalSet.of([(0, 255)])
    hole = full.subtract(VS.IntervalSet.of([(10, 20)]))
    assert hole.contains(9) and hole.contains(21) and not hole.contains(15)
    assert hole.count() == 256 - 11

    assert full.intersect(hole).ivs == hole.ivs
    assert hole.union(VS.IntervalSet.of([(10, 20)])).ivs == full.ivs
    assert VS.IntervalSet.of([]).is_empty()


@pytest.mark.property_based
@given(
    st.lists(st.tuples(st.integers(0, 60), st.integers(0, 60)), max_size=6),
    st.lists(st.tuples(st.integers(0, 60), st.integers(0, 60)), max_size=6),
)
@settings(max_examples=200)
def test_interval_set_matches_python_sets(a_pairs, b_pairs):
    """Interval ops equal Python set ops over 0..=60."""
    def as_set(pairs):
        out = set()
        for lo, hi in pairs:
            out |= set(range(lo, hi + 1))
        return out

    a = VS.IntervalSet.of(a_pairs)
    b = VS.IntervalSet.of(b_pairs)
    sa, sb = as_set(a_pairs), as_set(b_pairs)
    for n in range(61):
        assert a.contains(n) == (n in sa)
        assert a.union(b).contains(n) == (n in sa | sb)
        assert a.intersect(b).contains(n) == (n in sa & sb)
        assert a.subtract(b).contains(n) == (n in sa - sb)
    assert a.count() == len(sa)


# ── Space algebra vs membership ──────────────────────────────────────


def _two_spaces(seed: int):
    """Two random pattern denotations over one shared type and env."""
    gen = PatternGen(random.Random(seed))
    ty = gen.random_type()
    srcs = [gen.gen_pattern(ty), gen.gen_pattern(ty)]
    (pa, pb), env = checked_patterns([(s, ty) for s in srcs], gen.PRELUDE)
    a = pattern_denotation(pa, pa.ty, env)
    b = pattern_denotation(pb, pb.ty, env)
    domain = all_values(pa.ty, env, slice_len_max=env.slice_len_cap + 2)
    return a, b, pa.ty, env, domain


@pytest.mark.property_based
@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_space_ops_match_membership(seed):
    """union/intersect/subtract/complement agree with pointwise membership."""
    a, b, ty, env, domain = _two_spaces(seed)
    u = VS.space_union(a, b)
    i = VS.space_intersect(a, b)
    d = VS.space_subtract(a, b)
    c = VS.space_complement(a, ty, env)
    for v in domain:
        ina, inb = a.contains(v), b.contains(v)
        assert u.contains(v) == (ina or inb)
        assert i.contains(v) == (ina and inb)
        assert d.contains(v) == (ina and not inb)
        assert c.contains(v) == (not ina)


@pytest.mark.property_based
@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_subset_equality_emptiness_consistent(seed):
    """subset/equal/is_empty are consistent with membership and each other."""
    a, b, ty, env, domain = _two_spaces(seed)
    point_subset = all(b.contains(v) for v in domain if a.contains(v))
    if VS.space_is_subset(a, b):
        assert point_subset
    if VS.space_equal(a, b):
        assert VS.space_is_subset(a, b) and VS.space_is_subset(b, a)
    assert VS.space_is_subset(a, a) and VS.space_equal(a, a)
    d = VS.space_subtract(a, b)
    assert VS.space_is_subset(a, b) == d.is_empty()
    if a.is_empty():
        assert not any(a.contains(v) for v in domain)


@pytest.mark.property_based
@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_complement_laws(seed):
    """A ∪ Aᶜ = ⊤, A ∩ Aᶜ = ∅, (Aᶜ)ᶜ = A."""
    a, _, ty, env, _ = _two_spaces(seed)
    top = VS.value_space_of(ty, env)
    c = VS.space_complement(a, ty, env)
    assert VS.space_equal(VS.space_union(a, c), top)
    assert VS.space_intersect(a, c).is_empty()
    assert VS.space_equal(VS.space_complement(c, ty, env), a)


@pytest.mark.property_based
@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_witness_membership(seed):
    """A non-empty space's witness is a member; top contains the domain."""
    a, b, ty, env, domain = _two_spaces(seed)
    top = VS.value_space_of(ty, env)
    for v in domain:
        assert top.contains(v)
    for s in (a, b, VS.space_subtract(top, a)):
        if not s.is_empty():
            assert s.contains(s.witness(env))


@pytest.mark.property_based
@given(st.integers(0, 10**9))
@settings(max_examples=40, deadline=None)
def test_space_of_value_singleton(seed):
    """space_of_value(v) contains v and nothing else in the domain."""
    gen = PatternGen(random.Random(seed))
    ty = gen.random_type()
    _, pty, env = checked_pattern("_", ty, gen.PRELUDE)
    domain = all_values(pty, env, slice_len_max=env.slice_len_cap + 1)
    # singletons exist only for slice lengths up to the cap
    pickable = all_values(pty, env, slice_len_max=env.slice_len_cap)
    rng = random.Random(seed ^ 0x5EED)
    v = rng.choice(pickable)
    s = VS.space_of_value(v, env)
    matches = [w for w in domain if s.contains(w)]
    from _oracles import _oracle_eq

    assert all(_oracle_eq(v, w) for w in matches)
    assert any(_oracle_eq(v, w) for w in matches)


# ── Known-value spaces ───────────────────────────────────────────────


def test_bool_space():
    tt = V.BoolVal(True)
    ff = V.BoolVal(False)
    p, ty, env = checked_pattern("true", T.BoolType(), PatternGen.PRELUDE)
    s = pattern_denotation(p, ty, env)
    assert s.contains(tt) and not s.contains(ff)
    c = VS.space_complement(s, ty, env)
    assert c.contains(ff) and not c.contains(tt)
    assert VS.space_union(s, c).contains(tt)
    assert VS.space_equal(VS.space_union(s, c), VS.value_space_of(ty, env))


def test_str_space_cofinite():
    """Strings: finite point sets and their co-finite complements."""
    ty = T.RefType(False, T.StrType())
    p, pty, env = checked_pattern('"hi"', ty, PatternGen.PRELUDE)
    s = pattern_denotation(p, pty, env)
    assert s.contains(V.StrVal("hi")) and not s.contains(V.StrVal("no"))
    c = VS.space_complement(s, pty, env)
    assert c.contains(V.StrVal("no")) and not c.contains(V.StrVal("hi"))
    assert not c.is_empty()
    w = c.witness(env)
    assert c.contains(w)
    assert VS.space_complement(c, pty, env).contains(V.StrVal("hi"))


def test_char_space_excludes_surrogates():
    ty = T.CharType()
    p, pty, env = checked_pattern("'a'", ty, PatternGen.PRELUDE)
    s = pattern_denotation(p, pty, env)
    c = VS.space_complement(s, pty, env)
    assert c.contains(V.CharVal("b"))
    top = VS.value_space_of(ty, env)
    assert VS.space_equal(VS.space_union(s, c), top)


def test_slice_length_pooling():
    """Slice spaces distinguish lengths up to the cap and pool the rest."""
    ty = T.RefType(False, T.SliceType(T.BoolType()))
    (p_pair, p_rest, p_empty), env = checked_patterns(
        [("[_, _]", ty), ("[_, ..]", ty), ("[]", ty)], PatternGen.PRELUDE
    )
    fixed = pattern_denotation(p_pair, p_pair.ty, env)
    rest = pattern_denotation(p_rest, p_rest.ty, env)
    empty = pattern_denotation(p_empty, p_empty.ty, env)

    def bools(n: int) -> V.Value:
        return V.SliceVal(tuple(V.BoolVal(False) for _ in range(n)))

    long = env.slice_len_cap + 3  # deep in the pooled tail
    assert fixed.contains(bools(2))
    assert not fixed.contains(bools(1)) and not fixed.contains(bools(3))
    assert not fixed.contains(bools(long))
    assert rest.contains(bools(1)) and rest.contains(bools(long))
    assert not rest.contains(bools(0))
    assert empty.contains(bools(0)) and not empty.contains(bools(1))

    # [] ∪ [_, ..] covers every length, pooled ones included
    top = VS.value_space_of(p_rest.ty, env)
    assert VS.space_equal(VS.space_union(empty, rest), top)
    # removing the fixed-length-2 rectangle leaves lengths 2 uncovered only
    gap = VS.space_subtract(top, fixed)
    assert gap.contains(bools(1)) and gap.contains(bools(long))
    assert not gap.contains(bools(2))
