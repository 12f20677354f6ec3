"""Type checker tests: acceptance of well-typed programs, rejection
messages, exhaustiveness witnesses, constant evaluation, and the
reference-reaching pattern normalization."""

from __future__ import annotations

import pytest

from conftest import corpus_src
from rpscov import types as T
from rpscov import values as V
from rpscov.check import check_const_value, check_program, iter_patterns
from rpscov.errors import TypeCheckError
from rpscov.parser import parse_expr, parse_program


def _check(src: str) -> T.TypeEnv:
    return check_program(parse_program(src))


def _reject(src: str) -> TypeCheckError:
    with pytest.raises(TypeCheckError) as exc:
        _check(src)
    return exc.value


# ── Acceptance ───────────────────────────────────────────────────────


def test_corpus_programs_check():
    """Every corpus program type-checks."""
    for name in [
        "enum_match.rps",
        "enum_match_fn.rps",
        "complex_pattern.rps",
        "complex_pattern_fn.rps",
        "nested_if.rps",
        "nested_if_fn.rps",
        "match_in_if.rps",
        "match_in_if_fn.rps",
        "question_mark.rps",
        "question_marks.rps",
        "complex_slice.rps",
        "const_debug.rps",
        "static_debug.rps",
    ]:
        check_program(parse_program(corpus_src(name), name))


def test_array_to_slice_coercion():
    _check("fn g(xs: &[i32]) -> i32 { 0 } fn f() { let a = [1, 2]; g(&a); }")


def test_static_mut_assignment():
    _check("static mut C: i32 = 0; fn f() { C = C + 1; }")


def test_shadowing_and_mut():
    _check("fn f() { let x = 1; let x = true; let mut y = 0; y = 2; }")


def test_irrefutable_if_let_allowed():
    _check("fn f(x: i32) -> i32 { if let y = x { y } else { 0 } }")


def test_match_as_operand():
    _check("fn f(x: i32) -> i32 { 1 + match x { 0 => 1, _ => 2 } }")


def test_reference_patterns_through_wrappers():
    """Explicit `&` works bare, grouped, and in or-alternatives."""
    _check("fn f(x: &bool) -> i32 { match x { &true => 1, _ => 0 } }")
    _check("fn f(x: &bool) -> i32 { match x { (&true) => 1, _ => 0 } }")
    _check("fn f(x: &bool) -> i32 { match x { &true | &false => 1 } }")
    _check("fn f(x: &bool) -> i32 { match x { &true | false => 1 } }")


# ── Rejections ───────────────────────────────────────────────────────


def test_rejection_messages():
    """Frozen diagnostics for the common static errors."""
    assert _reject("fn f() { let x: u8 = 256; }").message == (
        "literal 256 does not fit in u8"
    )
    assert _reject("fn f() { let x: u8 = -1; }").message == (
        "literal -1 does not fit in u8"
    )
    assert _reject("fn f() { let x = 1; x = 2; }").message == (
        "cannot assign to immutable binding 'x'"
    )
    assert _reject("fn f() { let x = 1 + true; }").message == (
        "arithmetic needs integers, got bool"
    )
    assert _reject("fn f() -> bool { 3 }").message == "expected bool, got i32"
    assert _reject("fn f() { g(); }").message == (
        "cannot resolve 'g'; unknown function or constructor"
    )
    assert _reject(
        "fn g(a: i32) -> i32 { a } fn f() { g(1, 2); }"
    ).message == "g takes 1 argument(s), got 2"
    assert _reject("fn f() { if 3 { } }").message == "expected bool, got i32"
    assert _reject("fn f(b: bool) -> i32 { if b { 1 } }").message == (
        "`if` without `else` must not produce a value"
    )


def test_refutable_let_rejected():
    err = _reject("fn f(x: i32) { let Some(v) = Some(x); }")
    assert err.message == (
        "refutable pattern in `let` binding; use `let ... else` or `if let`"
    )


def test_mismatched_or_bindings_rejected():
    err = _reject(
        "fn f(x: i32) -> i32 { match x { 0 | y => 1, _ => 2 } }"
    )
    assert "must bind the same names" in err.message


# ── Exhaustiveness ───────────────────────────────────────────────────


def test_non_exhaustive_int_witness():
    """A gap at 1 in integer arms is reported with that witness."""
    err = _reject(corpus_src("non_exhaustive.rps"))
    assert err.message == (
        "match is not exhaustive; for example, `1` is not covered"
    )
    assert err.witness == V.IntVal(1, "u8")


def test_non_exhaustive_enum_witness():
    err = _reject(
        "enum P { A, B(u8) } fn f(p: P) -> i32 { match p { P::A => 0 } }"
    )
    assert err.message == (
        "match is not exhaustive; for example, `B(0)` is not covered"
    )
    assert isinstance(err.witness, V.EnumVal) and err.witness.variant == "B"


def test_non_exhaustive_slice_witness():
    err = _reject(
        "fn f(xs: &[bool]) -> i32 { match xs { [] => 0, [true, ..] => 1 } }"
    )
    assert err.message == (
        "match is not exhaustive; for example, `[false]` is not covered"
    )


def test_guards_do_not_count_toward_exhaustiveness():
    err = _reject(
        "fn f(b: bool, c: bool) -> i32 { match b { true if c => 1, false => 2 } }"
    )
    assert "`true` is not covered" in err.message
    # the same arms without the guard are exhaustive
    _check("fn f(b: bool, c: bool) -> i32 { match b { true => 1, false => 2 } }")


def test_exhaustive_matches_accepted():
    _check("fn f(x: u8) -> i32 { match x { 0..=99 => 0, 100..=255 => 1 } }")
    _check(
        "enum P { A, B(u8) } "
        "fn f(p: P) -> i32 { match p { P::A => 0, P::B(_) => 1 } }"
    )
    _check(
        "fn f(xs: &[bool]) -> i32 "
        "{ match xs { [] => 0, [_] => 1, [_, _, ..] => 2 } }"
    )
    _check("fn f(o: Option<bool>) -> i32 { match o { Some(_) => 1, None => 0 } }")


# ── Constant evaluation ──────────────────────────────────────────────


def test_const_chain_and_overflow():
    env = _check("const A: i32 = 2; const B: i32 = A * 3; fn f() -> i32 { B }")
    assert env.consts["B"].value == V.IntVal(6, "i32")
    err = _reject("const A: u8 = 255; const B: u8 = A + 1; fn f() -> u8 { B }")
    assert err.message == "attempt to add with overflow in u8"


def test_check_const_value_for_external_expressions():
    """Standalone expressions check and evaluate in a program's env."""
    prog = parse_program(
        "const SIZE: u8 = 4; enum P { A, B(u8) } fn f(p: P) -> u8 { SIZE }"
    )
    env = check_program(prog)
    v = check_const_value(parse_expr("SIZE + 1"), T.IntType("u8"), prog, env)
    assert v == V.IntVal(5, "u8")
    v = check_const_value(parse_expr("P::B(2)"), T.EnumType("P"), prog, env)
    assert isinstance(v, V.EnumVal) and v.variant == "B"
    with pytest.raises(TypeCheckError):
        check_const_value(parse_expr("true"), T.IntType("u8"), prog, env)
    with pytest.raises(TypeCheckError):
        check_const_value(parse_expr("f(P::A)"), T.IntType("u8"), prog, env)


# ── Pattern iteration ────────────────────────────────────────────────


def test_iter_patterns_yields_checked_patterns():
    prog = parse_program(corpus_src("complex_pattern.rps"))
    env = check_program(prog)
    pats = list(iter_patterns(prog))
    assert all(fn == "main" for fn, _ in pats)
    assert all(p.ty is not None for _, p in pats)
    assert len(pats) == 2  # the let binding and the if-let pattern
