"""Parser and pretty-printer tests.

Round-trip law: rendering a parse result and re-parsing it yields the
same rendered form (render∘parse is a fixpoint on rendered output).
Known-value tests pin node shapes, operator precedence, span positions,
and rejection of malformed input.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import PatternGen
from rpscov import nodes as N
from rpscov.errors import ParseError
from rpscov.parser import parse_expr, parse_pattern, parse_program
from rpscov.pretty import render_expr, render_pattern


# ── Pattern round-trips ──────────────────────────────────────────────


@pytest.mark.property_based
@given(st.integers(0, 10**9))
@settings(max_examples=200, deadline=None)
def test_pattern_render_parse_fixpoint(seed):
    """render(parse(p)) re-parses to the same rendered text."""
    gen = PatternGen(random.Random(seed))
    src = gen.gen_pattern(gen.random_type())
    once = render_pattern(parse_pattern(src))
    again = render_pattern(parse_pattern(once))
    assert once == again


def test_pattern_shapes_known():
    """Known pattern sources map to the expected node shapes."""
    p = parse_pattern("1..=5")
    assert isinstance(p, N.RangePat) and p.lo == 1 and p.hi == 5 and p.inclusive

    p = parse_pattern("1..5")
    assert isinstance(p, N.RangePat) and not p.inclusive

    p = parse_pattern("..=9")
    assert isinstance(p, N.RangePat) and p.lo is None and p.hi == 9

    p = parse_pattern("x @ 1..=5")
    assert isinstance(p, N.IdentPat) and p.name == "x"
    assert isinstance(p.sub, N.RangePat)

    p = parse_pattern("Some(x)")
    assert isinstance(p, N.TupleStructPat) and p.path == ["Some"]
    assert isinstance(p.elems[0], N.NameRefPat)

    p = parse_pattern("Person::Passenger(seat)")
    assert isinstance(p, N.TupleStructPat) and p.path == ["Person", "Passenger"]

    p = parse_pattern("Shape::Rect { w: 1, .. }")
    assert isinstance(p, N.StructPat) and p.has_rest
    assert p.fields[0].name == "w"

    p = parse_pattern("[Some(first), .., Some(last)]")
    assert isinstance(p, N.SlicePat) and len(p.elems) == 3
    assert isinstance(p.elems[1], N.RestPat)

    p = parse_pattern("a | b | c")
    assert isinstance(p, N.OrPat) and len(p.alts) == 3

    p = parse_pattern("&(x, _)")
    assert isinstance(p, N.RefPat) and not p.mutable
    assert isinstance(p.inner, N.TuplePat)

    p = parse_pattern("&mut y")
    assert isinstance(p, N.RefPat) and p.mutable

    p = parse_pattern("(x,)")
    assert isinstance(p, N.TuplePat) and len(p.elems) == 1

    p = parse_pattern("(x)")
    assert isinstance(p, N.GroupPat)

    p = parse_pattern("ref r")
    assert isinstance(p, N.IdentPat) and p.by_ref

    p = parse_pattern("mut m")
    assert isinstance(p, N.IdentPat) and p.mutable


def test_pattern_literals():
    """Literal patterns keep their kind, value, and suffix."""
    p = parse_pattern("true")
    assert isinstance(p, N.LiteralPat) and p.lit_kind == "bool" and p.value is True

    p = parse_pattern("42u8")
    assert isinstance(p, N.LiteralPat) and p.lit_kind == "int"
    assert p.value == 42 and p.suffix == "u8"

    p = parse_pattern("-7")
    assert isinstance(p, N.LiteralPat) and p.value == -7

    p = parse_pattern("'a'")
    assert isinstance(p, N.LiteralPat) and p.lit_kind == "char" and p.value == "a"

    p = parse_pattern('"hi"')
    assert isinstance(p, N.LiteralPat) and p.lit_kind == "str" and p.value == "hi"

    p = parse_pattern("'a'..='z'")
    assert isinstance(p, N.RangePat) and p.lit_kind == "char"
    assert p.lo == "a" and p.hi == "z"


# ── Expressions ──────────────────────────────────────────────────────


def test_operator_precedence():
    """|| binds looser than &&, which binds looser than comparison."""
    e = parse_expr("a || b && c")
    assert isinstance(e, N.BinaryExpr) and e.op == "||"
    assert isinstance(e.rhs, N.BinaryExpr) and e.rhs.op == "&&"

    e = parse_expr("a && b || c")
    assert e.op == "||" and e.lhs.op == "&&"

    e = parse_expr("a == b && c")
    assert e.op == "&&" and e.lhs.op == "=="

    e = parse_expr("1 + 2 * 3")
    assert e.op == "+" and e.rhs.op == "*"

    e = parse_expr("(1 + 2) * 3")
    assert e.op == "*"

    e = parse_expr("!a && b")
    assert e.op == "&&" and isinstance(e.lhs, N.UnaryExpr)


def test_expression_shapes():
    """Call, index, field, reference, and postfix-? forms."""
    e = parse_expr("f(1, x)")
    assert isinstance(e, N.CallExpr) and len(e.args) == 2

    e = parse_expr("xs[0]")
    assert isinstance(e, N.IndexExpr)

    e = parse_expr("p.0")
    assert isinstance(e, N.FieldExpr)

    e = parse_expr("&values")
    assert isinstance(e, N.RefExpr)

    e = parse_expr("get(x)?")
    assert isinstance(e, N.QuestionMarkExpr)
    assert isinstance(e.inner, N.CallExpr)

    e = parse_expr("Some(3)")
    assert isinstance(e, N.CallExpr)

    e = parse_expr("[1, 2, 3]")
    assert isinstance(e, N.ArrayExpr) and len(e.elems) == 3


def test_match_and_if_as_expressions():
    """match/if parse in operand position."""
    e = parse_expr("match x { 0 => 1, _ => 2 }")
    assert isinstance(e, N.MatchExpr) and len(e.arms) == 2

    e = parse_expr("if a { 1 } else { 2 }")
    assert isinstance(e, N.IfExpr)

    e = parse_expr("if let Some(v) = x { v } else { 0 }")
    assert isinstance(e, N.IfLetExpr)

    src = "match p { Person::Crew => 0, Person::Passenger(s) if s < 4 => 1, _ => 2 }"
    e = parse_expr(src)
    assert e.arms[1].guard is not None
    assert e.arms[0].guard is None


def test_program_items_and_spans():
    """Top-level items parse with file-accurate spans."""
    src = "const LIMIT: i32 = 10;\n\nfn main() {\n    let x = 1;\n}\n"
    prog = parse_program(src, "demo.rps")
    kinds = [type(item).__name__ for item in prog.items]
    assert kinds == ["ConstDef", "FnDef"]
    fn = prog.items[1]
    assert fn.span.file == "demo.rps"
    assert fn.span.start_line == 3
    assert fn.span.start_col == 1


def test_program_full_surface():
    """A program using every item kind parses."""
    src = """
enum Person { Crew, Passenger(u8) }

struct Point { x: i32, y: i32 }

struct Wrapper(bool);

struct Marker;

static mut COUNT: i32 = 0;

const SIZE: u8 = 4;

fn classify(p: &Person) -> i32 {
    match p {
        Person::Crew => 0,
        Person::Passenger(seat) => {
            let s = seat + 1;
            s
        }
    }
}

fn main() {
    let pt = Point { x: 1, y: 2 };
    let w = Wrapper(true);
    let m = Marker;
    let mut i = 0;
    while i < 3 {
        i = i + 1;
    }
    let n: u8 = if true { 1 } else { 0 };
    println!("n is {n}");
}
"""
    prog = parse_program(src)
    assert len(prog.items) == 8


def test_render_expr_round_trip():
    """Rendering an expression re-parses to the same rendered text."""
    sources = [
        "a || b && !c",
        "(a || b) && c",
        "x + 1 * y - 2",
        "f(g(1), xs[i], p.0)",
        "match x { Some(v) => v, None => 0 }",
        "if a { 1 } else if b { 2 } else { 3 }",
        "&xs",
        "value? + other?",
        "[0, 1, 2, 3]",
        "(1, true, 'c')",
    ]
    for src in sources:
        once = render_expr(parse_expr(src))
        assert render_expr(parse_expr(once)) == once


# ── Rejections ───────────────────────────────────────────────────────


def test_parse_errors_carry_spans():
    """Malformed input raises ParseError with a position."""
    for bad in [
        "fn main( {",
        "fn main() { let = 3; }",
        "fn main() { match x { } ",
        "fn f() -> { }",
        "enum E { A(, }",
        "fn main() { 1 +; }",
    ]:
        with pytest.raises(ParseError) as exc:
            parse_program(bad)
        assert exc.value.span is not None


def test_pattern_parse_errors():
    """Malformed patterns are rejected; a leading or-pipe is allowed."""
    for bad in ["", "(a", "[a,", "Some(", "1..=", "@ x", "a |"]:
        with pytest.raises(ParseError):
            parse_pattern(bad)
    assert isinstance(parse_pattern("| a | b"), N.OrPat)
