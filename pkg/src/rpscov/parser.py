"""Recursive-descent parser for RPS.

Expressions use precedence climbing. Comparison operators do not chain.
Struct literals are forbidden in condition and scrutinee head positions
(the usual brace ambiguity rule); parenthesize to allow them. A range
pattern directly under `&` is rejected and must be grouped: `&(0..=5)`.
"""

from __future__ import annotations

from typing import Optional

from rpscov import nodes as N
from rpscov.errors import ParseError
from rpscov.lexer import Token, tokenize
from rpscov.spans import SourceSpan

MACRO_NAMES = ("print", "println", "panic")

_CMP_OPS = ("==", "!=", "<", "<=", ">", ">=")


class Parser:
    def __init__(self, src: str, file: str = "<input>") -> None:
        self.toks = tokenize(src, file)
        self.i = 0
        self.file = file

    # ── cursor helpers ───────────────────────────────────────────

    def peek(self, off: int = 0) -> Token:
        j = min(self.i + off, len(self.toks) - 1)
        return self.toks[j]

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def at_kw(self, word: str) -> bool:
        return self.at("kw", word)

    def bump(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        if not self.at(kind, text):
            want = text or kind
            raise self.error(f"expected {want!r}, found {self.describe()}")
        return self.bump()

    def expect_kw(self, word: str) -> Token:
        if not self.at_kw(word):
            raise self.error(f"expected {word!r}, found {self.describe()}")
        return self.bump()

    def describe(self) -> str:
        t = self.peek()
        return "end of input" if t.kind == "eof" else repr(t.text)

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.peek().span)

    def prev_span(self) -> SourceSpan:
        return self.toks[max(self.i - 1, 0)].span

    def span_from(self, start: SourceSpan) -> SourceSpan:
        return start.merge(self.prev_span())

    # ── program and items ────────────────────────────────────────

    def parse_program(self) -> N.Program:
        start = self.peek().span
        items: list[N.Item] = []
        while not self.at("eof"):
            items.append(self.parse_item())
        return N.Program(items, start.merge(self.prev_span()))

    def parse_item(self) -> N.Item:
        if self.at_kw("enum"):
            return self.parse_enum()
        if self.at_kw("struct"):
            return self.parse_struct()
        if self.at_kw("const"):
            return self.parse_const()
        if self.at_kw("static"):
            return self.parse_static()
        if self.at_kw("fn"):
            return self.parse_fn()
        raise self.error(f"expected an item, found {self.describe()}")

    def parse_enum(self) -> N.EnumDef:
        start = self.expect_kw("enum").span
        name = self.expect("ident").text
        self.expect("{")
        variants: list[N.EnumVariant] = []
        while not self.at("}"):
            vstart = self.peek().span
            vname = self.expect("ident").text
            var = N.EnumVariant(name=vname)
            if self.at("("):
                self.bump()
                var.style = "tuple"
                while not self.at(")"):
                    var.tuple_fields.append(self.parse_type())
                    if not self.at(")"):
                        self.expect(",")
                self.expect(")")
            elif self.at("{"):
                self.bump()
                var.style = "struct"
                while not self.at("}"):
                    fname = self.expect("ident").text
                    self.expect(":")
                    var.named_fields.append((fname, self.parse_type()))
                    if not self.at("}"):
                        self.expect(",")
                self.expect("}")
            var.span = self.span_from(vstart)
            variants.append(var)
            if not self.at("}"):
                self.expect(",")
        self.expect("}")
        return N.EnumDef(self.span_from(start), name, variants)

    def parse_struct(self) -> N.StructDef:
        start = self.expect_kw("struct").span
        name = self.expect("ident").text
        node = N.StructDef(None, name)  # type: ignore[arg-type]
        if self.at(";"):
            self.bump()
            node.style = "unit"
        elif self.at("("):
            self.bump()
            node.style = "tuple"
            while not self.at(")"):
                node.tuple_fields.append(self.parse_type())
                if not self.at(")"):
                    self.expect(",")
            self.expect(")")
            self.expect(";")
        elif self.at("{"):
            self.bump()
            node.style = "named"
            while not self.at("}"):
                fname = self.expect("ident").text
                self.expect(":")
                node.named_fields.append((fname, self.parse_type()))
                if not self.at("}"):
                    self.expect(",")
            self.expect("}")
        else:
            raise self.error("expected ';', '(' or '{' after struct name")
        node.span = self.span_from(start)
        return node

    def parse_const(self) -> N.ConstDef:
        start = self.expect_kw("const").span
        name = self.expect("ident").text
        self.expect(":")
        ty = self.parse_type()
        self.expect("=")
        value = self.parse_expr()
        self.expect(";")
        return N.ConstDef(self.span_from(start), name, ty, value)

    def parse_static(self) -> N.StaticDef:
        start = self.expect_kw("static").span
        mutable = bool(self.at_kw("mut") and self.bump())
        name = self.expect("ident").text
        self.expect(":")
        ty = self.parse_type()
        self.expect("=")
        value = self.parse_expr()
        self.expect(";")
        return N.StaticDef(self.span_from(start), name, mutable, ty, value)

    def parse_fn(self) -> N.FnDef:
        start = self.expect_kw("fn").span
        name = self.expect("ident").text
        self.expect("(")
        params: list[N.Param] = []
        while not self.at(")"):
            pstart = self.peek().span
            mutable = bool(self.at_kw("mut") and self.bump())
            pname = self.expect("ident").text
            self.expect(":")
            pty = self.parse_type()
            params.append(N.Param(pname, pty, mutable, self.span_from(pstart)))
            if not self.at(")"):
                self.expect(",")
        self.expect(")")
        ret = None
        if self.at("->"):
            self.bump()
            ret = self.parse_type()
        body = self.parse_block()
        return N.FnDef(self.span_from(start), name, params, ret, body)

    # ── types ────────────────────────────────────────────────────

    def parse_type(self) -> N.TypeExpr:
        start = self.peek().span
        if self.at("&") or self.at("&&"):
            double = self.at("&&")
            self.bump()
            mutable = bool(self.at_kw("mut") and self.bump())
            inner = self.parse_type()
            if double:
                inner = N.RefType(self.span_from(start), mutable, inner)
                return N.RefType(self.span_from(start), False, inner)
            return N.RefType(self.span_from(start), mutable, inner)
        if self.at("("):
            self.bump()
            elems: list[N.TypeExpr] = []
            saw_comma = False
            while not self.at(")"):
                elems.append(self.parse_type())
                if self.at(","):
                    saw_comma = True
                    self.bump()
                elif not self.at(")"):
                    raise self.error("expected ',' or ')' in tuple type")
            self.expect(")")
            if len(elems) == 1 and not saw_comma:
                return elems[0]
            return N.TupleType(self.span_from(start), elems)
        if self.at("["):
            self.bump()
            elem = self.parse_type()
            if self.at(";"):
                self.bump()
                length = self.expect("int")
                self.expect("]")
                return N.ArrayType(self.span_from(start), elem, int(length.value))
            self.expect("]")
            return N.SliceTypeExpr(self.span_from(start), elem)
        name = self.expect("ident").text
        args: list[N.TypeExpr] = []
        if self.at("<"):
            self.bump()
            while not self.at(">"):
                args.append(self.parse_type())
                if not self.at(">"):
                    self.expect(",")
            self.expect(">")
        return N.NamedType(self.span_from(start), name, args)

    # ── patterns ─────────────────────────────────────────────────

    def parse_pattern(self) -> N.Pattern:
        start = self.peek().span
        if self.at("|"):
            self.bump()
        alts = [self.parse_pattern_single()]
        while self.at("|"):
            self.bump()
            alts.append(self.parse_pattern_single())
        if len(alts) == 1:
            return alts[0]
        return N.OrPat(self.span_from(start), alts=alts)

    def _at_range_bound(self) -> bool:
        return self.at("int") or self.at("char") or self.at("-")

    def _parse_bound(self) -> tuple[object, str, Optional[str]]:
        """A range bound: returns (value, lit_kind, suffix)."""
        if self.at("-"):
            self.bump()
            t = self.expect("int")
            return -t.value, "int", t.suffix
        if self.at("int"):
            t = self.bump()
            return t.value, "int", t.suffix
        t = self.expect("char")
        return t.value, "char", None

    def parse_pattern_single(self, no_range: bool = False) -> N.Pattern:
        start = self.peek().span

        # Prefix ranges and the rest pattern.
        if self.at("..="):
            self.bump()
            hi, kind, suf = self._parse_bound()
            return N.RangePat(self.span_from(start), hi=hi, inclusive=True,
                              lit_kind=kind, suffix=suf)
        if self.at(".."):
            self.bump()
            if self._at_range_bound():
                hi, kind, suf = self._parse_bound()
                return N.RangePat(self.span_from(start), hi=hi, inclusive=False,
                                  lit_kind=kind, suffix=suf)
            return N.RestPat(self.span_from(start))

        # Literals, which may begin a range.
        if self._at_range_bound():
            lo, kind, suf = self._parse_bound()
            if self.at("..") or self.at("..="):
                if no_range:
                    raise self.error(
                        "range pattern under `&` is ambiguous; group it: &(...)"
                    )
                inclusive = self.at("..=")
                self.bump()
                hi = None
                if self._at_range_bound():
                    hi, kind2, suf2 = self._parse_bound()
                    if kind2 != kind:
                        raise self.error("range bounds have different kinds")
                    if suf and suf2 and suf != suf2:
                        raise self.error("range bounds have different suffixes")
                    suf = suf or suf2
                elif not inclusive and hi is None:
                    pass  # open upper bound, `lo..`
                if hi is None and inclusive:
                    raise self.error("`..=` needs an upper bound")
                return N.RangePat(self.span_from(start), lo=lo, hi=hi,
                                  inclusive=inclusive, lit_kind=kind, suffix=suf)
            return N.LiteralPat(self.span_from(start), value=lo, lit_kind=kind,
                                suffix=suf)
        if self.at("str"):
            t = self.bump()
            return N.LiteralPat(self.span_from(start), value=t.value, lit_kind="str")
        if self.at_kw("true") or self.at_kw("false"):
            t = self.bump()
            return N.LiteralPat(self.span_from(start), value=t.text == "true",
                                lit_kind="bool")

        # References.
        if self.at("&") or self.at("&&"):
            double = self.at("&&")
            self.bump()
            mutable = bool(self.at_kw("mut") and self.bump())
            inner = self.parse_pattern_single(no_range=True)
            sp = self.span_from(start)
            if double:
                inner = N.RefPat(sp, mutable=mutable, inner=inner)
                return N.RefPat(sp, mutable=False, inner=inner)
            return N.RefPat(sp, mutable=mutable, inner=inner)

        # Grouping and tuples.
        if self.at("("):
            self.bump()
            elems: list[N.Pattern] = []
            saw_comma = False
            while not self.at(")"):
                elems.append(self._parse_pattern_elem())
                if self.at(","):
                    saw_comma = True
                    self.bump()
                elif not self.at(")"):
                    raise self.error("expected ',' or ')' in tuple pattern")
            self.expect(")")
            sp = self.span_from(start)
            if len(elems) == 1 and not saw_comma and not isinstance(elems[0], N.RestPat):
                return N.GroupPat(sp, inner=elems[0])
            return N.TuplePat(sp, elems=elems)

        # Slices.
        if self.at("["):
            self.bump()
            elems = []
            while not self.at("]"):
                elems.append(self._parse_pattern_elem())
                if not self.at("]"):
                    self.expect(",")
            self.expect("]")
            return N.SlicePat(self.span_from(start), elems=elems)

        # Binding modifiers.
        if self.at_kw("ref") or self.at_kw("mut"):
            by_ref = bool(self.at_kw("ref") and self.bump())
            mutable = bool(self.at_kw("mut") and self.bump())
            name = self.expect("ident").text
            sub = None
            if self.at("@"):
                self.bump()
                sub = self.parse_pattern_single()
            return N.IdentPat(self.span_from(start), name=name, by_ref=by_ref,
                              mutable=mutable, sub=sub)

        # Paths, bindings, wildcard.
        if self.at("ident"):
            name = self.bump().text
            if name == "_":
                return N.WildcardPat(self.span_from(start))
            segs = [name]
            while self.at("::"):
                self.bump()
                segs.append(self.expect("ident").text)
            if self.at("("):
                self.bump()
                elems = []
                while not self.at(")"):
                    elems.append(self._parse_pattern_elem())
                    if not self.at(")"):
                        self.expect(",")
                self.expect(")")
                return N.TupleStructPat(self.span_from(start), path=segs, elems=elems)
            if self.at("{"):
                return self._parse_struct_pattern(start, segs)
            if self.at("@"):
                if len(segs) > 1:
                    raise self.error("`@` binding needs a plain name")
                self.bump()
                sub = self.parse_pattern_single()
                return N.IdentPat(self.span_from(start), name=segs[0], sub=sub)
            if len(segs) > 1:
                return N.PathPat(self.span_from(start), path=segs)
            return N.NameRefPat(self.span_from(start), name=segs[0])

        raise self.error(f"expected a pattern, found {self.describe()}")

    def _parse_pattern_elem(self) -> N.Pattern:
        # Element of a tuple, tuple-struct or slice pattern; `..` here is
        # the rest pattern unless it starts a prefix range.
        if self.at("..") and not (
            self.peek(1).kind in ("int", "char") or self.peek(1).text == "-"
        ):
            start = self.bump().span
            return N.RestPat(start)
        return self.parse_pattern()

    def _parse_struct_pattern(self, start: SourceSpan, segs: list[str]) -> N.StructPat:
        self.expect("{")
        fields: list[N.FieldPat] = []
        has_rest = False
        while not self.at("}"):
            if self.at(".."):
                self.bump()
                has_rest = True
                break
            fstart = self.peek().span
            fname = self.expect("ident").text
            if self.at(":"):
                self.bump()
                pat = self.parse_pattern()
                fields.append(N.FieldPat(fname, pat, self.span_from(fstart)))
            else:
                fields.append(N.FieldPat(fname, None, self.span_from(fstart)))
            if not self.at("}"):
                self.expect(",")
        self.expect("}")
        return N.StructPat(self.span_from(start), path=segs, fields=fields,
                           has_rest=has_rest)

    # ── expressions ──────────────────────────────────────────────

    def parse_expr(self, no_struct: bool = False) -> N.Expr:
        if self.at_kw("return"):
            start = self.bump().span
            value = None
            if not (self.at(";") or self.at("}") or self.at(")") or self.at(",")):
                value = self.parse_expr(no_struct)
            return N.ReturnExpr(self.span_from(start), value=value)
        return self._parse_or(no_struct)

    def _parse_or(self, no_struct: bool) -> N.Expr:
        lhs = self._parse_and(no_struct)
        while self.at("||"):
            self.bump()
            rhs = self._parse_and(no_struct)
            lhs = N.BinaryExpr(lhs.span.merge(rhs.span), op="||", lhs=lhs, rhs=rhs)
        return lhs

    def _parse_and(self, no_struct: bool) -> N.Expr:
        lhs = self._parse_cmp(no_struct)
        while self.at("&&"):
            self.bump()
            rhs = self._parse_cmp(no_struct)
            lhs = N.BinaryExpr(lhs.span.merge(rhs.span), op="&&", lhs=lhs, rhs=rhs)
        return lhs

    def _parse_cmp(self, no_struct: bool) -> N.Expr:
        lhs = self._parse_add(no_struct)
        if self.peek().text in _CMP_OPS and self.peek().kind in _CMP_OPS:
            op = self.bump().text
            rhs = self._parse_add(no_struct)
            if self.peek().text in _CMP_OPS and self.peek().kind in _CMP_OPS:
                raise self.error("comparison operators cannot be chained")
            return N.BinaryExpr(lhs.span.merge(rhs.span), op=op, lhs=lhs, rhs=rhs)
        return lhs

    def _parse_add(self, no_struct: bool) -> N.Expr:
        lhs = self._parse_mul(no_struct)
        while self.at("+") or self.at("-"):
            op = self.bump().text
            rhs = self._parse_mul(no_struct)
            lhs = N.BinaryExpr(lhs.span.merge(rhs.span), op=op, lhs=lhs, rhs=rhs)
        return lhs

    def _parse_mul(self, no_struct: bool) -> N.Expr:
        lhs = self._parse_unary(no_struct)
        while self.at("*") or self.at("/") or self.at("%"):
            op = self.bump().text
            rhs = self._parse_unary(no_struct)
            lhs = N.BinaryExpr(lhs.span.merge(rhs.span), op=op, lhs=lhs, rhs=rhs)
        return lhs

    def _parse_unary(self, no_struct: bool) -> N.Expr:
        start = self.peek().span
        if self.at("-"):
            self.bump()
            operand = self._parse_unary(no_struct)
            return N.UnaryExpr(self.span_from(start), op="-", operand=operand)
        if self.at("!"):
            self.bump()
            operand = self._parse_unary(no_struct)
            return N.UnaryExpr(self.span_from(start), op="!", operand=operand)
        if self.at("&") or self.at("&&"):
            double = self.at("&&")
            self.bump()
            mutable = bool(self.at_kw("mut") and self.bump())
            inner = self._parse_unary(no_struct)
            sp = self.span_from(start)
            if double:
                inner = N.RefExpr(sp, mutable=mutable, inner=inner)
                return N.RefExpr(sp, mutable=False, inner=inner)
            return N.RefExpr(sp, mutable=mutable, inner=inner)
        return self._parse_postfix(no_struct)

    def _parse_postfix(self, no_struct: bool) -> N.Expr:
        expr = self._parse_primary(no_struct)
        while True:
            if self.at("("):
                if not isinstance(expr, N.PathExpr):
                    raise self.error("only named functions can be called")
                self.bump()
                args: list[N.Expr] = []
                while not self.at(")"):
                    args.append(self.parse_expr())
                    if not self.at(")"):
                        self.expect(",")
                self.expect(")")
                expr = N.CallExpr(expr.span.merge(self.prev_span()), callee=expr,
                                  args=args)
            elif self.at("."):
                self.bump()
                if self.at("int"):
                    t = self.bump()
                    name = str(t.value)
                else:
                    name = self.expect("ident").text
                expr = N.FieldExpr(expr.span.merge(self.prev_span()), base=expr,
                                   name=name)
            elif self.at("["):
                self.bump()
                index = self.parse_expr()
                self.expect("]")
                expr = N.IndexExpr(expr.span.merge(self.prev_span()), base=expr,
                                   index=index)
            elif self.at("?"):
                self.bump()
                expr = N.QuestionMarkExpr(expr.span.merge(self.prev_span()),
                                          inner=expr)
            else:
                return expr

    def _parse_primary(self, no_struct: bool) -> N.Expr:
        start = self.peek().span
        if self.at("int"):
            t = self.bump()
            return N.LitExpr(t.span, value=t.value, lit_kind="int", suffix=t.suffix)
        if self.at("char"):
            t = self.bump()
            return N.LitExpr(t.span, value=t.value, lit_kind="char")
        if self.at("str"):
            t = self.bump()
            return N.LitExpr(t.span, value=t.value, lit_kind="str")
        if self.at_kw("true") or self.at_kw("false"):
            t = self.bump()
            return N.LitExpr(t.span, value=t.text == "true", lit_kind="bool")
        if self.at("("):
            self.bump()
            elems: list[N.Expr] = []
            saw_comma = False
            while not self.at(")"):
                elems.append(self.parse_expr())
                if self.at(","):
                    saw_comma = True
                    self.bump()
                elif not self.at(")"):
                    raise self.error("expected ',' or ')'")
            self.expect(")")
            if len(elems) == 1 and not saw_comma:
                return elems[0]
            return N.TupleExpr(self.span_from(start), elems=elems)
        if self.at("["):
            self.bump()
            elems = []
            while not self.at("]"):
                elems.append(self.parse_expr())
                if not self.at("]"):
                    self.expect(",")
            self.expect("]")
            return N.ArrayExpr(self.span_from(start), elems=elems)
        if self.at("{"):
            block = self.parse_block()
            return N.BlockExpr(block.span, block=block)
        if self.at_kw("if"):
            return self._parse_if()
        if self.at_kw("match"):
            return self._parse_match()
        if self.at("ident"):
            name = self.bump().text
            if self.at("!") and name in MACRO_NAMES:
                return self._parse_macro(start, name)
            segs = [name]
            while self.at("::"):
                self.bump()
                segs.append(self.expect("ident").text)
            if self.at("{") and not no_struct:
                return self._parse_struct_literal(start, segs)
            return N.PathExpr(self.span_from(start), path=segs)
        raise self.error(f"expected an expression, found {self.describe()}")

    def _parse_macro(self, start: SourceSpan, name: str) -> N.Expr:
        self.expect("!")
        self.expect("(")
        template = self.expect("str").value
        self.expect(")")
        sp = self.span_from(start)
        if name == "panic":
            return N.PanicExpr(sp, message=str(template))
        return N.PrintExpr(sp, newline=name == "println", template=str(template))

    def _parse_struct_literal(self, start: SourceSpan, segs: list[str]) -> N.StructExpr:
        self.expect("{")
        fields: list[tuple[str, N.Expr]] = []
        while not self.at("}"):
            fname = self.expect("ident").text
            if self.at(":"):
                self.bump()
                fields.append((fname, self.parse_expr()))
            else:
                # Shorthand: `Foo { x }` initializes field x from local x.
                fields.append((fname, N.PathExpr(self.prev_span(), path=[fname])))
            if not self.at("}"):
                self.expect(",")
        self.expect("}")
        return N.StructExpr(self.span_from(start), path=segs, fields=fields)

    def _parse_if(self) -> N.Expr:
        start = self.expect_kw("if").span
        if self.at_kw("let"):
            self.bump()
            pat = self.parse_pattern()
            self.expect("=")
            scrutinee = self.parse_expr(no_struct=True)
            then = self.parse_block()
            else_ = self._parse_else()
            return N.IfLetExpr(self.span_from(start), pat=pat, scrutinee=scrutinee,
                               then=then, else_=else_)
        cond = self.parse_expr(no_struct=True)
        then = self.parse_block()
        else_ = self._parse_else()
        return N.IfExpr(self.span_from(start), cond=cond, then=then, else_=else_)

    def _parse_else(self):
        if not self.at_kw("else"):
            return None
        self.bump()
        if self.at_kw("if"):
            return self._parse_if()
        return self.parse_block()

    def _parse_match(self) -> N.MatchExpr:
        start = self.expect_kw("match").span
        scrutinee = self.parse_expr(no_struct=True)
        self.expect("{")
        arms: list[N.MatchArm] = []
        while not self.at("}"):
            astart = self.peek().span
            pat = self.parse_pattern()
            guard = None
            if self.at_kw("if"):
                self.bump()
                guard = self.parse_expr(no_struct=True)
            self.expect("=>")
            body = self.parse_expr()
            arms.append(N.MatchArm(pat=pat, guard=guard, body=body,
                                   span=self.span_from(astart)))
            if self.at(","):
                self.bump()
            elif not self.at("}") and not _block_like(body):
                raise self.error("expected ',' after match arm")
        self.expect("}")
        return N.MatchExpr(self.span_from(start), scrutinee=scrutinee, arms=arms)

    # ── statements and blocks ────────────────────────────────────

    def parse_block(self) -> N.Block:
        start = self.expect("{").span
        stmts: list[N.Stmt] = []
        tail: Optional[N.Expr] = None
        while not self.at("}"):
            if self.at_kw("let"):
                stmts.append(self._parse_let())
                continue
            if self.at_kw("while"):
                wstart = self.expect_kw("while").span
                cond = self.parse_expr(no_struct=True)
                body = self.parse_block()
                stmts.append(N.WhileStmt(self.span_from(wstart), cond=cond, body=body))
                if self.at(";"):
                    self.bump()
                continue
            expr = self.parse_expr()
            if self.at("=") and isinstance(expr, N.PathExpr) and len(expr.path) == 1:
                self.bump()
                value = self.parse_expr()
                self.expect(";")
                stmts.append(N.AssignStmt(expr.span.merge(self.prev_span()),
                                          name=expr.path[0], value=value))
                continue
            if self.at(";"):
                self.bump()
                stmts.append(N.ExprStmt(expr.span.merge(self.prev_span()), expr=expr,
                                        has_semi=True))
            elif self.at("}"):
                tail = expr
            elif _block_like(expr):
                stmts.append(N.ExprStmt(expr.span, expr=expr, has_semi=False))
            else:
                raise self.error("expected ';' after expression")
        end = self.expect("}").span
        return N.Block(stmts, tail, start.merge(end))

    def _parse_let(self) -> N.Stmt:
        start = self.expect_kw("let").span
        pat = self.parse_pattern()
        ty_ann = None
        if self.at(":"):
            self.bump()
            ty_ann = self.parse_type()
        self.expect("=")
        init = self.parse_expr()
        if self.at_kw("else"):
            self.bump()
            else_block = self.parse_block()
            self.expect(";")
            return N.LetElseStmt(self.span_from(start), pat=pat, ty_ann=ty_ann,
                                 init=init, else_block=else_block)
        self.expect(";")
        return N.LetStmt(self.span_from(start), pat=pat, ty_ann=ty_ann, init=init)


def _block_like(e: N.Expr) -> bool:
    return isinstance(e, (N.IfExpr, N.IfLetExpr, N.MatchExpr, N.BlockExpr))


def parse_program(src: str, file: str = "<input>") -> N.Program:
    return Parser(src, file).parse_program()


def parse_pattern(src: str, file: str = "<pattern>") -> N.Pattern:
    p = Parser(src, file)
    pat = p.parse_pattern()
    if not p.at("eof"):
        raise p.error(f"trailing input after pattern: {p.describe()}")
    return pat


def parse_expr(src: str, file: str = "<expr>") -> N.Expr:
    p = Parser(src, file)
    e = p.parse_expr()
    if not p.at("eof"):
        raise p.error(f"trailing input after expression: {p.describe()}")
    return e
