"""Type checking, name resolution and exhaustiveness analysis.

`check_program` validates a parsed program and returns its TypeEnv. Along
the way it annotates the AST in place:

  * every expression and pattern node gets its type in `ty`
  * ambiguous bare names in patterns get their `resolution`
  * match-ergonomics reference layers become explicit (implicit RefPat
    nodes), so later passes see fully structural patterns
  * match arms that cannot fail in context are flagged `pruned`

Matches must be exhaustive; the error for a non-exhaustive match carries
a concrete witness value no arm covers. A plain `let` needs an
irrefutable pattern (use `let ... else` or `if let` otherwise).
"""

from __future__ import annotations

from typing import Optional

from rpscov import nodes as N
from rpscov import refutability as R
from rpscov import types as T
from rpscov import valuespace as VS
from rpscov import values as V
from rpscov.errors import TypeCheckError
from rpscov.values import render_value

PRIMITIVES = {"bool", "char", "str", "i8", "u8", "i16", "u16", "i32", "u32"}

_STRUCTURAL_WRAP_EXEMPT = (N.IdentPat, N.WildcardPat, N.RefPat, N.RestPat)


def check_program(prog: N.Program, slice_rule: str = "verbatim") -> T.TypeEnv:
    return Checker(prog, slice_rule).run()


def check_const_value(
    e: N.Expr, ty: T.Type, prog: N.Program, env: T.TypeEnv
) -> V.Value:
    """Check a standalone constant expression against ``ty`` in the
    environment of an already-checked program, and evaluate it.

    Used for literal arguments supplied from outside the program (e.g.
    test-suite manifests).  All named constants in ``env`` are already
    evaluated, so recursion into ``force`` never re-checks anything.
    """
    ck = Checker(prog)
    ck.env = env
    ck.scopes = [{}]
    got = ck.check_expr(e, ty)
    ck._expect(got, ty, e.span)
    return ck._const_eval(e, lambda name: env.consts[name].value)


class Checker:
    def __init__(self, prog: N.Program, slice_rule: str = "verbatim") -> None:
        self.prog = prog
        self.slice_rule = slice_rule
        self.env = T.TypeEnv()
        self.scopes: list[dict[str, tuple[T.Type, bool]]] = []
        self.current_ret: T.Type = T.UNIT
        self._const_stack: list[str] = []

    # ── driver ───────────────────────────────────────────────────

    def run(self) -> T.TypeEnv:
        self._declare_items()
        self._resolve_item_types()
        self._reject_recursive_types()
        self.env.slice_len_cap = self._compute_slice_cap()
        self._eval_consts_and_statics()
        for fn in self.prog.functions():
            self._check_fn(fn)
        return self.env

    # ── item declaration ─────────────────────────────────────────

    def _declare_items(self) -> None:
        seen: set[str] = set()
        for item in self.prog.items:
            name = item.name  # type: ignore[attr-defined]
            if name in PRIMITIVES or name in ("Option", "Result"):
                raise TypeCheckError(f"{name!r} is a reserved name", item.span)
            if name in seen:
                raise TypeCheckError(f"duplicate definition of {name!r}", item.span)
            seen.add(name)
            if isinstance(item, N.EnumDef):
                vnames = set()
                for v in item.variants:
                    if v.name in vnames:
                        raise TypeCheckError(
                            f"duplicate variant {v.name!r}", v.span
                        )
                    vnames.add(v.name)
                self.env.enums[name] = T.EnumInfo(name)
            elif isinstance(item, N.StructDef):
                self.env.structs[name] = T.StructInfo(name, item.style)
            elif isinstance(item, N.ConstDef):
                self.env.consts[name] = T.ConstInfo(name, T.UNIT)
            elif isinstance(item, N.StaticDef):
                self.env.statics[name] = T.StaticInfo(name, T.UNIT, item.mutable)
            elif isinstance(item, N.FnDef):
                self.env.fns[name] = T.FnInfo(name, defn=item)

    def _resolve_item_types(self) -> None:
        for item in self.prog.items:
            if isinstance(item, N.EnumDef):
                info = self.env.enums[item.name]
                for v in item.variants:
                    vi = T.VariantInfo(v.name, v.style)
                    if v.style == "tuple":
                        vi.field_types = [self.resolve_type(t) for t in v.tuple_fields]
                    elif v.style == "struct":
                        vi.field_names = [n for n, _ in v.named_fields]
                        vi.field_types = [
                            self.resolve_type(t) for _, t in v.named_fields
                        ]
                    info.variants.append(vi)
            elif isinstance(item, N.StructDef):
                info = self.env.structs[item.name]
                if item.style == "tuple":
                    info.field_types = [self.resolve_type(t) for t in item.tuple_fields]
                    info.field_names = [str(i) for i in range(len(info.field_types))]
                elif item.style == "named":
                    info.field_names = [n for n, _ in item.named_fields]
                    info.field_types = [
                        self.resolve_type(t) for _, t in item.named_fields
                    ]
            elif isinstance(item, N.ConstDef):
                self.env.consts[item.name].ty = self.resolve_type(item.ty)
            elif isinstance(item, N.StaticDef):
                self.env.statics[item.name].ty = self.resolve_type(item.ty)
            elif isinstance(item, N.FnDef):
                info = self.env.fns[item.name]
                pnames = set()
                for p in item.params:
                    if p.name in pnames:
                        raise TypeCheckError(
                            f"duplicate parameter {p.name!r}", p.span
                        )
                    pnames.add(p.name)
                    info.param_names.append(p.name)
                    info.param_types.append(self.resolve_type(p.ty))
                info.ret = self.resolve_type(item.ret) if item.ret else T.UNIT

    def resolve_type(self, t: N.TypeExpr) -> T.Type:
        if isinstance(t, N.NamedType):
            if t.name in T.INT_TYPES:
                self._no_args(t)
                return T.INT_TYPES[t.name]
            if t.name == "bool":
                self._no_args(t)
                return T.BOOL
            if t.name == "char":
                self._no_args(t)
                return T.CHAR
            if t.name == "str":
                self._no_args(t)
                return T.STR
            if t.name == "Option":
                if len(t.args) != 1:
                    raise TypeCheckError("Option takes one type argument", t.span)
                return self.env.option_of(self.resolve_type(t.args[0]))
            if t.name == "Result":
                if len(t.args) != 2:
                    raise TypeCheckError("Result takes two type arguments", t.span)
                return self.env.result_of(
                    self.resolve_type(t.args[0]), self.resolve_type(t.args[1])
                )
            if t.args:
                raise TypeCheckError(f"{t.name} takes no type arguments", t.span)
            if t.name in self.env.enums:
                return T.EnumType(t.name)
            if t.name in self.env.structs:
                return T.StructType(t.name)
            raise TypeCheckError(f"unknown type {t.name!r}", t.span)
        if isinstance(t, N.TupleType):
            return T.TupleType(tuple(self.resolve_type(e) for e in t.elems))
        if isinstance(t, N.ArrayType):
            if t.length < 0:
                raise TypeCheckError("array length must be non-negative", t.span)
            return T.ArrayType(self.resolve_type(t.elem), t.length)
        if isinstance(t, N.SliceTypeExpr):
            return T.SliceType(self.resolve_type(t.elem))
        if isinstance(t, N.RefType):
            return T.RefType(t.mutable, self.resolve_type(t.inner))
        raise AssertionError(f"unknown type expr {t!r}")

    def _no_args(self, t: N.NamedType) -> None:
        if t.args:
            raise TypeCheckError(f"{t.name} takes no type arguments", t.span)

    def _reject_recursive_types(self) -> None:
        # Type definitions may not contain themselves, even behind
        # references: value spaces would not terminate.
        def refs_of(ty: T.Type, out: set[str]) -> None:
            ty = T.strip_refs(ty)
            if isinstance(ty, (T.EnumType, T.StructType)):
                out.add(ty.name)
            elif isinstance(ty, T.TupleType):
                for e in ty.elems:
                    refs_of(e, out)
            elif isinstance(ty, (T.ArrayType, T.SliceType)):
                refs_of(ty.elem, out)

        graph: dict[str, set[str]] = {}
        for name, info in self.env.enums.items():
            out: set[str] = set()
            for v in info.variants:
                for ft in v.field_types:
                    refs_of(ft, out)
            graph[name] = out
        for name, sinfo in self.env.structs.items():
            out = set()
            for ft in sinfo.field_types:
                refs_of(ft, out)
            graph[name] = out

        done: set[str] = set()
        path: list[str] = []

        def visit(n: str) -> None:
            if n in done:
                return
            if n in path:
                raise TypeCheckError(f"recursive type {n!r} is not supported")
            path.append(n)
            for m in graph.get(n, ()):
                visit(m)
            path.pop()
            done.add(n)

        for n in graph:
            visit(n)

    # ── slice length cap ─────────────────────────────────────────

    def _compute_slice_cap(self) -> int:
        cap = 1
        for pat in self._all_patterns():
            for node in N.walk_pattern(pat):
                if isinstance(node, N.SlicePat):
                    width = sum(
                        0 if R.is_rest_elem(e) else 1 for e in node.elems
                    )
                    cap = max(cap, width + 1)
        # Constant slice values become singleton spaces; their lengths
        # must stay inside the explicitly tracked range.
        for item in self.prog.items:
            if isinstance(item, (N.ConstDef, N.StaticDef)):
                for e in walk_nodes(item.value):
                    if isinstance(e, N.ArrayExpr):
                        cap = max(cap, len(e.elems))
        return cap

    def _all_patterns(self):
        for fn in self.prog.functions():
            yield from _walk_patterns_block(fn.body)

    # ── constant evaluation ──────────────────────────────────────

    def _eval_consts_and_statics(self) -> None:
        defs = {
            item.name: item
            for item in self.prog.items
            if isinstance(item, N.ConstDef)
        }

        def force(name: str) -> V.Value:
            info = self.env.consts[name]
            if info.value is not None:
                return info.value
            if name in self._const_stack:
                raise TypeCheckError(f"constant {name!r} depends on itself")
            self._const_stack.append(name)
            item = defs[name]
            self.scopes = []
            got = self.check_expr(item.value, info.ty)
            self._expect(got, info.ty, item.span)
            info.value = self._const_eval(item.value, force)
            self._const_stack.pop()
            return info.value

        for name in defs:
            force(name)
        for item in self.prog.items:
            if isinstance(item, N.StaticDef):
                info = self.env.statics[item.name]
                self.scopes = []
                got = self.check_expr(item.value, info.ty)
                self._expect(got, info.ty, item.span)
                info.value = self._const_eval(item.value, force)

    def _const_eval(self, e: N.Expr, force) -> V.Value:
        if isinstance(e, N.LitExpr):
            return _literal_value(e)
        if isinstance(e, N.PathExpr):
            if e.resolution == "const":
                return force(e.path[-1])
            if e.resolution == "unit_struct":
                return V.StructVal(e.path[-1], ())
            if e.resolution == "variant":
                ety = T.strip_refs(e.ty)
                info = self.env.enums[ety.name]  # type: ignore[union-attr]
                vi = info.variant(e.path[-1])
                return V.EnumVal(ety.name, e.path[-1], (), tuple(vi.field_names))  # type: ignore[union-attr]
            raise TypeCheckError(
                "only constants and constructors are allowed in constant "
                "expressions",
                e.span,
            )
        if isinstance(e, N.UnaryExpr):
            v = self._const_eval(e.operand, force)
            return _apply_unary(e.op, v, e.span, const=True)
        if isinstance(e, N.BinaryExpr):
            a = self._const_eval(e.lhs, force)
            b = self._const_eval(e.rhs, force)
            return _apply_binary(e.op, a, b, e.span, const=True)
        if isinstance(e, N.TupleExpr):
            return V.TupleVal(tuple(self._const_eval(x, force) for x in e.elems))
        if isinstance(e, N.ArrayExpr):
            elems = tuple(self._const_eval(x, force) for x in e.elems)
            return V.ArrayVal(elems)
        if isinstance(e, N.RefExpr):
            inner = self._const_eval(e.inner, force)
            ity = T.strip_refs(e.ty)
            if isinstance(ity, T.SliceType) and isinstance(inner, V.ArrayVal):
                inner = V.SliceVal(inner.elems)
            return V.RefVal(inner)
        if isinstance(e, N.CallExpr):
            args = tuple(self._const_eval(a, force) for a in e.args)
            if e.call_kind == "variant":
                ety = T.strip_refs(e.ty)
                info = self.env.enums[ety.name]  # type: ignore[union-attr]
                vi = info.variant(e.callee.path[-1])
                return V.EnumVal(ety.name, e.callee.path[-1], args, tuple(vi.field_names))  # type: ignore[union-attr]
            if e.call_kind == "tuple_struct":
                return V.StructVal(
                    e.callee.path[-1],
                    tuple((str(i), a) for i, a in enumerate(args)),
                )
            raise TypeCheckError(
                "function calls are not allowed in constant expressions", e.span
            )
        if isinstance(e, N.StructExpr):
            ety = T.strip_refs(e.ty)
            if isinstance(ety, T.EnumType):
                info = self.env.enums[ety.name]
                vi = info.variant(e.path[-1])
                vals = {n: self._const_eval(x, force) for n, x in e.fields}
                return V.EnumVal(
                    ety.name,
                    e.path[-1],
                    tuple(vals[n] for n in vi.field_names),  # type: ignore[union-attr]
                    tuple(vi.field_names),  # type: ignore[union-attr]
                )
            sinfo = self.env.structs[e.path[-1]]
            vals = {n: self._const_eval(x, force) for n, x in e.fields}
            return V.StructVal(
                sinfo.name, tuple((n, vals[n]) for n in sinfo.field_names)
            )
        raise TypeCheckError(
            "expression is not allowed in constant expressions", e.span
        )

    # ── functions ────────────────────────────────────────────────

    def _check_fn(self, fn: N.FnDef) -> None:
        info = self.env.fns[fn.name]
        self.current_ret = info.ret
        scope = {
            name: (ty, p.mutable)
            for name, ty, p in zip(info.param_names, info.param_types, fn.params)
        }
        self.scopes = [scope]
        body_ty = self.check_block(fn.body, info.ret)
        self._expect(body_ty, info.ret, fn.body.span)
        self.scopes = []

    # ── scopes ───────────────────────────────────────────────────

    def _lookup(self, name: str) -> Optional[tuple[T.Type, bool]]:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    def _bind_all(self, binds: dict[str, tuple[T.Type, bool]]) -> None:
        self.scopes[-1].update(binds)

    # ── blocks and statements ────────────────────────────────────

    def check_block(self, b: N.Block, expected: Optional[T.Type] = None) -> T.Type:
        self.scopes.append({})
        try:
            for s in b.stmts:
                self.check_stmt(s)
            if b.tail is not None:
                ty = self.check_expr(b.tail, expected)
            elif b.stmts and _stmt_diverges(b.stmts[-1]):
                ty = T.NEVER
            else:
                ty = T.UNIT
            b.ty = ty
            return ty
        finally:
            self.scopes.pop()

    def check_stmt(self, s: N.Stmt) -> None:
        if isinstance(s, N.LetStmt):
            declared = self.resolve_type(s.ty_ann) if s.ty_ann else None
            init_ty = self.check_expr(s.init, declared)
            ty = declared if declared is not None else init_ty
            if declared is not None:
                ty = self._expect(init_ty, declared, s.span)
            binds: dict[str, tuple[T.Type, bool]] = {}
            s.pat = self._check_pat(s.pat, ty, binds)
            cls = R.classify_pattern(s.pat, ty, self.env, self.slice_rule)
            if cls is not R.IRR:
                raise TypeCheckError(
                    "refutable pattern in `let` binding; use `let ... else` "
                    "or `if let`",
                    s.span,
                )
            self._bind_all(binds)
            return
        if isinstance(s, N.LetElseStmt):
            declared = self.resolve_type(s.ty_ann) if s.ty_ann else None
            init_ty = self.check_expr(s.init, declared)
            ty = declared if declared is not None else init_ty
            if declared is not None:
                ty = self._expect(init_ty, declared, s.span)
            binds = {}
            s.pat = self._check_pat(s.pat, ty, binds)
            R.classify_pattern(s.pat, ty, self.env, self.slice_rule)
            else_ty = self.check_block(s.else_block)
            if not isinstance(else_ty, T.NeverType):
                raise TypeCheckError(
                    "the `else` branch of `let ... else` must diverge "
                    "(return, panic, or similar)",
                    s.else_block.span,
                )
            self._bind_all(binds)
            return
        if isinstance(s, N.AssignStmt):
            found = self._lookup(s.name)
            if found is not None:
                ty, mutable = found
                if not mutable:
                    raise TypeCheckError(
                        f"cannot assign to immutable binding {s.name!r}", s.span
                    )
            elif s.name in self.env.statics:
                info = self.env.statics[s.name]
                if not info.mutable:
                    raise TypeCheckError(
                        f"cannot assign to immutable static {s.name!r}", s.span
                    )
                ty = info.ty
            else:
                raise TypeCheckError(f"unknown name {s.name!r}", s.span)
            got = self.check_expr(s.value, ty)
            self._expect(got, ty, s.span)
            return
        if isinstance(s, N.ExprStmt):
            self.check_expr(s.expr)
            return
        if isinstance(s, N.WhileStmt):
            cond_ty = self.check_expr(s.cond, T.BOOL)
            self._expect(cond_ty, T.BOOL, s.cond.span)
            body_ty = self.check_block(s.body)
            if not isinstance(body_ty, (T.NeverType,)) and body_ty != T.UNIT:
                raise TypeCheckError(
                    "`while` body must not produce a value", s.body.span
                )
            return
        raise AssertionError(f"unknown statement {s!r}")

    # ── expressions ──────────────────────────────────────────────

    def check_expr(self, e: N.Expr, expected: Optional[T.Type] = None) -> T.Type:
        ty = self._check_expr_inner(e, expected)
        e.ty = ty
        return ty

    def _check_expr_inner(self, e: N.Expr, expected: Optional[T.Type]) -> T.Type:
        if isinstance(e, N.LitExpr):
            return self._check_literal(e, expected)
        if isinstance(e, N.PathExpr):
            return self._check_path(e, expected)
        if isinstance(e, N.CallExpr):
            return self._check_call(e, expected)
        if isinstance(e, N.StructExpr):
            return self._check_struct_expr(e, expected)
        if isinstance(e, N.TupleExpr):
            exp_elems: list[Optional[T.Type]] = [None] * len(e.elems)
            exp = _strip_opt(expected)
            if isinstance(exp, T.TupleType) and len(exp.elems) == len(e.elems):
                exp_elems = list(exp.elems)
            tys = tuple(
                self.check_expr(x, xe) for x, xe in zip(e.elems, exp_elems)
            )
            return T.TupleType(tys)
        if isinstance(e, N.ArrayExpr):
            exp = _strip_opt(expected)
            elem_exp: Optional[T.Type] = None
            if isinstance(exp, T.ArrayType):
                elem_exp = exp.elem
            elif isinstance(exp, T.SliceType):
                elem_exp = exp.elem
            if not e.elems:
                if elem_exp is None:
                    raise TypeCheckError(
                        "cannot infer element type of empty array", e.span
                    )
                return T.ArrayType(elem_exp, 0)
            first = self.check_expr(e.elems[0], elem_exp)
            for x in e.elems[1:]:
                got = self.check_expr(x, first)
                self._expect(got, first, x.span)
            return T.ArrayType(first, len(e.elems))
        if isinstance(e, N.RefExpr):
            inner_exp: Optional[T.Type] = None
            if isinstance(expected, T.RefType):
                inner_exp = expected.inner
                if isinstance(inner_exp, T.SliceType) and isinstance(
                    e.inner, N.ArrayExpr
                ):
                    # &[a, b] satisfies &[T]: type the literal as an array
                    # here, the reference coerces at the use site.
                    inner_exp = T.ArrayType(inner_exp.elem, len(e.inner.elems))
            inner = self.check_expr(e.inner, inner_exp)
            return T.RefType(e.mutable, inner)
        if isinstance(e, N.UnaryExpr):
            if e.op == "-":
                if isinstance(e.operand, N.LitExpr) and e.operand.lit_kind == "int":
                    # fold so i8::MIN etc. type-checks as a single literal
                    lit_ty = self._check_literal(
                        e.operand, expected, negate=True
                    )
                    e.operand.ty = lit_ty
                    return lit_ty
                ty = self.check_expr(e.operand, expected)
                base = T.strip_refs(ty)
                if not (isinstance(base, T.IntType) and base.name.startswith("i")):
                    raise TypeCheckError(
                        f"unary `-` needs a signed integer, got {ty}", e.span
                    )
                return base
            ty = self.check_expr(e.operand, T.BOOL)
            if T.strip_refs(ty) != T.BOOL:
                raise TypeCheckError(f"`!` needs bool, got {ty}", e.span)
            return T.BOOL
        if isinstance(e, N.BinaryExpr):
            return self._check_binary(e, expected)
        if isinstance(e, N.FieldExpr):
            return self._check_field(e)
        if isinstance(e, N.IndexExpr):
            base = T.strip_refs(self.check_expr(e.base))
            idx = T.strip_refs(self.check_expr(e.index))
            if not isinstance(idx, T.IntType):
                raise TypeCheckError(f"index must be an integer, got {idx}", e.span)
            if isinstance(base, T.ArrayType):
                return base.elem
            if isinstance(base, T.SliceType):
                return base.elem
            raise TypeCheckError(f"cannot index into {base}", e.span)
        if isinstance(e, N.BlockExpr):
            return self.check_block(e.block, expected)
        if isinstance(e, N.IfExpr):
            cond_ty = self.check_expr(e.cond, T.BOOL)
            self._expect(cond_ty, T.BOOL, e.cond.span)
            return self._check_branches(e.then, e.else_, expected, e.span)
        if isinstance(e, N.IfLetExpr):
            scr_ty = self.check_expr(e.scrutinee)
            binds: dict[str, tuple[T.Type, bool]] = {}
            e.pat = self._check_pat(e.pat, scr_ty, binds)
            R.classify_pattern(e.pat, scr_ty, self.env, self.slice_rule)
            self.scopes.append(dict(binds))
            try:
                then_ty = self.check_block(e.then, expected)
            finally:
                self.scopes.pop()
            return self._merge_else(then_ty, e.else_, expected, e.span)
        if isinstance(e, N.MatchExpr):
            return self._check_match(e, expected)
        if isinstance(e, N.QuestionMarkExpr):
            return self._check_question_mark(e)
        if isinstance(e, N.ReturnExpr):
            if e.value is not None:
                got = self.check_expr(e.value, self.current_ret)
                self._expect(got, self.current_ret, e.span)
            elif self.current_ret != T.UNIT:
                raise TypeCheckError(
                    f"function returns {self.current_ret}; `return` needs a value",
                    e.span,
                )
            return T.NEVER
        if isinstance(e, N.PrintExpr):
            try:
                parts = V.parse_template(e.template)
            except ValueError as ex:
                raise TypeCheckError(str(ex), e.span) from None
            for kind, name in parts:
                if kind == "name" and not self._name_printable(name):
                    raise TypeCheckError(
                        f"unknown name {name!r} in template", e.span
                    )
            return T.UNIT
        if isinstance(e, N.PanicExpr):
            return T.NEVER
        raise AssertionError(f"unknown expression {e!r}")

    def _name_printable(self, name: str) -> bool:
        return (
            self._lookup(name) is not None
            or name in self.env.consts
            or name in self.env.statics
        )

    def _check_literal(
        self, e: N.LitExpr, expected: Optional[T.Type], negate: bool = False
    ) -> T.Type:
        if e.lit_kind == "bool":
            return T.BOOL
        if e.lit_kind == "char":
            return T.CHAR
        if e.lit_kind == "str":
            return T.STR
        exp = _strip_opt(expected)
        if e.suffix is not None:
            ty = T.INT_TYPES[e.suffix]
        elif isinstance(exp, T.IntType):
            ty = exp
        else:
            ty = T.I32
        value = -e.value if negate else e.value  # type: ignore[operator]
        lo, hi = ty.bounds()
        if not (lo <= value <= hi):
            raise TypeCheckError(
                f"literal {value} does not fit in {ty.name}", e.span
            )
        return ty

    def _check_path(self, e: N.PathExpr, expected: Optional[T.Type]) -> T.Type:
        if len(e.path) == 1:
            name = e.path[0]
            found = self._lookup(name)
            if found is not None:
                e.resolution = "local"
                return found[0]
            if name in self.env.consts:
                e.resolution = "const"
                return self.env.consts[name].ty
            if name in self.env.statics:
                if self._const_stack:
                    raise TypeCheckError(
                        "statics are not allowed in constant expressions", e.span
                    )
                e.resolution = "static"
                return self.env.statics[name].ty
            sinfo = self.env.structs.get(name)
            if sinfo is not None and sinfo.style == "unit":
                e.resolution = "unit_struct"
                return T.StructType(name)
            exp = _strip_opt(expected)
            if isinstance(exp, T.EnumType):
                info = self.env.enums[exp.name]
                var = info.variant(name)
                if var is not None and var.style == "unit":
                    e.resolution = "variant"
                    e.enum_name = exp.name
                    return exp
            raise TypeCheckError(f"unknown name {name!r}", e.span)
        base, vname = e.path
        info = self._resolve_enum_base(base, expected, e.span)
        var = info.variant(vname)
        if var is None:
            raise TypeCheckError(f"enum {info.name} has no variant {vname!r}", e.span)
        if var.style != "unit":
            raise TypeCheckError(
                f"variant {vname} needs its payload; call it like a function",
                e.span,
            )
        e.resolution = "variant"
        e.enum_name = info.name
        return T.EnumType(info.name)

    def _resolve_enum_base(
        self, base: str, expected: Optional[T.Type], span
    ) -> T.EnumInfo:
        if base in ("Option", "Result"):
            exp = _strip_opt(expected)
            if isinstance(exp, T.EnumType):
                info = self.env.enums[exp.name]
                if info.builtin == base.lower():
                    return info
            raise TypeCheckError(
                f"cannot infer the concrete {base} type here; "
                "add a type annotation",
                span,
            )
        info = self.env.enums.get(base)
        if info is None:
            raise TypeCheckError(f"unknown enum {base!r}", span)
        return info

    def _check_call(self, e: N.CallExpr, expected: Optional[T.Type]) -> T.Type:
        path = e.callee.path
        if len(path) == 1:
            name = path[0]
            if name in self.env.fns:
                info = self.env.fns[name]
                if len(e.args) != len(info.param_types):
                    raise TypeCheckError(
                        f"{name} takes {len(info.param_types)} argument(s), "
                        f"got {len(e.args)}",
                        e.span,
                    )
                for a, pt in zip(e.args, info.param_types):
                    got = self.check_expr(a, pt)
                    self._expect(got, pt, a.span)
                e.call_kind = "fn"
                e.callee.ty = None
                return info.ret
            sinfo = self.env.structs.get(name)
            if sinfo is not None and sinfo.style == "tuple":
                return self._check_ctor_args(
                    e, sinfo.field_types, T.StructType(name), "tuple_struct", None
                )
            return self._check_variant_call(e, None, name, expected)
        base, vname = path
        return self._check_variant_call(e, base, vname, expected)

    def _check_variant_call(
        self,
        e: N.CallExpr,
        base: Optional[str],
        vname: str,
        expected: Optional[T.Type],
    ) -> T.Type:
        exp = _strip_opt(expected)
        info: Optional[T.EnumInfo] = None
        if isinstance(exp, T.EnumType):
            cand = self.env.enums[exp.name]
            if cand.variant(vname) is not None and (
                base is None
                or base == cand.name
                or (cand.builtin == "option" and base == "Option")
                or (cand.builtin == "result" and base == "Result")
            ):
                info = cand
        if info is None and base is not None and base in self.env.enums:
            info = self.env.enums[base]
        if info is None and base is None:
            # Some(x) with no expectation still determines its type.
            if vname == "Some" and len(e.args) == 1:
                inner = self.check_expr(e.args[0])
                ety = self.env.option_of(inner)
                e.call_kind = "variant"
                e.enum_name = ety.name
                return ety
            raise TypeCheckError(
                f"cannot resolve {vname!r}; unknown function or constructor",
                e.span,
            )
        if info is None:
            raise TypeCheckError(f"unknown enum {base!r}", e.span)
        var = info.variant(vname)
        if var is None:
            raise TypeCheckError(
                f"enum {info.name} has no variant {vname!r}", e.span
            )
        if var.style != "tuple":
            raise TypeCheckError(
                f"variant {vname} is not a tuple variant", e.span
            )
        return self._check_ctor_args(
            e, var.field_types, T.EnumType(info.name), "variant", info.name
        )

    def _check_ctor_args(
        self,
        e: N.CallExpr,
        field_types: list[T.Type],
        result: T.Type,
        kind: str,
        enum_name: Optional[str],
    ) -> T.Type:
        if len(e.args) != len(field_types):
            raise TypeCheckError(
                f"constructor takes {len(field_types)} argument(s), "
                f"got {len(e.args)}",
                e.span,
            )
        for a, ft in zip(e.args, field_types):
            got = self.check_expr(a, ft)
            self._expect(got, ft, a.span)
        e.call_kind = kind
        e.enum_name = enum_name
        return result

    def _check_struct_expr(self, e: N.StructExpr, expected: Optional[T.Type]) -> T.Type:
        if len(e.path) == 2:
            info = self._resolve_enum_base(e.path[0], expected, e.span)
            var = info.variant(e.path[1])
            if var is None or var.style != "struct":
                raise TypeCheckError(
                    f"{e.path[1]} is not a struct-style variant of {info.name}",
                    e.span,
                )
            self._check_fields(e, var.field_names, var.field_types)
            e.enum_name = info.name
            return T.EnumType(info.name)
        name = e.path[0]
        sinfo = self.env.structs.get(name)
        if sinfo is not None and sinfo.style == "named":
            self._check_fields(e, sinfo.field_names, sinfo.field_types)
            return T.StructType(name)
        exp = _strip_opt(expected)
        if isinstance(exp, T.EnumType):
            info = self.env.enums[exp.name]
            var = info.variant(name)
            if var is not None and var.style == "struct":
                self._check_fields(e, var.field_names, var.field_types)
                e.enum_name = info.name
                return exp
        raise TypeCheckError(f"unknown struct {name!r}", e.span)

    def _check_fields(self, e: N.StructExpr, names: list[str], types: list[T.Type]) -> None:
        given = {}
        for n, x in e.fields:
            if n in given:
                raise TypeCheckError(f"field {n!r} given twice", e.span)
            given[n] = x
        for n in given:
            if n not in names:
                raise TypeCheckError(f"unknown field {n!r}", e.span)
        missing = [n for n in names if n not in given]
        if missing:
            raise TypeCheckError(
                f"missing field(s) {', '.join(missing)}", e.span
            )
        for n, ft in zip(names, types):
            got = self.check_expr(given[n], ft)
            self._expect(got, ft, given[n].span)

    def _check_binary(self, e: N.BinaryExpr, expected: Optional[T.Type]) -> T.Type:
        op = e.op
        if op in ("&&", "||"):
            for side in (e.lhs, e.rhs):
                got = self.check_expr(side, T.BOOL)
                if T.strip_refs(got) != T.BOOL:
                    raise TypeCheckError(f"`{op}` needs bool, got {got}", side.span)
            return T.BOOL
        if op in ("==", "!=", "<", "<=", ">", ">="):
            first, second = e.lhs, e.rhs
            if _is_plain_int_literal(first) and not _is_plain_int_literal(second):
                first, second = second, first
            t1 = T.strip_refs(self.check_expr(first))
            t2 = T.strip_refs(self.check_expr(second, t1))
            if t1 != t2:
                raise TypeCheckError(
                    f"cannot compare {t1} with {t2}", e.span
                )
            if op in ("<", "<=", ">", ">="):
                if not isinstance(t1, (T.IntType, T.CharType)):
                    raise TypeCheckError(
                        f"ordering needs integers or chars, got {t1}", e.span
                    )
            return T.BOOL
        # arithmetic
        exp = _strip_opt(expected)
        lhs_exp = exp if isinstance(exp, T.IntType) else None
        first, second = e.lhs, e.rhs
        if _is_plain_int_literal(first) and not _is_plain_int_literal(second):
            first, second = second, first
        t1 = T.strip_refs(self.check_expr(first, lhs_exp))
        if not isinstance(t1, T.IntType):
            raise TypeCheckError(f"arithmetic needs integers, got {t1}", e.span)
        t2 = T.strip_refs(self.check_expr(second, t1))
        if t1 != t2:
            raise TypeCheckError(f"mismatched operands: {t1} vs {t2}", e.span)
        return t1

    def _check_field(self, e: N.FieldExpr) -> T.Type:
        base = T.strip_refs(self.check_expr(e.base))
        if isinstance(base, T.TupleType):
            if not e.name.isdigit() or int(e.name) >= len(base.elems):
                raise TypeCheckError(f"no field {e.name!r} on {base}", e.span)
            return base.elems[int(e.name)]
        if isinstance(base, T.StructType):
            info = self.env.structs[base.name]
            if e.name in info.field_names:
                return info.field_types[info.field_names.index(e.name)]
            raise TypeCheckError(f"no field {e.name!r} on {base}", e.span)
        raise TypeCheckError(f"cannot access field on {base}", e.span)

    def _check_branches(self, then, else_, expected, span) -> T.Type:
        then_ty = self.check_block(then, expected)
        return self._merge_else(then_ty, else_, expected, span)

    def _merge_else(self, then_ty, else_, expected, span) -> T.Type:
        if else_ is None:
            if not isinstance(then_ty, T.NeverType) and then_ty != T.UNIT:
                raise TypeCheckError(
                    "`if` without `else` must not produce a value", span
                )
            return T.UNIT
        if isinstance(else_, (N.IfExpr, N.IfLetExpr)):
            else_ty = self.check_expr(else_, expected)
        else:
            else_ty = self.check_block(else_, expected)
        return _unify(then_ty, else_ty, span)

    def _check_match(self, e: N.MatchExpr, expected: Optional[T.Type]) -> T.Type:
        scr_ty = self.check_expr(e.scrutinee)
        if isinstance(T.strip_refs(scr_ty), T.NeverType):
            raise TypeCheckError("cannot match on a diverging expression", e.span)
        result: Optional[T.Type] = None
        for arm in e.arms:
            binds: dict[str, tuple[T.Type, bool]] = {}
            arm.pat = self._check_pat(arm.pat, scr_ty, binds)
            R.classify_pattern(arm.pat, scr_ty, self.env, self.slice_rule)
            self.scopes.append(dict(binds))
            try:
                if arm.guard is not None:
                    got = self.check_expr(arm.guard, T.BOOL)
                    self._expect(got, T.BOOL, arm.guard.span)
                body_ty = self.check_expr(arm.body, expected)
            finally:
                self.scopes.pop()
            result = body_ty if result is None else _unify(result, body_ty, arm.span)
        self._check_exhaustive_and_prune(e, scr_ty)
        if result is None:
            base = T.strip_refs(scr_ty)
            info = self.env.enum_info(base)
            if info is not None and not info.variants:
                return T.NEVER
            raise TypeCheckError("match has no arms", e.span)
        return result

    def _check_exhaustive_and_prune(self, e: N.MatchExpr, scr_ty: T.Type) -> None:
        base = T.strip_refs(scr_ty)
        remaining = VS.value_space_of(base, self.env)
        for arm in e.arms:
            denot = R.pattern_denotation(arm.pat, base, self.env)
            if arm.guard is None:
                if VS.space_is_subset(remaining, denot):
                    arm.pruned = True
                remaining = VS.space_subtract(remaining, denot)
        if not remaining.is_empty():
            witness = remaining.witness(self.env)
            raise TypeCheckError(
                "match is not exhaustive; for example, "
                f"`{render_value(witness)}` is not covered",
                e.span,
                witness=witness,
            )

    def _check_question_mark(self, e: N.QuestionMarkExpr) -> T.Type:
        inner = T.strip_refs(self.check_expr(e.inner))
        info = self.env.enum_info(inner)
        ret_info = self.env.enum_info(T.strip_refs(self.current_ret))
        if info is None or info.builtin is None:
            raise TypeCheckError(
                f"`?` needs an Option or Result, got {inner}", e.span
            )
        if ret_info is None or ret_info.builtin != info.builtin:
            raise TypeCheckError(
                "`?` needs the enclosing function to return the same kind of "
                f"{info.builtin.capitalize()}",
                e.span,
            )
        if info.builtin == "result":
            err_here = info.variant("Err").field_types[0]  # type: ignore[union-attr]
            err_ret = ret_info.variant("Err").field_types[0]  # type: ignore[union-attr]
            if err_here != err_ret:
                raise TypeCheckError(
                    f"`?` error type {err_here} does not match the function's "
                    f"error type {err_ret}",
                    e.span,
                )
            return info.variant("Ok").field_types[0]  # type: ignore[union-attr]
        return info.variant("Some").field_types[0]  # type: ignore[union-attr]

    # ── patterns ─────────────────────────────────────────────────

    def _check_pat(
        self, p: N.Pattern, ty: T.Type, binds: dict[str, tuple[T.Type, bool]]
    ) -> N.Pattern:
        # Match ergonomics: structural patterns reach through references.
        if isinstance(ty, T.RefType) and self._wants_ref_unwrap(p, ty):
            wrapper = N.RefPat(p.span, mutable=ty.mutable, inner=p, implicit=True)
            wrapper.ty = ty
            wrapper.inner = self._check_pat(p, ty.inner, binds)
            return wrapper
        return self._check_pat_direct(p, ty, binds)

    def _wants_ref_unwrap(self, p: N.Pattern, ty: T.RefType) -> bool:
        if isinstance(p, _STRUCTURAL_WRAP_EXEMPT):
            return False
        if isinstance(p, N.GroupPat):
            return self._wants_ref_unwrap(p.inner, ty)
        if isinstance(p, N.OrPat):
            # unwrap above the or only when every alternative would; a
            # mixed or leaves each alternative to unwrap individually
            return all(self._wants_ref_unwrap(a, ty) for a in p.alts)
        if isinstance(p, N.NameRefPat):
            res, _ = R.resolve_bare_name(p.name, ty, self.env)
            return res != "binding"
        return True

    def _check_pat_direct(
        self, p: N.Pattern, ty: T.Type, binds: dict[str, tuple[T.Type, bool]]
    ) -> N.Pattern:
        p.ty = ty
        base = T.strip_refs(ty)

        if isinstance(p, N.WildcardPat):
            return p
        if isinstance(p, N.RestPat):
            raise TypeCheckError("`..` is not allowed here", p.span)
        if isinstance(p, N.IdentPat):
            if isinstance(p.sub, N.RestPat):
                raise TypeCheckError(
                    "`name @ ..` is only allowed inside slice patterns", p.span
                )
            if p.sub is not None:
                p.sub = self._check_pat(p.sub, ty, binds)
            self._bind(binds, p.name, ty, p.mutable, p.span)
            return p
        if isinstance(p, N.NameRefPat):
            res, enum_name = R.resolve_bare_name(p.name, ty, self.env)
            p.resolution, p.enum_name = res, enum_name
            if res == "binding":
                self._bind(binds, p.name, ty, False, p.span)
                return p
            if res == "const":
                cty = self.env.consts[p.name].ty
                if T.strip_refs(cty) != base:
                    raise TypeCheckError(
                        f"constant {p.name} has type {cty}, pattern needs {base}",
                        p.span,
                    )
                return p
            if res == "unit_struct":
                if base != T.StructType(p.name):
                    raise TypeCheckError(
                        f"unit struct {p.name} cannot match a {base}", p.span
                    )
                return p
            return p  # unit variant of the scrutinee enum
        if isinstance(p, N.LiteralPat):
            self._check_literal_pat(p, base)
            return p
        if isinstance(p, N.RangePat):
            self._check_range_pat(p, base)
            return p
        if isinstance(p, N.RefPat) and not p.implicit:
            if not isinstance(ty, T.RefType):
                raise TypeCheckError(
                    f"`&` pattern against non-reference type {ty}", p.span
                )
            if p.mutable != ty.mutable:
                want = "&mut" if ty.mutable else "&"
                raise TypeCheckError(f"pattern must use {want} here", p.span)
            p.inner = self._check_pat(p.inner, ty.inner, binds)
            return p
        if isinstance(p, N.RefPat):
            # implicit wrapper from a previous check; re-check transparently
            inner_ty = ty.inner if isinstance(ty, T.RefType) else ty
            p.inner = self._check_pat(p.inner, inner_ty, binds)
            return p
        if isinstance(p, N.GroupPat):
            p.inner = self._check_pat(p.inner, ty, binds)
            return p
        if isinstance(p, N.TuplePat):
            if not isinstance(base, T.TupleType):
                raise TypeCheckError(f"tuple pattern against {base}", p.span)
            self._check_sequence(p.elems, list(base.elems), binds, p.span)
            return p
        if isinstance(p, N.StructPat):
            target = R.resolve_struct_path(p.path, base, self.env, p.span)
            if target[0] == "struct":
                info = target[1]
                if base != T.StructType(info.name):
                    raise TypeCheckError(
                        f"pattern for {info.name} against {base}", p.span
                    )
                R.struct_field_pairs(p, info, p.span)  # validates field names
                declared = dict(zip(info.field_names, info.field_types))
            else:
                _, einfo, var = target
                if base != T.EnumType(einfo.name):
                    raise TypeCheckError(
                        f"pattern for {einfo.name} against {base}", p.span
                    )
                if var.style != "struct":
                    raise TypeCheckError(
                        f"variant {var.name} is not a struct variant", p.span
                    )
                R._variant_struct_pairs(p, var, p.span)
                declared = dict(zip(var.field_names, var.field_types))
            for f in p.fields:
                fty = declared[f.name]
                if f.pat is None:
                    self._bind(binds, f.name, fty, False, f.span)
                else:
                    f.pat = self._check_pat(f.pat, fty, binds)
            return p
        if isinstance(p, N.TupleStructPat):
            target = R.resolve_struct_path(p.path, base, self.env, p.span)
            if target[0] == "struct":
                info = target[1]
                if info.style != "tuple":
                    raise TypeCheckError(
                        f"{info.name} is not a tuple struct", p.span
                    )
                if base != T.StructType(info.name):
                    raise TypeCheckError(
                        f"pattern for {info.name} against {base}", p.span
                    )
                self._check_sequence(p.elems, list(info.field_types), binds, p.span)
                return p
            _, einfo, var = target
            if base != T.EnumType(einfo.name):
                raise TypeCheckError(
                    f"pattern for {einfo.name} against {base}", p.span
                )
            if var.style != "tuple":
                raise TypeCheckError(
                    f"variant {var.name} is not a tuple variant", p.span
                )
            self._check_sequence(p.elems, list(var.field_types), binds, p.span)
            return p
        if isinstance(p, N.PathPat):
            target = R.resolve_struct_path(p.path, base, self.env, p.span)
            if target[0] == "struct":
                info = target[1]
                if info.style != "unit":
                    raise TypeCheckError(
                        f"{info.name} is not a unit struct", p.span
                    )
                if base != T.StructType(info.name):
                    raise TypeCheckError(
                        f"pattern for {info.name} against {base}", p.span
                    )
                p.resolution = "unit_struct"
                return p
            _, einfo, var = target
            if base != T.EnumType(einfo.name):
                raise TypeCheckError(
                    f"pattern for {einfo.name} against {base}", p.span
                )
            if var.style != "unit":
                raise TypeCheckError(
                    f"variant {var.name} needs its payload here", p.span
                )
            p.resolution = "variant"
            p.enum_name = einfo.name
            return p
        if isinstance(p, N.SlicePat):
            if isinstance(base, T.ArrayType):
                self._check_sequence(
                    p.elems, [base.elem] * base.length, binds, p.span,
                    slice_elem=base.elem,
                )
                return p
            if isinstance(base, T.SliceType):
                before, rest, after = R.split_rest(p.elems, p.span)
                if rest is not None and after:
                    raise TypeCheckError(
                        "`..` must be trailing in a pattern against a slice",
                        p.span,
                    )
                for i, elem in enumerate(before):
                    p.elems[i] = self._check_pat(elem, base.elem, binds)
                if isinstance(rest, N.IdentPat):
                    self._bind(
                        binds, rest.name, T.SliceType(base.elem), rest.mutable,
                        rest.span,
                    )
                    rest.ty = T.SliceType(base.elem)
                return p
            raise TypeCheckError(f"slice pattern against {base}", p.span)
        if isinstance(p, N.OrPat):
            alt_binds: list[dict[str, tuple[T.Type, bool]]] = []
            for i, alt in enumerate(p.alts):
                ab: dict[str, tuple[T.Type, bool]] = {}
                p.alts[i] = self._check_pat(alt, ty, ab)
                alt_binds.append(ab)
            first = alt_binds[0]
            for ab in alt_binds[1:]:
                if set(ab) != set(first):
                    raise TypeCheckError(
                        "all alternatives of an or-pattern must bind the "
                        "same names",
                        p.span,
                    )
                for name in ab:
                    if ab[name] != first[name]:
                        raise TypeCheckError(
                            f"binding {name!r} differs in type or mutability "
                            "across or-pattern alternatives",
                            p.span,
                        )
            for name, entry in first.items():
                self._bind(binds, name, entry[0], entry[1], p.span)
            return p
        raise AssertionError(f"unknown pattern {p!r}")

    def _check_sequence(
        self,
        elems: list[N.Pattern],
        types: list[T.Type],
        binds,
        span,
        slice_elem: Optional[T.Type] = None,
    ) -> None:
        before, rest, after = R.split_rest(elems, span)
        n = len(types)
        if rest is None and len(elems) != n:
            raise TypeCheckError(
                f"pattern has {len(elems)} elements but type has {n}", span
            )
        if len(before) + len(after) > n:
            raise TypeCheckError("pattern has more elements than the type", span)
        for i in range(len(before)):
            elems[i] = self._check_pat(elems[i], types[i], binds)
        for j in range(len(after)):
            src = len(before) + 1 + j
            elems[src] = self._check_pat(elems[src], types[n - len(after) + j], binds)
        if isinstance(rest, N.IdentPat):
            if slice_elem is None:
                raise TypeCheckError(
                    "`name @ ..` is only allowed inside slice patterns", span
                )
            self._bind(binds, rest.name, T.SliceType(slice_elem), rest.mutable, rest.span)
            rest.ty = T.SliceType(slice_elem)

    def _check_literal_pat(self, p: N.LiteralPat, base: T.Type) -> None:
        if p.lit_kind == "int":
            if not isinstance(base, T.IntType):
                raise TypeCheckError(
                    f"integer literal pattern against {base}", p.span
                )
            if p.suffix is not None and p.suffix != base.name:
                raise TypeCheckError(
                    f"literal suffix {p.suffix} does not match {base.name}", p.span
                )
            lo, hi = base.bounds()
            if not (lo <= p.value <= hi):  # type: ignore[operator]
                raise TypeCheckError(
                    f"literal {p.value} does not fit in {base.name}", p.span
                )
        elif p.lit_kind == "bool" and base != T.BOOL:
            raise TypeCheckError(f"bool literal pattern against {base}", p.span)
        elif p.lit_kind == "char" and base != T.CHAR:
            raise TypeCheckError(f"char literal pattern against {base}", p.span)
        elif p.lit_kind == "str" and base != T.STR:
            raise TypeCheckError(f"string literal pattern against {base}", p.span)

    def _check_range_pat(self, p: N.RangePat, base: T.Type) -> None:
        if p.lit_kind == "int":
            if not isinstance(base, T.IntType):
                raise TypeCheckError(f"integer range pattern against {base}", p.span)
            if p.suffix is not None and p.suffix != base.name:
                raise TypeCheckError(
                    f"range suffix {p.suffix} does not match {base.name}", p.span
                )
            lo, hi = base.bounds()
            for bound in (p.lo, p.hi):
                if bound is not None and not (lo <= bound <= hi):  # type: ignore[operator]
                    raise TypeCheckError(
                        f"range bound {bound} does not fit in {base.name}", p.span
                    )
            effective_hi = p.hi if p.hi is not None else hi
            if p.hi is not None and not p.inclusive:
                effective_hi = p.hi - 1  # type: ignore[operator]
            effective_lo = p.lo if p.lo is not None else lo
            if effective_lo > effective_hi:  # type: ignore[operator]
                raise TypeCheckError("range pattern matches nothing", p.span)
        elif p.lit_kind == "char":
            if base != T.CHAR:
                raise TypeCheckError(f"char range pattern against {base}", p.span)
            lo_cp = ord(str(p.lo)) if p.lo is not None else 0
            hi_cp = ord(str(p.hi)) if p.hi is not None else 0x10FFFF
            if p.hi is not None and not p.inclusive:
                hi_cp -= 1
            if lo_cp > hi_cp:
                raise TypeCheckError("range pattern matches nothing", p.span)
        else:
            raise TypeCheckError(
                "range patterns cover integers and chars only", p.span
            )

    def _bind(self, binds, name: str, ty: T.Type, mutable: bool, span) -> None:
        if name in binds:
            raise TypeCheckError(
                f"name {name!r} is bound more than once in this pattern", span
            )
        binds[name] = (ty, mutable)

    # ── expectations ─────────────────────────────────────────────

    def _expect(self, actual: T.Type, expected: T.Type, span) -> T.Type:
        if isinstance(actual, T.NeverType):
            return expected
        if actual == expected:
            return expected
        # &[T; N] coerces to &[T]
        if (
            isinstance(expected, T.RefType)
            and isinstance(actual, T.RefType)
            and isinstance(expected.inner, T.SliceType)
            and isinstance(actual.inner, T.ArrayType)
            and actual.inner.elem == expected.inner.elem
        ):
            return expected
        raise TypeCheckError(f"expected {expected}, got {actual}", span)


# ── helpers ──────────────────────────────────────────────────────


def _strip_opt(ty: Optional[T.Type]) -> Optional[T.Type]:
    return T.strip_refs(ty) if ty is not None else None


def _is_plain_int_literal(e: N.Expr) -> bool:
    if isinstance(e, N.LitExpr):
        return e.lit_kind == "int" and e.suffix is None
    if isinstance(e, N.UnaryExpr) and e.op == "-":
        return _is_plain_int_literal(e.operand)
    return False


def _unify(a: T.Type, b: T.Type, span) -> T.Type:
    if isinstance(a, T.NeverType):
        return b
    if isinstance(b, T.NeverType):
        return a
    if a == b:
        return a
    raise TypeCheckError(f"branches have different types: {a} vs {b}", span)


def _stmt_diverges(s: N.Stmt) -> bool:
    return isinstance(s, N.ExprStmt) and isinstance(s.expr.ty, T.NeverType)


def _literal_value(e: N.LitExpr) -> V.Value:
    if e.lit_kind == "int":
        base = T.strip_refs(e.ty)
        name = base.name if isinstance(base, T.IntType) else "i32"
        return V.IntVal(int(e.value), name)  # type: ignore[arg-type]
    if e.lit_kind == "bool":
        return V.BoolVal(bool(e.value))
    if e.lit_kind == "char":
        return V.CharVal(str(e.value))
    return V.StrVal(str(e.value))


_apply_unary = V.apply_unary
_apply_binary = V.apply_binary


# ── AST walkers shared with later passes ─────────────────────────


def walk_nodes(e: N.Expr):
    """Every expression under `e` (inclusive), plus the statements of any
    nested block, in source order."""
    yield e
    if isinstance(e, N.CallExpr):
        for a in e.args:
            yield from walk_nodes(a)
    elif isinstance(e, N.StructExpr):
        for _, x in e.fields:
            yield from walk_nodes(x)
    elif isinstance(e, (N.TupleExpr, N.ArrayExpr)):
        for x in e.elems:
            yield from walk_nodes(x)
    elif isinstance(e, N.RefExpr):
        yield from walk_nodes(e.inner)
    elif isinstance(e, N.UnaryExpr):
        yield from walk_nodes(e.operand)
    elif isinstance(e, N.BinaryExpr):
        yield from walk_nodes(e.lhs)
        yield from walk_nodes(e.rhs)
    elif isinstance(e, N.FieldExpr):
        yield from walk_nodes(e.base)
    elif isinstance(e, N.IndexExpr):
        yield from walk_nodes(e.base)
        yield from walk_nodes(e.index)
    elif isinstance(e, N.BlockExpr):
        yield from walk_nodes_block(e.block)
    elif isinstance(e, N.IfExpr):
        yield from walk_nodes(e.cond)
        yield from walk_nodes_block(e.then)
        yield from _walk_else(e.else_)
    elif isinstance(e, N.IfLetExpr):
        yield from walk_nodes(e.scrutinee)
        yield from walk_nodes_block(e.then)
        yield from _walk_else(e.else_)
    elif isinstance(e, N.MatchExpr):
        yield from walk_nodes(e.scrutinee)
        for arm in e.arms:
            if arm.guard is not None:
                yield from walk_nodes(arm.guard)
            yield from walk_nodes(arm.body)
    elif isinstance(e, N.QuestionMarkExpr):
        yield from walk_nodes(e.inner)
    elif isinstance(e, N.ReturnExpr):
        if e.value is not None:
            yield from walk_nodes(e.value)


def _walk_else(else_):
    if else_ is None:
        return
    if isinstance(else_, (N.IfExpr, N.IfLetExpr)):
        yield from walk_nodes(else_)
    else:
        yield from walk_nodes_block(else_)


def walk_nodes_block(b: N.Block):
    for s in b.stmts:
        yield s
        if isinstance(s, (N.LetStmt, N.LetElseStmt)):
            yield from walk_nodes(s.init)
            if isinstance(s, N.LetElseStmt):
                yield from walk_nodes_block(s.else_block)
        elif isinstance(s, N.AssignStmt):
            yield from walk_nodes(s.value)
        elif isinstance(s, N.ExprStmt):
            yield from walk_nodes(s.expr)
        elif isinstance(s, N.WhileStmt):
            yield from walk_nodes(s.cond)
            yield from walk_nodes_block(s.body)
    if b.tail is not None:
        yield from walk_nodes(b.tail)


def _walk_patterns_block(b: N.Block):
    for x in walk_nodes_block(b):
        if isinstance(x, (N.LetStmt, N.LetElseStmt)):
            yield x.pat
        elif isinstance(x, N.IfLetExpr):
            yield x.pat
        elif isinstance(x, N.MatchExpr):
            for arm in x.arms:
                yield arm.pat


def iter_patterns(prog: N.Program):
    """Yield ``(fn_name, pattern)`` for every pattern in a checked program."""
    for fn in prog.functions():
        for p in _walk_patterns_block(fn.body):
            yield fn.name, p
