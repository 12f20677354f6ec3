"""Decision and condition extraction.

A decision is a boolean-valued expression or a refutable pattern; its
conditions are the atomic boolean tests inside it. This module finds
every decision in a checked program:

  * refutable patterns of match arms, `if let` and `let else` lower to
    one condition per directly refutable sub-pattern, ordered by the
    short-circuit evaluation plan (length check first for dynamic
    slices, then depth-first left to right);
  * `if`/`while` conditions and match guards are always decisions, even
    with a single condition;
  * any other boolean expression containing `&&` or `||` is a decision
    wherever it appears (the wide reading: logic in assignments and
    returns counts too);
  * a conditional construct nested inside a condition is hoisted — its
    own decisions are extracted first and the enclosing condition
    becomes a single NestedDecisionResult referencing the first of
    them;
  * `?` is rewritten into its two-arm match before extraction, so its
    hidden decision and early return are visible;
  * conditions built only from literals and `const`s are flagged
    const_exempt; `static`s and `let` bindings never are.

Also here: the coverage-unit inventory (statements, arm bodies, block
tails, entries, exits) that statement and entry/exit coverage count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from rpscov import check as C
from rpscov import nodes as N
from rpscov import refutability as R
from rpscov import types as T
from rpscov import values as V
from rpscov import valuespace as VS
from rpscov.errors import NotADecision, RpsError
from rpscov.parser import parse_program
from rpscov.pretty import render_expr, render_pattern
from rpscov.spans import SourceSpan

ORIGINS = ("MatchArm", "IfLet", "LetElse", "BooleanExpr", "Guard", "QuestionMark")

CONDITION_KINDS = (
    "DiscriminantCheck",
    "LiteralEq",
    "RangeMembership",
    "SliceLenCheck",
    "ConstEq",
    "BooleanLeaf",
    "NestedDecisionResult",
)


# ── Boolean structure ────────────────────────────────────────────
# Structures are nested tuples: ("const", bool), ("cond", index),
# ("not", s), ("and", (s, ...)), ("or", (s, ...)). Evaluation is left
# to right with short-circuit; conditions skipped that way are the
# NotEvaluated entries of a vector.


def and_of(parts) -> tuple:
    kept = []
    for p in parts:
        if p == ("const", True):
            continue
        if p[0] == "and":
            kept.extend(p[1])
        else:
            kept.append(p)
    if not kept:
        return ("const", True)
    if len(kept) == 1:
        return kept[0]
    return ("and", tuple(kept))


def or_of(parts) -> tuple:
    kept = []
    for p in parts:
        if p[0] == "or":
            kept.extend(p[1])
        else:
            kept.append(p)
    if len(kept) == 1:
        return kept[0]
    return ("or", tuple(kept))


def evaluate_structure(s: tuple, test: Callable[[int], bool]) -> bool:
    """Short-circuit evaluation; `test` is called once per reached
    condition, in evaluation order."""
    tag = s[0]
    if tag == "const":
        return s[1]
    if tag == "cond":
        return bool(test(s[1]))
    if tag == "not":
        return not evaluate_structure(s[1], test)
    if tag == "and":
        for c in s[1]:
            if not evaluate_structure(c, test):
                return False
        return True
    if tag == "or":
        for c in s[1]:
            if evaluate_structure(c, test):
                return True
        return False
    raise AssertionError(s)


def structure_condition_order(s: tuple) -> list[int]:
    """Condition indices in evaluation order."""
    out: list[int] = []

    def walk(n):
        tag = n[0]
        if tag == "cond":
            out.append(n[1])
        elif tag == "not":
            walk(n[1])
        elif tag in ("and", "or"):
            for c in n[1]:
                walk(c)

    walk(s)
    return out


def structure_json(s: tuple):
    tag = s[0]
    if tag in ("const", "cond"):
        return [tag, s[1]]
    if tag == "not":
        return ["not", structure_json(s[1])]
    return [tag] + [structure_json(c) for c in s[1]]


# ── Conditions and decisions ─────────────────────────────────────


@dataclass
class Condition:
    """One atomic test of a decision.

    Pattern conditions test the value reached by `path` from the
    scrutinee: membership in `space`, or a length relation for
    SliceLenCheck. Boolean conditions hold their source expression."""

    index: int
    kind: str
    span: SourceSpan
    description: str
    const_exempt: bool = False
    # pattern conditions
    path: Optional[tuple] = None
    space: Optional[VS.Space] = None
    sub_ty: Optional[T.Type] = None
    variant: Optional[str] = None
    len_op: Optional[str] = None  # '==' | '>='
    len_val: Optional[int] = None
    # boolean conditions
    expr: Optional[N.Expr] = None
    nested_decision: Optional[str] = None
    fixed_value: Optional[bool] = None  # known value of a const-exempt leaf

    def test_value(self, scrutinee: V.Value) -> bool:
        """Apply this pattern condition to a scrutinee value."""
        v = sub_value(scrutinee, self.path)
        if self.kind == "SliceLenCheck":
            n = len(v.elems)  # type: ignore[union-attr]
            return n == self.len_val if self.len_op == "==" else n >= self.len_val
        return self.space.contains(v)  # type: ignore[union-attr]

    def to_json(self) -> dict:
        out = {
            "index": self.index,
            "kind": self.kind,
            "span": str(self.span),
            "description": self.description,
            "const_exempt": self.const_exempt,
        }
        if self.path is not None:
            out["path"] = [list(step) for step in self.path]
        if self.variant is not None:
            out["variant"] = self.variant
        if self.len_op is not None:
            out["len"] = f"{self.len_op} {self.len_val}"
        if self.nested_decision is not None:
            out["nested_decision"] = self.nested_decision
        return out


def sub_value(v: V.Value, path: Optional[tuple]) -> V.Value:
    """Follow a condition path into a value. References are transparent."""
    v = V.deref(v)
    for step in path or ():
        if step[0] in ("tuple", "elem"):
            v = v.elems[step[1]]  # type: ignore[union-attr]
        elif step[0] == "field":
            v = v.field(step[1])  # type: ignore[union-attr]
        elif step[0] == "payload":
            v = v.payload[step[2]]  # type: ignore[union-attr]
        else:
            raise AssertionError(step)
        v = V.deref(v)
    return v


@dataclass
class Decision:
    id: str
    origin: str
    span: SourceSpan
    fn_name: str
    conditions: list[Condition]
    structure: tuple
    text: str
    kind: str = "boolean"  # 'pattern' | 'boolean'
    pruned: bool = False
    node: object = None  # AST anchor: MatchArm | IfLetExpr | LetElseStmt | Expr

    def evaluate(self, test: Callable[[int], bool]) -> tuple[bool, dict[int, bool]]:
        """Evaluate the structure; returns (outcome, {index: value}) for
        the conditions actually reached."""
        recorded: dict[int, bool] = {}

        def probe(i: int) -> bool:
            val = bool(test(i))
            recorded[i] = val
            return val

        return evaluate_structure(self.structure, probe), recorded

    def fully_exempt(self) -> bool:
        return all(c.const_exempt for c in self.conditions)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "fn": self.fn_name,
            "origin": self.origin,
            "kind": self.kind,
            "span": str(self.span),
            "text": self.text,
            "pruned": self.pruned,
            "conditions": [c.to_json() for c in self.conditions],
            "structure": structure_json(self.structure),
        }


class DecisionSet:
    """All decisions of a program, in extraction order (nested before
    enclosing), with an identity map from AST anchor to decision."""

    def __init__(self) -> None:
        self.decisions: list[Decision] = []
        self.by_id: dict[str, Decision] = {}
        self.by_node: dict[int, Decision] = {}

    def add(self, d: Decision) -> None:
        self.decisions.append(d)
        self.by_id[d.id] = d
        self.by_node[id(d.node)] = d

    def active(self, strict_arms: bool = False) -> list[Decision]:
        if strict_arms:
            return list(self.decisions)
        return [d for d in self.decisions if not d.pruned]

    def to_json(self) -> dict:
        return {"decisions": [d.to_json() for d in self.decisions]}


# ── Pattern lowering ─────────────────────────────────────────────


def lower_pattern(
    p: N.Pattern,
    ty: T.Type,
    env: T.TypeEnv,
    slice_rule: str = "verbatim",
    subject: str = "value",
) -> tuple[list[Condition], tuple, list[int]]:
    """Lower a refutable pattern to (conditions, structure, plan).

    Conditions appear one per directly refutable sub-pattern in
    evaluation order: a slice pattern against a dynamic slice leads
    with its length check, then depth-first left to right. The plan is
    that order; the structure is the And over the tree with or-patterns
    as Or nodes. Raises NotADecision for irrefutable patterns."""
    if R.classify_pattern(p, ty, env, slice_rule) is R.IRR:
        raise NotADecision(f"pattern `{render_pattern(p)}` is irrefutable", p.span)
    lower = _Lowering(env, slice_rule, subject)
    structure = lower.lower(p, ty, ())
    plan = structure_condition_order(structure)
    return lower.conds, structure, plan


class _Lowering:
    def __init__(self, env: T.TypeEnv, slice_rule: str, subject: str) -> None:
        self.env = env
        self.slice_rule = slice_rule
        self.subject = subject
        self.conds: list[Condition] = []

    def _loc(self, path: tuple) -> str:
        out = self.subject
        for step in path:
            if step[0] in ("tuple", "field"):
                out += f".{step[1]}"
            elif step[0] == "elem":
                out += f"[{step[1]}]"
            elif step[0] == "payload":
                out += f" as {step[1]}.{step[2]}"
        return out

    def _add(self, **kw) -> tuple:
        cond = Condition(index=len(self.conds), **kw)
        self.conds.append(cond)
        return ("cond", cond.index)

    def lower(self, p: N.Pattern, ty: T.Type, path: tuple) -> tuple:
        ty = T.strip_refs(ty)

        if isinstance(p, (N.WildcardPat, N.RestPat)):
            return ("const", True)
        if isinstance(p, N.IdentPat):
            if p.sub is not None:
                return self.lower(p.sub, ty, path)
            return ("const", True)
        if isinstance(p, (N.RefPat, N.GroupPat)):
            return self.lower(p.inner, ty, path)
        if isinstance(p, N.NameRefPat):
            if p.resolution in (None, "binding"):
                return ("const", True)
            if p.resolution == "const":
                info = self.env.consts[p.name]
                return self._add(
                    kind="ConstEq",
                    span=p.span,
                    description=f"{self._loc(path)} == {p.name}",
                    path=path,
                    space=VS.space_of_value(info.value, self.env),
                    sub_ty=ty,
                )
            if p.resolution == "variant":
                return self._discriminant(p, ty, path, p.name)
            return ("const", True)  # unit struct: nothing to test
        if isinstance(p, N.PathPat):
            if p.resolution == "variant":
                return self._discriminant(p, ty, path, p.path[-1])
            return ("const", True)
        if isinstance(p, N.LiteralPat):
            return self._add(
                kind="LiteralEq",
                span=p.span,
                description=f"{self._loc(path)} == {render_pattern(p)}",
                path=path,
                space=R.pattern_denotation(p, ty, self.env),
                sub_ty=ty,
            )
        if isinstance(p, N.RangePat):
            if p.refutability is R.IRR:
                return ("const", True)  # covers the whole domain
            return self._add(
                kind="RangeMembership",
                span=p.span,
                description=f"{self._loc(path)} in {render_pattern(p)}",
                path=path,
                space=R.pattern_denotation(p, ty, self.env),
                sub_ty=ty,
            )
        if isinstance(p, N.TuplePat):
            assert isinstance(ty, T.TupleType)
            parts = self._sequence(
                p.elems, list(ty.elems), lambda i: path + (("tuple", i),)
            )
            return and_of(parts)
        if isinstance(p, N.StructPat):
            target = R.resolve_struct_path(p.path, ty, self.env, p.span)
            if target[0] == "struct":
                info = target[1]
                declared = dict(zip(info.field_names, info.field_types))
                parts = [
                    self.lower(f.pat, declared[f.name], path + (("field", f.name),))
                    for f in p.fields
                    if f.pat is not None
                ]
                return and_of(parts)
            _, einfo, var = target
            parts = []
            if len(einfo.variants) > 1:
                parts.append(self._discriminant(p, ty, path, var.name))
            for f in p.fields:
                if f.pat is None:
                    continue
                idx = var.field_names.index(f.name)
                parts.append(
                    self.lower(
                        f.pat,
                        var.field_types[idx],
                        path + (("payload", var.name, idx),),
                    )
                )
            return and_of(parts)
        if isinstance(p, N.TupleStructPat):
            target = R.resolve_struct_path(p.path, ty, self.env, p.span)
            if target[0] == "struct":
                info = target[1]
                parts = self._sequence(
                    p.elems,
                    list(info.field_types),
                    lambda i: path + (("field", str(i)),),
                )
                return and_of(parts)
            _, einfo, var = target
            parts = []
            if len(einfo.variants) > 1:
                parts.append(self._discriminant(p, ty, path, var.name))
            parts.extend(
                self._sequence(
                    p.elems,
                    list(var.field_types),
                    lambda i: path + (("payload", var.name, i),),
                )
            )
            return and_of(parts)
        if isinstance(p, N.SlicePat):
            if isinstance(ty, T.ArrayType):
                parts = self._sequence(
                    p.elems,
                    [ty.elem] * ty.length,
                    lambda i: path + (("elem", i),),
                )
                return and_of(parts)
            assert isinstance(ty, T.SliceType)
            return self._lower_slice(p, ty, path)
        if isinstance(p, N.OrPat):
            return or_of([self.lower(a, ty, path) for a in p.alts])
        raise AssertionError(f"unknown pattern {p!r}")

    def _discriminant(self, p: N.Pattern, ty: T.Type, path: tuple, variant: str) -> tuple:
        assert isinstance(ty, T.EnumType)
        info = self.env.enums[ty.name]
        if len(info.variants) <= 1:
            return ("const", True)
        variants = {}
        for v in info.variants:
            if v.name == variant:
                variants[v.name] = VS.top_product(tuple(v.field_types), self.env)
            else:
                variants[v.name] = VS.ProductSpace(len(v.field_types), [])
        return self._add(
            kind="DiscriminantCheck",
            span=p.span,
            description=f"{self._loc(path)} is {variant}",
            path=path,
            space=VS.EnumSpace(ty.name, variants),
            sub_ty=ty,
            variant=variant,
        )

    def _sequence(self, elems, types, step) -> list[tuple]:
        before, rest, after = R.split_rest(elems, None)
        n = len(types)
        parts = []
        for i, elem in enumerate(before):
            parts.append(self.lower(elem, types[i], step(i)))
        for j, elem in enumerate(after):
            i = n - len(after) + j
            parts.append(self.lower(elem, types[i], step(i)))
        return parts

    def _lower_slice(self, p: N.SlicePat, ty: T.SliceType, path: tuple) -> tuple:
        before, rest, after = R.split_rest(p.elems, p.span)
        width = len(before) + len(after)
        parts: list[tuple] = []
        total = rest is not None and width == 0
        # The length test leads. Under the verbatim rule `[..]` is
        # directly refutable, so it honestly gets its (tautological)
        # len >= 0 condition; the corrected rule drops it.
        if self.slice_rule == "verbatim" or not total:
            op = ">=" if rest is not None else "=="
            parts.append(
                self._add(
                    kind="SliceLenCheck",
                    span=p.span,
                    description=f"{self._loc(path)}.len() {op} {width}",
                    path=path,
                    len_op=op,
                    len_val=width,
                )
            )
        for i, elem in enumerate(before):
            parts.append(self.lower(elem, ty.elem, path + (("elem", i),)))
        # the checker enforces trailing rest for dynamic slices
        return and_of(parts)


# ── `?` desugaring ───────────────────────────────────────────────


def desugar_question_marks(prog: N.Program, env: T.TypeEnv) -> int:
    """Rewrite every `expr?` into its two-arm match:

        match expr { Some(inner) => inner, None => return None }

    (Ok/Err for results). Returns the number of rewrites; when nonzero
    the program must be re-checked to annotate the inserted nodes."""
    count = 0

    def transform(e: N.Expr) -> N.Expr:
        nonlocal count
        _transform_children(e, transform, transform_block)
        if isinstance(e, N.QuestionMarkExpr):
            count += 1
            return _question_mark_match(e, env)
        return e

    def transform_block(b: N.Block) -> None:
        for s in b.stmts:
            if isinstance(s, (N.LetStmt, N.LetElseStmt)):
                s.init = transform(s.init)
                if isinstance(s, N.LetElseStmt):
                    transform_block(s.else_block)
            elif isinstance(s, N.AssignStmt):
                s.value = transform(s.value)
            elif isinstance(s, N.ExprStmt):
                s.expr = transform(s.expr)
            elif isinstance(s, N.WhileStmt):
                s.cond = transform(s.cond)
                transform_block(s.body)
        if b.tail is not None:
            b.tail = transform(b.tail)

    for fn in prog.functions():
        transform_block(fn.body)
    return count


def _question_mark_match(e: N.QuestionMarkExpr, env: T.TypeEnv) -> N.MatchExpr:
    sp = e.span
    info = env.enum_info(T.strip_refs(e.inner.ty))
    assert info is not None and info.builtin is not None
    if info.builtin == "option":
        ok_pat = N.TupleStructPat(sp, path=["Some"], elems=[N.IdentPat(sp, name="__qm")])
        ok_body: N.Expr = N.PathExpr(sp, path=["__qm"])
        fail_pat: N.Pattern = N.NameRefPat(sp, name="None")
        fail_body: N.Expr = N.ReturnExpr(sp, value=N.PathExpr(sp, path=["None"]))
    else:
        ok_pat = N.TupleStructPat(sp, path=["Ok"], elems=[N.IdentPat(sp, name="__qm")])
        ok_body = N.PathExpr(sp, path=["__qm"])
        fail_pat = N.TupleStructPat(
            sp, path=["Err"], elems=[N.IdentPat(sp, name="__qm_err")]
        )
        fail_body = N.ReturnExpr(
            sp,
            value=N.CallExpr(
                sp,
                callee=N.PathExpr(sp, path=["Err"]),
                args=[N.PathExpr(sp, path=["__qm_err"])],
            ),
        )
    return N.MatchExpr(
        sp,
        scrutinee=e.inner,
        arms=[
            N.MatchArm(pat=ok_pat, guard=None, body=ok_body, span=sp),
            N.MatchArm(pat=fail_pat, guard=None, body=fail_body, span=sp),
        ],
        from_question_mark=True,
    )


def _transform_children(e: N.Expr, f, f_block) -> None:
    if isinstance(e, N.CallExpr):
        e.args = [f(a) for a in e.args]
    elif isinstance(e, N.StructExpr):
        e.fields = [(n, f(x)) for n, x in e.fields]
    elif isinstance(e, (N.TupleExpr, N.ArrayExpr)):
        e.elems = [f(x) for x in e.elems]
    elif isinstance(e, N.RefExpr):
        e.inner = f(e.inner)
    elif isinstance(e, N.UnaryExpr):
        e.operand = f(e.operand)
    elif isinstance(e, N.BinaryExpr):
        e.lhs = f(e.lhs)
        e.rhs = f(e.rhs)
    elif isinstance(e, (N.FieldExpr, N.IndexExpr)):
        e.base = f(e.base)
        if isinstance(e, N.IndexExpr):
            e.index = f(e.index)
    elif isinstance(e, N.BlockExpr):
        f_block(e.block)
    elif isinstance(e, N.IfExpr):
        e.cond = f(e.cond)
        f_block(e.then)
        _transform_else(e, f, f_block)
    elif isinstance(e, N.IfLetExpr):
        e.scrutinee = f(e.scrutinee)
        f_block(e.then)
        _transform_else(e, f, f_block)
    elif isinstance(e, N.MatchExpr):
        e.scrutinee = f(e.scrutinee)
        for arm in e.arms:
            if arm.guard is not None:
                arm.guard = f(arm.guard)
            arm.body = f(arm.body)
    elif isinstance(e, N.QuestionMarkExpr):
        e.inner = f(e.inner)
    elif isinstance(e, N.ReturnExpr):
        if e.value is not None:
            e.value = f(e.value)


def _transform_else(e, f, f_block) -> None:
    if e.else_ is None:
        return
    if isinstance(e.else_, (N.IfExpr, N.IfLetExpr)):
        e.else_ = f(e.else_)
    else:
        f_block(e.else_)


# ── Decision extraction ──────────────────────────────────────────


def extract_decisions(
    prog: N.Program, env: T.TypeEnv, slice_rule: str = "verbatim"
) -> DecisionSet:
    """All decisions of a checked (and `?`-desugared) program, ids in
    extraction order: nested decisions before the decision that
    references them, otherwise source order."""
    ex = _Extractor(env, slice_rule)
    for fn in prog.functions():
        ex.walk_block(fn.body, fn.name)
    apply_const_exemption(ex.ds, env)
    return ex.ds


class _Extractor:
    def __init__(self, env: T.TypeEnv, slice_rule: str) -> None:
        self.env = env
        self.slice_rule = slice_rule
        self.ds = DecisionSet()

    def _next_id(self) -> str:
        return f"d{len(self.ds.decisions)}"

    # — statements —

    def walk_block(self, b: N.Block, fn: str) -> None:
        for s in b.stmts:
            self.walk_stmt(s, fn)
        if b.tail is not None:
            self.value_expr(b.tail, fn)

    def walk_stmt(self, s: N.Stmt, fn: str) -> None:
        if isinstance(s, N.LetStmt):
            self.value_expr(s.init, fn)
        elif isinstance(s, N.LetElseStmt):
            self.value_expr(s.init, fn)
            self.pattern_decision(
                s.pat, "LetElse", s, _short(render_expr(s.init)), fn
            )
            self.walk_block(s.else_block, fn)
        elif isinstance(s, N.AssignStmt):
            self.value_expr(s.value, fn)
        elif isinstance(s, N.ExprStmt):
            self.value_expr(s.expr, fn)
        elif isinstance(s, N.WhileStmt):
            self.make_decision(s.cond, "BooleanExpr", fn)
            self.walk_block(s.body, fn)

    # — expressions in value position —

    def value_expr(self, e: Optional[N.Expr], fn: str) -> None:
        if e is None:
            return
        if _skeleton_has_binop(e):
            self.make_decision(e, "BooleanExpr", fn)
            return
        if isinstance(e, N.IfExpr):
            self.make_decision(e.cond, "BooleanExpr", fn)
            self.walk_block(e.then, fn)
            self._else(e.else_, fn)
            return
        if isinstance(e, N.IfLetExpr):
            self.value_expr(e.scrutinee, fn)
            self.pattern_decision(
                e.pat, "IfLet", e, _short(render_expr(e.scrutinee)), fn
            )
            self.walk_block(e.then, fn)
            self._else(e.else_, fn)
            return
        if isinstance(e, N.MatchExpr):
            self.value_expr(e.scrutinee, fn)
            origin = "QuestionMark" if e.from_question_mark else "MatchArm"
            subject = _short(render_expr(e.scrutinee))
            for arm in e.arms:
                self.pattern_decision(
                    arm.pat, origin, arm, subject, fn, pruned=arm.pruned
                )
                if arm.guard is not None:
                    self.make_decision(arm.guard, "Guard", fn)
                self.value_expr(arm.body, fn)
            return
        if isinstance(e, N.BlockExpr):
            self.walk_block(e.block, fn)
            return
        for child in _children_exprs(e):
            self.value_expr(child, fn)

    def _else(self, else_, fn: str) -> None:
        if else_ is None:
            return
        if isinstance(else_, (N.IfExpr, N.IfLetExpr)):
            self.value_expr(else_, fn)
        else:
            self.walk_block(else_, fn)

    # — decisions —

    def pattern_decision(
        self,
        pat: N.Pattern,
        origin: str,
        node: object,
        subject: str,
        fn: str,
        pruned: bool = False,
    ) -> Optional[Decision]:
        try:
            conds, structure, _plan = lower_pattern(
                pat, pat.ty, self.env, self.slice_rule, subject=subject
            )
        except NotADecision:
            return None
        d = Decision(
            id=self._next_id(),
            origin=origin,
            span=pat.span,
            fn_name=fn,
            conditions=conds,
            structure=structure,
            text=render_pattern(pat),
            kind="pattern",
            pruned=pruned,
            node=node,
        )
        self.ds.add(d)
        return d

    def make_decision(self, e: N.Expr, origin: str, fn: str) -> Decision:
        """Build a boolean decision from an expression: split on the
        `&&`/`||` skeleton, hoist nested constructs out of the atoms,
        then register the decision itself (after its nested ones)."""
        atoms: list[N.Expr] = []
        structure = _build_skeleton(e, atoms)
        conds: list[Condition] = []
        for i, atom in enumerate(atoms):
            nested_id = self._hoist_atom(atom, fn)
            if nested_id is not None:
                kind = "NestedDecisionResult"
            else:
                kind = "BooleanLeaf"
            conds.append(
                Condition(
                    index=i,
                    kind=kind,
                    span=atom.span,
                    description=_short(render_expr(atom), 60),
                    const_exempt=False,
                    expr=atom,
                    nested_decision=nested_id,
                )
            )
        d = Decision(
            id=self._next_id(),
            origin=origin,
            span=e.span,
            fn_name=fn,
            conditions=conds,
            structure=structure,
            text=_short(render_expr(e), 80),
            kind="boolean",
            node=e,
        )
        self.ds.add(d)
        return d

    def _hoist_atom(self, atom: N.Expr, fn: str) -> Optional[str]:
        """Extract decisions nested inside a condition atom. Returns the
        id of the first one (the atom becomes a NestedDecisionResult),
        or None when the atom contains no decisions."""
        before = len(self.ds.decisions)
        if isinstance(atom, (N.IfExpr, N.IfLetExpr, N.MatchExpr, N.BlockExpr)):
            self.value_expr(atom, fn)
        else:
            for child in _children_exprs(atom):
                self.value_expr(child, fn)
        if len(self.ds.decisions) > before:
            return self.ds.decisions[before].id
        return None


def _skeleton_has_binop(e: N.Expr) -> bool:
    if isinstance(e, N.BinaryExpr) and e.op in ("&&", "||"):
        return True
    if isinstance(e, N.UnaryExpr) and e.op == "!":
        return _skeleton_has_binop(e.operand)
    return False


def _build_skeleton(e: N.Expr, atoms: list[N.Expr]) -> tuple:
    """Decompose a boolean expression into its condition skeleton.
    `!` folds into the atom unless its operand contains `&&`/`||`."""
    if isinstance(e, N.BinaryExpr) and e.op in ("&&", "||"):
        lhs = _build_skeleton(e.lhs, atoms)
        rhs = _build_skeleton(e.rhs, atoms)
        return and_of([lhs, rhs]) if e.op == "&&" else or_of([lhs, rhs])
    if isinstance(e, N.UnaryExpr) and e.op == "!" and _skeleton_has_binop(e.operand):
        return ("not", _build_skeleton(e.operand, atoms))
    atoms.append(e)
    return ("cond", len(atoms) - 1)


def _children_exprs(e: N.Expr) -> list[N.Expr]:
    if isinstance(e, N.CallExpr):
        return list(e.args)
    if isinstance(e, N.StructExpr):
        return [x for _, x in e.fields]
    if isinstance(e, (N.TupleExpr, N.ArrayExpr)):
        return list(e.elems)
    if isinstance(e, N.RefExpr):
        return [e.inner]
    if isinstance(e, N.UnaryExpr):
        return [e.operand]
    if isinstance(e, N.BinaryExpr):
        return [e.lhs, e.rhs]
    if isinstance(e, N.FieldExpr):
        return [e.base]
    if isinstance(e, N.IndexExpr):
        return [e.base, e.index]
    if isinstance(e, N.ReturnExpr):
        return [e.value] if e.value is not None else []
    if isinstance(e, N.QuestionMarkExpr):
        return [e.inner]
    return []


def _short(text: str, limit: int = 40) -> str:
    text = " ".join(text.split())
    if len(text) <= limit:
        return text
    return text[: limit - 1] + "…"


# ── Const exemption ──────────────────────────────────────────────


def apply_const_exemption(ds: DecisionSet, env: T.TypeEnv) -> DecisionSet:
    """Flag BooleanLeaf conditions built only from literals and consts.
    Statics and let bindings are runtime state, so they never qualify.
    Exempt conditions also get their (fixed) value, so vector suggestion
    can mark the opposite polarity infeasible. Only annotations change;
    structure and outcomes are untouched."""
    for d in ds.decisions:
        for c in d.conditions:
            if c.kind == "BooleanLeaf" and c.expr is not None:
                c.const_exempt = _is_const_expr(c.expr)
                if c.const_exempt:
                    try:
                        v = V.deref(const_expr_value(c.expr, env))
                    except RpsError:  # e.g. a constant that always overflows
                        continue
                    if isinstance(v, V.BoolVal):
                        c.fixed_value = v.value
    return ds


def const_expr_value(e: N.Expr, env: T.TypeEnv) -> V.Value:
    """Evaluate an expression made of literals, consts, operators and
    constructors. Callers must have established const-ness first."""
    if isinstance(e, N.LitExpr):
        if e.lit_kind == "int":
            base = T.strip_refs(e.ty)
            name = base.name if isinstance(base, T.IntType) else "i32"
            return V.IntVal(int(e.value), name)  # type: ignore[arg-type]
        if e.lit_kind == "bool":
            return V.BoolVal(bool(e.value))
        if e.lit_kind == "char":
            return V.CharVal(str(e.value))
        return V.StrVal(str(e.value))
    if isinstance(e, N.PathExpr):
        if e.resolution == "const":
            return env.consts[e.path[-1]].value
        if e.resolution == "unit_struct":
            return V.StructVal(e.path[-1], ())
        info = env.enums[e.enum_name]
        vi = info.variant(e.path[-1])
        return V.EnumVal(e.enum_name, e.path[-1], (), tuple(vi.field_names))
    if isinstance(e, N.UnaryExpr):
        return V.apply_unary(e.op, const_expr_value(e.operand, env), e.span, const=True)
    if isinstance(e, N.BinaryExpr):
        a = const_expr_value(e.lhs, env)
        b = const_expr_value(e.rhs, env)
        return V.apply_binary(e.op, a, b, e.span, const=True)
    if isinstance(e, N.TupleExpr):
        return V.TupleVal(tuple(const_expr_value(x, env) for x in e.elems))
    if isinstance(e, N.ArrayExpr):
        return V.ArrayVal(tuple(const_expr_value(x, env) for x in e.elems))
    if isinstance(e, N.RefExpr):
        inner = const_expr_value(e.inner, env)
        ity = T.strip_refs(e.ty)
        if isinstance(ity, T.SliceType) and isinstance(inner, V.ArrayVal):
            inner = V.SliceVal(inner.elems)
        return V.RefVal(inner)
    if isinstance(e, N.FieldExpr):
        base = V.deref(const_expr_value(e.base, env))
        if isinstance(base, V.TupleVal):
            return base.elems[int(e.name)]
        assert isinstance(base, V.StructVal)
        return base.field(e.name)
    if isinstance(e, N.IndexExpr):
        base = V.deref(const_expr_value(e.base, env))
        idx = V.deref(const_expr_value(e.index, env))
        assert isinstance(base, (V.ArrayVal, V.SliceVal)) and isinstance(idx, V.IntVal)
        return base.elems[idx.value]
    if isinstance(e, N.CallExpr):
        args = tuple(const_expr_value(a, env) for a in e.args)
        if e.call_kind == "variant":
            info = env.enums[e.enum_name]
            name = e.callee.path[-1]
            vi = info.variant(name)
            return V.EnumVal(e.enum_name, name, args, tuple(vi.field_names))
        return V.StructVal(
            e.callee.path[-1], tuple((str(i), a) for i, a in enumerate(args))
        )
    if isinstance(e, N.StructExpr):
        vals = {n: const_expr_value(x, env) for n, x in e.fields}
        ety = T.strip_refs(e.ty)
        if isinstance(ety, T.EnumType):
            info = env.enums[ety.name]
            vi = info.variant(e.path[-1])
            return V.EnumVal(
                ety.name,
                e.path[-1],
                tuple(vals[n] for n in vi.field_names),
                tuple(vi.field_names),
            )
        sinfo = env.structs[e.path[-1]]
        return V.StructVal(sinfo.name, tuple((n, vals[n]) for n in sinfo.field_names))
    raise AssertionError(f"not a constant expression: {e!r}")


_CONST_OK = (
    N.LitExpr,
    N.UnaryExpr,
    N.BinaryExpr,
    N.TupleExpr,
    N.ArrayExpr,
    N.RefExpr,
    N.FieldExpr,
    N.IndexExpr,
)


def _is_const_expr(e: N.Expr) -> bool:
    for node in C.walk_nodes(e):
        if isinstance(node, N.PathExpr):
            if node.resolution not in ("const", "variant", "unit_struct"):
                return False
        elif isinstance(node, N.CallExpr):
            if node.call_kind not in ("variant", "tuple_struct"):
                return False
        elif isinstance(node, N.StructExpr):
            continue
        elif not isinstance(node, _CONST_OK):
            return False
    return True


# ── Contextual pruning (standalone recomputation) ────────────────


def contextual_prune(m: N.MatchExpr, env: T.TypeEnv) -> list[bool]:
    """Per-arm flags: True when the arm cannot fail once reached (its
    denotation covers everything earlier guard-free arms left over).
    Guarded arms are never flagged; they consume nothing either."""
    scr_ty = T.strip_refs(m.scrutinee.ty)
    remaining = VS.value_space_of(scr_ty, env)
    flags = []
    for arm in m.arms:
        denot = R.pattern_denotation(arm.pat, scr_ty, env)
        if arm.guard is None:
            flags.append(VS.space_is_subset(remaining, denot))
            remaining = VS.space_subtract(remaining, denot)
        else:
            flags.append(False)
    return flags


# ── Coverage units ───────────────────────────────────────────────


@dataclass
class Unit:
    id: str
    kind: str  # 'entry' | 'exit' | 'statement' | 'arm_body' | 'block_tail'
    span: SourceSpan
    fn_name: str

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "span": str(self.span),
            "fn": self.fn_name,
        }


class UnitSet:
    """The countable execution units of a program: entries, exits,
    statements, match-arm bodies, and block tail expressions. Exits are
    one per `return` plus an implicit one for functions that can finish
    normally."""

    def __init__(self) -> None:
        self.units: list[Unit] = []
        self.entry_of: dict[str, Unit] = {}
        self.implicit_exit_of: dict[str, Unit] = {}
        self.by_stmt: dict[int, Unit] = {}
        self.by_return: dict[int, Unit] = {}
        self.by_tail: dict[int, Unit] = {}
        self.by_arm: dict[int, Unit] = {}

    def _new(self, kind: str, span: SourceSpan, fn: str) -> Unit:
        u = Unit(f"s{len(self.units)}", kind, span, fn)
        self.units.append(u)
        return u

    def statementlike(self) -> list[Unit]:
        return [
            u for u in self.units if u.kind in ("statement", "arm_body", "block_tail")
        ]

    def entries_exits(self) -> list[Unit]:
        return [u for u in self.units if u.kind in ("entry", "exit")]

    def to_json(self) -> dict:
        return {"units": [u.to_json() for u in self.units]}


def collect_units(prog: N.Program) -> UnitSet:
    us = UnitSet()
    for fn in prog.functions():
        us.entry_of[fn.name] = us._new("entry", fn.span, fn.name)
        _units_block(fn.body, fn.name, us)
        if not isinstance(fn.body.ty, T.NeverType):
            us.implicit_exit_of[fn.name] = us._new("exit", fn.body.span, fn.name)
    return us


def _units_block(b: N.Block, fn: str, us: UnitSet) -> None:
    for s in b.stmts:
        us.by_stmt[id(s)] = us._new("statement", s.span, fn)
        if isinstance(s, (N.LetStmt, N.LetElseStmt)):
            _units_expr(s.init, fn, us)
            if isinstance(s, N.LetElseStmt):
                _units_block(s.else_block, fn, us)
        elif isinstance(s, N.AssignStmt):
            _units_expr(s.value, fn, us)
        elif isinstance(s, N.ExprStmt):
            _units_expr(s.expr, fn, us)
        elif isinstance(s, N.WhileStmt):
            _units_expr(s.cond, fn, us)
            _units_block(s.body, fn, us)
    if b.tail is not None:
        us.by_tail[id(b.tail)] = us._new("block_tail", b.tail.span, fn)
        _units_expr(b.tail, fn, us)


def _units_expr(e: N.Expr, fn: str, us: UnitSet) -> None:
    if isinstance(e, N.ReturnExpr):
        us.by_return[id(e)] = us._new("exit", e.span, fn)
        if e.value is not None:
            _units_expr(e.value, fn, us)
        return
    if isinstance(e, N.MatchExpr):
        _units_expr(e.scrutinee, fn, us)
        for arm in e.arms:
            us.by_arm[id(arm)] = us._new("arm_body", arm.body.span, fn)
            if arm.guard is not None:
                _units_expr(arm.guard, fn, us)
            _units_expr(arm.body, fn, us)
        return
    if isinstance(e, N.IfExpr):
        _units_expr(e.cond, fn, us)
        _units_block(e.then, fn, us)
        _units_else(e.else_, fn, us)
        return
    if isinstance(e, N.IfLetExpr):
        _units_expr(e.scrutinee, fn, us)
        _units_block(e.then, fn, us)
        _units_else(e.else_, fn, us)
        return
    if isinstance(e, N.BlockExpr):
        _units_block(e.block, fn, us)
        return
    for child in _children_exprs(e):
        _units_expr(child, fn, us)


def _units_else(else_, fn: str, us: UnitSet) -> None:
    if else_ is None:
        return
    if isinstance(else_, (N.IfExpr, N.IfLetExpr)):
        _units_expr(else_, fn, us)
    else:
        _units_block(else_, fn, us)


# ── Analysis pipeline ────────────────────────────────────────────


def analyze_program(
    prog: N.Program, slice_rule: str = "verbatim"
) -> tuple[N.Program, T.TypeEnv, DecisionSet, UnitSet]:
    """Check a parsed program, desugar `?`, and extract decisions and units."""
    env = C.check_program(prog, slice_rule)
    if desugar_question_marks(prog, env):
        env = C.check_program(prog, slice_rule)
    ds = extract_decisions(prog, env, slice_rule)
    units = collect_units(prog)
    return prog, env, ds, units


def analyze_source(
    src: str, file: str = "<input>", slice_rule: str = "verbatim"
) -> tuple[N.Program, T.TypeEnv, DecisionSet, UnitSet]:
    """Parse, check, desugar `?`, and extract decisions and units."""
    return analyze_program(parse_program(src, file), slice_rule)
