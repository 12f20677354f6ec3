"""Deterministic tree-walking interpreter with coverage instrumentation.

Runs a checked (and `?`-desugared) program. When given a decision set,
a unit inventory and a trace, it records one evaluation vector per
decision evaluation — condition values in short-circuit order, `-` for
conditions never reached — and marks every executed coverage unit.
Instrumentation only observes; the program's behavior is identical
with or without it.

The decision and unit inventories are taken as plain objects (anything
with the same shape works), so this module stays independent of the
analysis passes. Execution is bounded by a fuel budget (one tick per
expression or statement); it defaults to the MCDC_FUEL environment
variable, or ten million ticks.

`matches_pattern` is the reference matcher: a direct structural walk
that knows nothing about value spaces, usable on its own as an oracle
against the denotation algebra.
"""

from __future__ import annotations

import os
from typing import Optional

from rpscov import nodes as N
from rpscov import types as T
from rpscov import values as V
from rpscov.errors import EvalError, FuelExhausted, Panic

DEFAULT_FUEL = 10_000_000

UNIT = V.TupleVal(())


class ReturnSignal(Exception):
    def __init__(self, value: V.Value) -> None:
        self.value = value


def default_fuel() -> int:
    raw = os.environ.get("MCDC_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        return int(raw)
    except ValueError:
        raise EvalError(f"MCDC_FUEL must be an integer, got {raw!r}") from None


# ── Pattern matching ─────────────────────────────────────────────


def matches_pattern(p: N.Pattern, v: V.Value, env: T.TypeEnv) -> Optional[dict]:
    """Match a value against a pattern; the bindings on success, None on
    failure. References are transparent on both sides."""
    binds: dict[str, V.Value] = {}
    if _match(p, v, env, binds):
        return binds
    return None


def _match(p: N.Pattern, v: V.Value, env: T.TypeEnv, binds: dict) -> bool:
    v = V.deref(v)
    if isinstance(p, N.WildcardPat):
        return True
    if isinstance(p, N.RestPat):
        return True
    if isinstance(p, N.IdentPat):
        if p.sub is not None and not _match(p.sub, v, env, binds):
            return False
        binds[p.name] = v
        return True
    if isinstance(p, N.NameRefPat):
        if p.resolution in (None, "binding"):
            binds[p.name] = v
            return True
        if p.resolution == "const":
            return V.values_equal(v, env.consts[p.name].value)
        if p.resolution == "variant":
            return isinstance(v, V.EnumVal) and v.variant == p.name
        return True  # unit struct
    if isinstance(p, N.PathPat):
        if p.resolution == "variant":
            return isinstance(v, V.EnumVal) and v.variant == p.path[-1]
        return True  # unit struct
    if isinstance(p, N.LiteralPat):
        return V.values_equal(v, _pattern_literal(p))
    if isinstance(p, N.RangePat):
        return _in_range(p, v)
    if isinstance(p, (N.RefPat, N.GroupPat)):
        return _match(p.inner, v, env, binds)
    if isinstance(p, N.TuplePat):
        assert isinstance(v, V.TupleVal)
        return _match_seq(p.elems, v.elems, env, binds)
    if isinstance(p, N.StructPat):
        if isinstance(v, V.EnumVal):
            if v.variant != p.path[-1]:
                return False
            by_name = dict(zip(v.field_names, v.payload))
        else:
            assert isinstance(v, V.StructVal)
            by_name = dict(v.fields)
        for f in p.fields:
            fv = by_name[f.name]
            if f.pat is None:
                binds[f.name] = V.deref(fv)
            elif not _match(f.pat, fv, env, binds):
                return False
        return True
    if isinstance(p, N.TupleStructPat):
        if isinstance(v, V.EnumVal):
            if v.variant != p.path[-1]:
                return False
            return _match_seq(p.elems, v.payload, env, binds)
        assert isinstance(v, V.StructVal)
        return _match_seq(p.elems, tuple(x for _, x in v.fields), env, binds)
    if isinstance(p, N.SlicePat):
        assert isinstance(v, (V.SliceVal, V.ArrayVal))
        return _match_seq(p.elems, v.elems, env, binds)
    if isinstance(p, N.OrPat):
        for alt in p.alts:
            trial: dict[str, V.Value] = {}
            if _match(alt, v, env, trial):
                binds.update(trial)
                return True
        return False
    raise AssertionError(f"unmatched pattern kind {p!r}")


def _is_rest(p: N.Pattern) -> bool:
    if isinstance(p, N.RestPat):
        return True
    return isinstance(p, N.IdentPat) and isinstance(p.sub, N.RestPat)


def _match_seq(elems, values, env: T.TypeEnv, binds: dict) -> bool:
    rest_at = next((i for i, e in enumerate(elems) if _is_rest(e)), None)
    if rest_at is None:
        if len(elems) != len(values):
            return False
        return all(_match(e, x, env, binds) for e, x in zip(elems, values))
    before, rest, after = elems[:rest_at], elems[rest_at], elems[rest_at + 1 :]
    if len(values) < len(before) + len(after):
        return False
    for e, x in zip(before, values[: len(before)]):
        if not _match(e, x, env, binds):
            return False
    tail = values[len(values) - len(after) :] if after else ()
    for e, x in zip(after, tail):
        if not _match(e, x, env, binds):
            return False
    if isinstance(rest, N.IdentPat):
        mid = tuple(values[len(before) : len(values) - len(after)])
        binds[rest.name] = V.SliceVal(tuple(V.deref(x) for x in mid))
    return True


def _pattern_literal(p: N.LiteralPat) -> V.Value:
    if p.lit_kind == "int":
        return V.IntVal(int(p.value))  # type: ignore[arg-type]
    if p.lit_kind == "bool":
        return V.BoolVal(bool(p.value))
    if p.lit_kind == "char":
        return V.CharVal(str(p.value))
    return V.StrVal(str(p.value))


def _in_range(p: N.RangePat, v: V.Value) -> bool:
    if isinstance(v, V.IntVal):
        k = v.value
        lo = int(p.lo) if p.lo is not None else None
        hi = int(p.hi) if p.hi is not None else None
    else:
        assert isinstance(v, V.CharVal)
        k = ord(v.value)
        lo = ord(str(p.lo)) if p.lo is not None else None
        hi = ord(str(p.hi)) if p.hi is not None else None
    if lo is not None and k < lo:
        return False
    if hi is not None:
        return k <= hi if p.inclusive else k < hi
    return True


# ── The interpreter ──────────────────────────────────────────────


class Interpreter:
    """One program run's worth of state: statics, output, fuel, and the
    optional instrumentation hooks. Create a fresh instance per test to
    keep runs independent."""

    def __init__(
        self,
        prog: N.Program,
        env: T.TypeEnv,
        decisions=None,
        units=None,
        trace=None,
        fuel: Optional[int] = None,
    ) -> None:
        self.prog = prog
        self.env = env
        self.by_node = decisions.by_node if decisions is not None else {}
        self.units = units
        self.trace = trace
        self.fuel = fuel if fuel is not None else default_fuel()
        self.fns = {f.name: f for f in prog.functions()}
        self.statics = {name: info.value for name, info in env.statics.items()}
        self.output: list[str] = []
        self.scopes: list[dict] = []
        self.current_fn: Optional[N.FnDef] = None

    @property
    def stdout(self) -> str:
        return "".join(self.output)

    # — instrumentation —

    def _burn(self, span) -> None:
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhausted("fuel exhausted; raise MCDC_FUEL to run longer", span)

    def _record_unit(self, unit) -> None:
        if unit is not None and self.trace is not None:
            self.trace.record_unit(unit.id)

    def _record_vector(self, d, outcome: bool, recorded: dict) -> None:
        if self.trace is None:
            return
        conds = []
        for i in range(len(d.conditions)):
            if i in recorded:
                conds.append("T" if recorded[i] else "F")
            else:
                conds.append("-")
        self.trace.record_vector(d.id, conds, outcome)

    def _pattern_outcome(self, node, scrutinee: V.Value) -> Optional[bool]:
        """Evaluate the pattern decision anchored at `node`, if any,
        recording its vector. None when the pattern is irrefutable.
        Contextually pruned arms are not decisions: evaluated for the
        matcher-agreement check but never recorded."""
        d = self.by_node.get(id(node))
        if d is None:
            return None
        outcome, recorded = d.evaluate(
            lambda i: d.conditions[i].test_value(scrutinee)
        )
        if not d.pruned:
            self._record_vector(d, outcome, recorded)
        return outcome

    # — entry points —

    def call(self, name: str, args: list[V.Value]) -> V.Value:
        fn = self.fns.get(name)
        if fn is None:
            raise EvalError(f"no function named {name!r}")
        if len(args) != len(fn.params):
            raise EvalError(
                f"{name} takes {len(fn.params)} argument(s), got {len(args)}"
            )
        if self.units is not None:
            self._record_unit(self.units.entry_of.get(name))
        saved_scopes, saved_fn = self.scopes, self.current_fn
        self.scopes = [{p.name: v for p, v in zip(fn.params, args)}]
        self.current_fn = fn
        try:
            try:
                result = self.eval_block(fn.body)
            except ReturnSignal as sig:
                return sig.value
            if self.units is not None:
                self._record_unit(self.units.implicit_exit_of.get(name))
            return result
        finally:
            self.scopes, self.current_fn = saved_scopes, saved_fn

    def run_main(self) -> V.Value:
        return self.call("main", [])

    # — scopes —

    def _lookup(self, name: str) -> V.Value:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        raise EvalError(f"unbound name {name!r}")

    def _assign(self, name: str, v: V.Value) -> None:
        for scope in reversed(self.scopes):
            if name in scope:
                scope[name] = v
                return
        if name in self.statics:
            self.statics[name] = v
            return
        raise EvalError(f"cannot assign to unbound name {name!r}")

    def _print_lookup(self, name: str) -> V.Value:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        if name in self.env.consts:
            return self.env.consts[name].value
        if name in self.statics:
            return self.statics[name]
        raise EvalError(f"unbound name {name!r} in print template")

    # — blocks and statements —

    def eval_block(self, b: N.Block) -> V.Value:
        self.scopes.append({})
        try:
            for s in b.stmts:
                self.exec_stmt(s)
            if b.tail is not None:
                if self.units is not None:
                    self._record_unit(self.units.by_tail.get(id(b.tail)))
                return self.eval_expr(b.tail)
            return UNIT
        finally:
            self.scopes.pop()

    def exec_stmt(self, s: N.Stmt) -> None:
        self._burn(s.span)
        if self.units is not None:
            self._record_unit(self.units.by_stmt.get(id(s)))
        if isinstance(s, N.LetStmt):
            v = self.eval_expr(s.init)
            binds = matches_pattern(s.pat, v, self.env)
            assert binds is not None, "irrefutable let pattern failed to match"
            self.scopes[-1].update(binds)
        elif isinstance(s, N.LetElseStmt):
            v = self.eval_expr(s.init)
            outcome = self._pattern_outcome(s, v)
            binds = matches_pattern(s.pat, v, self.env)
            if outcome is not None:
                assert outcome == (binds is not None), "pattern/matcher disagreement"
            if binds is not None:
                self.scopes[-1].update(binds)
            else:
                self.eval_block(s.else_block)
                raise EvalError("`let else` block failed to diverge")
        elif isinstance(s, N.AssignStmt):
            self._assign(s.name, self.eval_expr(s.value))
        elif isinstance(s, N.ExprStmt):
            self.eval_expr(s.expr)
        elif isinstance(s, N.WhileStmt):
            while True:
                if not self._bool(self.eval_expr(s.cond)):
                    break
                self.eval_block(s.body)
        else:
            raise AssertionError(f"unknown statement {s!r}")

    # — expressions —

    def _bool(self, v: V.Value) -> bool:
        v = V.deref(v)
        assert isinstance(v, V.BoolVal)
        return v.value

    def eval_expr(self, e: N.Expr) -> V.Value:
        self._burn(e.span)
        d = self.by_node.get(id(e))
        if d is not None and d.kind == "boolean":
            outcome, recorded = d.evaluate(
                lambda i: self._bool(self._eval_atom(d.conditions[i].expr))
            )
            self._record_vector(d, outcome, recorded)
            return V.BoolVal(outcome)
        return self._eval_plain(e)

    def _eval_atom(self, e: N.Expr) -> V.Value:
        # A single-condition decision's atom is the decision's own
        # expression; evaluate plainly so the head check doesn't recurse.
        # Decisions nested inside the atom still trigger through their
        # own nodes during child evaluation.
        self._burn(e.span)
        return self._eval_plain(e)

    def _eval_plain(self, e: N.Expr) -> V.Value:
        if isinstance(e, N.LitExpr):
            return self._lit_value(e)
        if isinstance(e, N.PathExpr):
            return self._eval_path(e)
        if isinstance(e, N.CallExpr):
            return self._eval_call(e)
        if isinstance(e, N.StructExpr):
            return self._eval_struct(e)
        if isinstance(e, N.TupleExpr):
            return V.TupleVal(tuple(self.eval_expr(x) for x in e.elems))
        if isinstance(e, N.ArrayExpr):
            return V.ArrayVal(tuple(self.eval_expr(x) for x in e.elems))
        if isinstance(e, N.RefExpr):
            inner = self.eval_expr(e.inner)
            ity = T.strip_refs(e.ty)
            if isinstance(ity, T.SliceType) and isinstance(V.deref(inner), V.ArrayVal):
                inner = V.SliceVal(V.deref(inner).elems)
            return V.RefVal(inner)
        if isinstance(e, N.UnaryExpr):
            return V.apply_unary(e.op, self.eval_expr(e.operand), e.span)
        if isinstance(e, N.BinaryExpr):
            if e.op in ("&&", "||"):
                lhs = self._bool(self.eval_expr(e.lhs))
                if e.op == "&&" and not lhs:
                    return V.BoolVal(False)
                if e.op == "||" and lhs:
                    return V.BoolVal(True)
                return V.BoolVal(self._bool(self.eval_expr(e.rhs)))
            a = self.eval_expr(e.lhs)
            b = self.eval_expr(e.rhs)
            return V.apply_binary(e.op, a, b, e.span)
        if isinstance(e, N.FieldExpr):
            base = V.deref(self.eval_expr(e.base))
            if isinstance(base, V.TupleVal):
                return base.elems[int(e.name)]
            assert isinstance(base, V.StructVal)
            return base.field(e.name)
        if isinstance(e, N.IndexExpr):
            base = V.deref(self.eval_expr(e.base))
            idx = V.deref(self.eval_expr(e.index))
            assert isinstance(idx, V.IntVal)
            assert isinstance(base, (V.ArrayVal, V.SliceVal))
            if not (0 <= idx.value < len(base.elems)):
                raise Panic(
                    f"index out of bounds: the len is {len(base.elems)} "
                    f"but the index is {idx.value}",
                    e.span,
                )
            return base.elems[idx.value]
        if isinstance(e, N.BlockExpr):
            return self.eval_block(e.block)
        if isinstance(e, N.IfExpr):
            if self._bool(self.eval_expr(e.cond)):
                return self.eval_block(e.then)
            return self._eval_else(e.else_)
        if isinstance(e, N.IfLetExpr):
            return self._eval_if_let(e)
        if isinstance(e, N.MatchExpr):
            return self._eval_match(e)
        if isinstance(e, N.ReturnExpr):
            v = self.eval_expr(e.value) if e.value is not None else UNIT
            if self.units is not None:
                self._record_unit(self.units.by_return.get(id(e)))
            raise ReturnSignal(v)
        if isinstance(e, N.PrintExpr):
            text = V.interpolate(e.template, self._print_lookup)
            self.output.append(text + "\n" if e.newline else text)
            return UNIT
        if isinstance(e, N.PanicExpr):
            raise Panic(e.message, e.span)
        if isinstance(e, N.QuestionMarkExpr):
            raise EvalError("`?` must be desugared before evaluation", e.span)
        raise AssertionError(f"unknown expression {e!r}")

    def _eval_else(self, else_) -> V.Value:
        if else_ is None:
            return UNIT
        if isinstance(else_, (N.IfExpr, N.IfLetExpr)):
            return self.eval_expr(else_)
        return self.eval_block(else_)

    def _eval_if_let(self, e: N.IfLetExpr) -> V.Value:
        scr = self.eval_expr(e.scrutinee)
        outcome = self._pattern_outcome(e, scr)
        binds = matches_pattern(e.pat, scr, self.env)
        if outcome is not None:
            assert outcome == (binds is not None), "pattern/matcher disagreement"
        if binds is None:
            return self._eval_else(e.else_)
        self.scopes.append(binds)
        try:
            return self.eval_block(e.then)
        finally:
            self.scopes.pop()

    def _eval_match(self, e: N.MatchExpr) -> V.Value:
        # Pattern tests are pure, so every non-pruned arm's match plan is
        # evaluated observationally on each visit; only the first arm whose
        # pattern matches and whose guard passes executes, and guards are
        # only evaluated until that arm is found.
        scr = self.eval_expr(e.scrutinee)
        chosen: Optional[tuple[N.MatchArm, dict]] = None
        for arm in e.arms:
            outcome = self._pattern_outcome(arm, scr)
            binds = matches_pattern(arm.pat, scr, self.env)
            if outcome is not None:
                assert outcome == (binds is not None), "pattern/matcher disagreement"
            if chosen is not None or binds is None:
                continue
            if arm.guard is not None:
                self.scopes.append(binds)
                try:
                    if not self._bool(self.eval_expr(arm.guard)):
                        continue
                finally:
                    self.scopes.pop()
            chosen = (arm, binds)
        if chosen is None:
            raise EvalError("no match arm applied", e.span)
        arm, binds = chosen
        self.scopes.append(binds)
        try:
            if self.units is not None:
                self._record_unit(self.units.by_arm.get(id(arm)))
            return self.eval_expr(arm.body)
        finally:
            self.scopes.pop()

    def _eval_path(self, e: N.PathExpr) -> V.Value:
        if e.resolution == "local":
            return self._lookup(e.path[0])
        if e.resolution == "const":
            return self.env.consts[e.path[-1]].value
        if e.resolution == "static":
            return self.statics[e.path[0]]
        if e.resolution == "unit_struct":
            return V.StructVal(e.path[-1], ())
        if e.resolution == "variant":
            info = self.env.enums[e.enum_name]
            vi = info.variant(e.path[-1])
            return V.EnumVal(e.enum_name, e.path[-1], (), tuple(vi.field_names))
        raise EvalError(f"unresolved path {'::'.join(e.path)}", e.span)

    def _eval_call(self, e: N.CallExpr) -> V.Value:
        args = [self.eval_expr(a) for a in e.args]
        if e.call_kind == "fn":
            return self.call(e.callee.path[0], args)
        if e.call_kind == "variant":
            info = self.env.enums[e.enum_name]
            name = e.callee.path[-1]
            vi = info.variant(name)
            return V.EnumVal(e.enum_name, name, tuple(args), tuple(vi.field_names))
        if e.call_kind == "tuple_struct":
            return V.StructVal(
                e.callee.path[-1], tuple((str(i), a) for i, a in enumerate(args))
            )
        raise EvalError(f"unresolved call {'::'.join(e.callee.path)}", e.span)

    def _eval_struct(self, e: N.StructExpr) -> V.Value:
        # field initializers run in written order; the value stores
        # declaration order so structural equality is positional
        vals = {n: self.eval_expr(x) for n, x in e.fields}
        ety = T.strip_refs(e.ty)
        if isinstance(ety, T.EnumType):
            info = self.env.enums[ety.name]
            vi = info.variant(e.path[-1])
            return V.EnumVal(
                ety.name,
                e.path[-1],
                tuple(vals[n] for n in vi.field_names),
                tuple(vi.field_names),
            )
        sinfo = self.env.structs[e.path[-1]]
        return V.StructVal(sinfo.name, tuple((n, vals[n]) for n in sinfo.field_names))

    def _lit_value(self, e: N.LitExpr) -> V.Value:
        if e.lit_kind == "int":
            base = T.strip_refs(e.ty)
            name = base.name if isinstance(base, T.IntType) else "i32"
            return V.IntVal(int(e.value), name)  # type: ignore[arg-type]
        if e.lit_kind == "bool":
            return V.BoolVal(bool(e.value))
        if e.lit_kind == "char":
            return V.CharVal(str(e.value))
        return V.StrVal(str(e.value))
