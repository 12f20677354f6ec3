"""Coverage verification: statement, decision, and MC/DC.

The three criteria are layered so each implies the one below, matching
how the objectives accumulate in practice:

  * statement: every statement-like unit ran (statements, match-arm
    bodies, block tails);
  * decision: statement holds, every function entry and exit ran, and
    every in-scope decision took both outcomes;
  * MC/DC: decision holds, every non-exempt condition evaluated both
    ways, and each has an independence pair.

In scope means: not contextually pruned (unless --strict-arms) and not
fully const-exempt. Const-exempt conditions carry no obligations.

Independence pairs follow the masking criterion adapted to
short-circuit evaluation: two vectors pair for condition i when i has
opposite values in both, the outcomes differ, and every other
condition either agrees or was short-circuited past (`-`) in at least
one of the two. A pair where the others agree exactly is additionally
tagged unique_cause.

`suggest_missing_vectors` enumerates the decision's reachable vectors
(up to 16 conditions), filters the infeasible ones — pattern condition
constraints that no value satisfies, or const-exempt leaves forced the
other way — and proposes concrete additions for each unpaired
condition, preferring pairs that reuse an already-observed vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from rpscov import types as T
from rpscov import valuespace as VS
from rpscov.decisions import Condition, Decision, DecisionSet, UnitSet
from rpscov.errors import TooManyConditions
from rpscov.trace import FALSE, NOT_EVALUATED, TRUE, Trace, Vector, check_trace_matches

CRITERIA = ("statement", "decision", "mcdc")

SUGGESTION_LIMIT = 16

# stands in for "any length" in slice-length interval arithmetic
_LEN_INF = 2**62


# ── Independence pairs ───────────────────────────────────────────


def independence_variant(a: Vector, b: Vector, i: int) -> Optional[str]:
    """Classify (a, b) as an independence pair for condition i:
    'unique_cause', 'masking', or None if they do not pair."""
    ca, cb = a.conds[i], b.conds[i]
    if {ca, cb} != {TRUE, FALSE}:
        return None
    if a.outcome == b.outcome:
        return None
    exact = True
    for j, (xa, xb) in enumerate(zip(a.conds, b.conds)):
        if j == i:
            continue
        if xa != xb:
            exact = False
            if NOT_EVALUATED not in (xa, xb):
                return None
    return "unique_cause" if exact else "masking"


def find_independence_pairs(
    decision: Decision, vectors: list[Vector]
) -> dict[int, list[tuple[int, int, str]]]:
    """Per-condition independence pairs among the given vectors, as
    (seq_a, seq_b, variant) triples. Duplicate vectors (same conditions
    and outcome) are collapsed to their first occurrence."""
    distinct: list[Vector] = []
    seen: set[tuple] = set()
    for v in sorted(vectors, key=lambda v: v.seq):
        if v.key() not in seen:
            seen.add(v.key())
            distinct.append(v)
    pairs: dict[int, list[tuple[int, int, str]]] = {
        i: [] for i in range(len(decision.conditions))
    }
    for i in pairs:
        for x in range(len(distinct)):
            for y in range(x + 1, len(distinct)):
                variant = independence_variant(distinct[x], distinct[y], i)
                if variant is not None:
                    pairs[i].append((distinct[x].seq, distinct[y].seq, variant))
    return pairs


# ── Report structure ─────────────────────────────────────────────


@dataclass
class ConditionCoverage:
    index: int
    description: str
    kind: str
    const_exempt: bool
    saw_true: bool
    saw_false: bool
    pairs: list[tuple[int, int, str]]

    @property
    def covered(self) -> bool:
        if self.const_exempt:
            return True
        return self.saw_true and self.saw_false and bool(self.pairs)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "description": self.description,
            "kind": self.kind,
            "const_exempt": self.const_exempt,
            "saw_true": self.saw_true,
            "saw_false": self.saw_false,
            "pairs": [list(p) for p in self.pairs],
            "covered": self.covered,
        }


@dataclass
class DecisionCoverage:
    id: str
    text: str
    origin: str
    kind: str
    span: str
    fn: str
    pruned: bool
    fully_exempt: bool
    in_scope: bool
    evaluations: int
    saw_true: bool
    saw_false: bool
    conditions: list[ConditionCoverage]

    @property
    def outcomes_ok(self) -> bool:
        return self.saw_true and self.saw_false

    @property
    def mcdc_ok(self) -> bool:
        return self.outcomes_ok and all(c.covered for c in self.conditions)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "origin": self.origin,
            "kind": self.kind,
            "span": self.span,
            "fn": self.fn,
            "pruned": self.pruned,
            "fully_exempt": self.fully_exempt,
            "in_scope": self.in_scope,
            "evaluations": self.evaluations,
            "saw_true": self.saw_true,
            "saw_false": self.saw_false,
            "outcomes_ok": self.outcomes_ok,
            "mcdc_ok": self.mcdc_ok,
            "conditions": [c.to_json() for c in self.conditions],
        }


@dataclass
class CoverageReport:
    criterion: str
    strict_arms: bool
    program_sha256: str
    statements_total: int
    statements_covered: int
    statements_missing: list[dict]
    entries_exits_total: int
    entries_exits_covered: int
    entries_exits_missing: list[dict]
    decisions: list[DecisionCoverage]
    suggestions: dict[str, list[dict]] = field(default_factory=dict)

    @property
    def statement_ok(self) -> bool:
        return not self.statements_missing

    @property
    def decision_ok(self) -> bool:
        return (
            self.statement_ok
            and not self.entries_exits_missing
            and all(d.outcomes_ok for d in self.decisions if d.in_scope)
        )

    @property
    def mcdc_ok(self) -> bool:
        return self.decision_ok and all(
            d.mcdc_ok for d in self.decisions if d.in_scope
        )

    @property
    def satisfied(self) -> bool:
        return {
            "statement": self.statement_ok,
            "decision": self.decision_ok,
            "mcdc": self.mcdc_ok,
        }[self.criterion]

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion,
            "strict_arms": self.strict_arms,
            "program_sha256": self.program_sha256,
            "statements": {
                "total": self.statements_total,
                "covered": self.statements_covered,
                "missing": self.statements_missing,
            },
            "entries_exits": {
                "total": self.entries_exits_total,
                "covered": self.entries_exits_covered,
                "missing": self.entries_exits_missing,
            },
            "decisions": [d.to_json() for d in self.decisions],
            "verdicts": {
                "statement": self.statement_ok,
                "decision": self.decision_ok,
                "mcdc": self.mcdc_ok,
            },
            "satisfied": self.satisfied,
            "suggestions": self.suggestions,
        }

    def render_text(self) -> str:
        lines = []
        word = {"statement": "statement", "decision": "decision", "mcdc": "MC/DC"}
        lines.append(
            f"{word[self.criterion]} coverage: "
            f"{'PASS' if self.satisfied else 'FAIL'}"
        )
        lines.append(
            f"  statements: {self.statements_covered}/{self.statements_total} covered"
        )
        for m in self.statements_missing:
            lines.append(f"    missing {m['id']} ({m['kind']}) at {m['span']}")
        lines.append(
            f"  entries/exits: {self.entries_exits_covered}/"
            f"{self.entries_exits_total} covered"
        )
        for m in self.entries_exits_missing:
            lines.append(f"    missing {m['id']} ({m['kind']}) at {m['span']}")
        in_scope = [d for d in self.decisions if d.in_scope]
        lines.append(f"  decisions in scope: {len(in_scope)}/{len(self.decisions)}")
        for d in self.decisions:
            mark = "ok" if (d.mcdc_ok if self.criterion == "mcdc" else d.outcomes_ok) else "NOT COVERED"
            if not d.in_scope:
                why = "pruned" if d.pruned else "const-exempt"
                lines.append(f"    {d.id} `{d.text}` [{d.origin}] — out of scope ({why})")
                continue
            lines.append(
                f"    {d.id} `{d.text}` [{d.origin}] at {d.span}: "
                f"outcomes T={'yes' if d.saw_true else 'NO'} "
                f"F={'yes' if d.saw_false else 'NO'} — {mark}"
            )
            if self.criterion == "mcdc":
                for c in d.conditions:
                    if c.const_exempt:
                        lines.append(
                            f"      c{c.index} {c.description}: exempt (constant)"
                        )
                        continue
                    pair = (
                        f"pair {c.pairs[0][0]}/{c.pairs[0][1]} ({c.pairs[0][2]})"
                        if c.pairs
                        else "no independence pair"
                    )
                    lines.append(
                        f"      c{c.index} {c.description}: "
                        f"T={'yes' if c.saw_true else 'NO'} "
                        f"F={'yes' if c.saw_false else 'NO'}, {pair}"
                    )
            sugg = self.suggestions.get(d.id)
            if sugg:
                for s in sugg:
                    if s["status"] == "infeasible":
                        lines.append(
                            f"      c{s['condition']}: no feasible independence pair"
                        )
                    else:
                        for v in s["add"]:
                            lines.append(
                                f"      c{s['condition']}: add vector "
                                f"[{', '.join(v['conds'])}] -> "
                                f"{'T' if v['outcome'] else 'F'}"
                            )
        return "\n".join(lines) + "\n"


# ── The checkers ─────────────────────────────────────────────────


def check_coverage(
    ds: DecisionSet,
    units: UnitSet,
    trace: Trace,
    env: T.TypeEnv,
    program_sha256: str,
    criterion: str = "mcdc",
    strict_arms: bool = False,
    suggest: bool = True,
) -> CoverageReport:
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}")
    check_trace_matches(trace, program_sha256)

    statementlike = units.statementlike()
    entries_exits = units.entries_exits()
    missing_stmt = [
        {"id": u.id, "kind": u.kind, "span": str(u.span), "fn": u.fn_name}
        for u in statementlike
        if u.id not in trace.units
    ]
    missing_ee = [
        {"id": u.id, "kind": u.kind, "span": str(u.span), "fn": u.fn_name}
        for u in entries_exits
        if u.id not in trace.units
    ]

    by_decision: dict[str, list[Vector]] = {}
    for v in trace.vectors:
        by_decision.setdefault(v.decision, []).append(v)

    dcovs = []
    for d in ds.decisions:
        vectors = by_decision.get(d.id, [])
        pairs = find_independence_pairs(d, vectors)
        conds = []
        for c in d.conditions:
            conds.append(
                ConditionCoverage(
                    index=c.index,
                    description=c.description,
                    kind=c.kind,
                    const_exempt=c.const_exempt,
                    saw_true=any(v.conds[c.index] == TRUE for v in vectors),
                    saw_false=any(v.conds[c.index] == FALSE for v in vectors),
                    pairs=pairs[c.index],
                )
            )
        in_scope = (strict_arms or not d.pruned) and not d.fully_exempt()
        dcovs.append(
            DecisionCoverage(
                id=d.id,
                text=d.text,
                origin=d.origin,
                kind=d.kind,
                span=str(d.span),
                fn=d.fn_name,
                pruned=d.pruned,
                fully_exempt=d.fully_exempt(),
                in_scope=in_scope,
                evaluations=len(vectors),
                saw_true=any(v.outcome for v in vectors),
                saw_false=any(not v.outcome for v in vectors),
                conditions=conds,
            )
        )

    report = CoverageReport(
        criterion=criterion,
        strict_arms=strict_arms,
        program_sha256=program_sha256,
        statements_total=len(statementlike),
        statements_covered=len(statementlike) - len(missing_stmt),
        statements_missing=missing_stmt,
        entries_exits_total=len(entries_exits),
        entries_exits_covered=len(entries_exits) - len(missing_ee),
        entries_exits_missing=missing_ee,
        decisions=dcovs,
    )

    if suggest and criterion == "mcdc":
        for d, dc in zip(ds.decisions, dcovs):
            if not dc.in_scope or dc.mcdc_ok:
                continue
            if len(d.conditions) > SUGGESTION_LIMIT:
                report.suggestions[d.id] = [
                    {"status": "too_many_conditions", "limit": SUGGESTION_LIMIT}
                ]
                continue
            sugg = suggest_missing_vectors(d, by_decision.get(d.id, []), env)
            if sugg:
                report.suggestions[d.id] = sugg
    return report


def check_statement_coverage(ds, units, trace, env, program_sha256, **kw):
    return check_coverage(
        ds, units, trace, env, program_sha256, criterion="statement", **kw
    )


def check_decision_coverage(ds, units, trace, env, program_sha256, **kw):
    return check_coverage(
        ds, units, trace, env, program_sha256, criterion="decision", **kw
    )


def check_mcdc(ds, units, trace, env, program_sha256, **kw):
    return check_coverage(ds, units, trace, env, program_sha256, criterion="mcdc", **kw)


# ── Vector enumeration and feasibility ───────────────────────────


def reachable_vectors(decision: Decision) -> list[tuple[tuple[str, ...], bool]]:
    """Every vector the decision's structure can realize, from all 2^n
    underlying condition assignments (so `-` entries appear exactly
    where short-circuiting leaves them). Capped at 16 conditions."""
    n = len(decision.conditions)
    if n > SUGGESTION_LIMIT:
        raise TooManyConditions(
            f"decision {decision.id} has {n} conditions; "
            f"vector enumeration caps at {SUGGESTION_LIMIT}"
        )
    out: dict[tuple, bool] = {}
    for bits in product((False, True), repeat=n):
        outcome, recorded = decision.evaluate(lambda i: bits[i])
        conds = tuple(
            (TRUE if recorded[i] else FALSE) if i in recorded else NOT_EVALUATED
            for i in range(n)
        )
        out.setdefault(conds, outcome)
    return [(conds, outcome) for conds, outcome in out.items()]


def vector_feasible(
    decision: Decision, conds: tuple[str, ...], env: T.TypeEnv
) -> bool:
    """Can any execution realize this vector? Pattern conditions impose
    value-space and length constraints per scrutinee path; boolean
    leaves are unconstrained unless const-exempt with a known value."""
    if decision.kind == "boolean":
        for c in decision.conditions:
            got = conds[c.index]
            if got == NOT_EVALUATED or c.fixed_value is None:
                continue
            if (got == TRUE) != c.fixed_value:
                return False
        return True

    spaces: dict[tuple, VS.Space] = {}
    types: dict[tuple, T.Type] = {}
    lens: dict[tuple, VS.IntervalSet] = {}
    for c in decision.conditions:
        got = conds[c.index]
        if got == NOT_EVALUATED:
            continue
        path = c.path or ()
        if c.kind == "SliceLenCheck":
            if c.len_op == "==":
                want = VS.IntervalSet.of([(c.len_val, c.len_val)])
            else:
                want = VS.IntervalSet.of([(c.len_val, _LEN_INF)])
            if got == FALSE:
                want = VS.IntervalSet.of([(0, _LEN_INF)]).subtract(want)
            have = lens.get(path, VS.IntervalSet.of([(0, _LEN_INF)]))
            lens[path] = have.intersect(want)
            if lens[path].is_empty():
                return False
            continue
        space = c.space
        if got == FALSE:
            space = VS.space_complement(space, c.sub_ty, env)
        if path in spaces:
            spaces[path] = VS.space_intersect(spaces[path], space)
        else:
            spaces[path] = space
            types[path] = c.sub_ty
        if spaces[path].is_empty():
            return False
    return True


def suggest_missing_vectors(
    decision: Decision, observed: list[Vector], env: T.TypeEnv
) -> list[dict]:
    """For each uncovered condition, propose vectors to add: pairs drawn
    from the decision's feasible vector set, preferring a pair whose
    first half was already observed. Conditions with no feasible pair at
    all are reported infeasible."""
    feasible = [
        (conds, outcome)
        for conds, outcome in reachable_vectors(decision)
        if vector_feasible(decision, conds, env)
    ]
    observed_keys = {(tuple(v.conds), v.outcome) for v in observed}
    pairs_by_cond = find_independence_pairs(
        decision,
        [Vector(decision.id, list(c), o, s) for s, (c, o) in enumerate(feasible)],
    )
    out = []
    for c in decision.conditions:
        if c.const_exempt:
            continue
        observed_pair = any(
            independence_variant(a, b, c.index) is not None
            for x, a in enumerate(_as_vectors(observed))
            for b in _as_vectors(observed)[x + 1 :]
        )
        if observed_pair:
            continue
        candidates = pairs_by_cond[c.index]
        if not candidates:
            out.append({"condition": c.index, "status": "infeasible", "add": []})
            continue

        def additions(pair) -> list[dict]:
            xs = []
            for seq in pair[:2]:
                conds, outcome = feasible[seq]
                if (conds, outcome) not in observed_keys:
                    xs.append({"conds": list(conds), "outcome": outcome})
            return xs

        best = min(candidates, key=lambda p: len(additions(p)))
        out.append(
            {
                "condition": c.index,
                "status": "satisfiable",
                "add": additions(best),
            }
        )
    return out


def _as_vectors(vectors: list[Vector]) -> list[Vector]:
    seen: set[tuple] = set()
    distinct = []
    for v in vectors:
        if v.key() not in seen:
            seen.add(v.key())
            distinct.append(v)
    return distinct
