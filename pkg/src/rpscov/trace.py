"""Evaluation traces.

A trace records what instrumented execution observed: which coverage
units ran and, for every decision evaluation, one vector of condition
values and the decision outcome. Traces serialize to JSONL in a
canonical form — meta line, unit records sorted by id, vectors sorted
by sequence number, keys sorted, compact separators — so that merging
per-test traces in suite order reproduces the sequential run's file
byte for byte.

The meta line carries the hash of the analyzed program; `merge_traces`
and the coverage checkers refuse traces whose hash disagrees with the
program under analysis (StaleTraceError).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from rpscov.errors import StaleTraceError

FORMAT_NAME = "rpscov-trace"
FORMAT_VERSION = 1

TRUE, FALSE, NOT_EVALUATED = "T", "F", "-"


@dataclass
class Vector:
    """One evaluation of a decision: per-condition values in condition
    index order ('T'/'F', or '-' for conditions short-circuited past)
    and the decision outcome."""

    decision: str
    conds: list[str]
    outcome: bool
    seq: int

    def key(self) -> tuple:
        """Identity disregarding the sequence number."""
        return (self.decision, tuple(self.conds), self.outcome)

    def to_json(self) -> dict:
        return {
            "kind": "vec",
            "decision": self.decision,
            "conds": list(self.conds),
            "outcome": self.outcome,
            "seq": self.seq,
        }


@dataclass
class Trace:
    program_sha256: str
    units: set[str] = field(default_factory=set)
    vectors: list[Vector] = field(default_factory=list)

    def record_unit(self, unit_id: str) -> None:
        self.units.add(unit_id)

    def record_vector(self, decision: str, conds: list[str], outcome: bool) -> None:
        self.vectors.append(Vector(decision, conds, outcome, len(self.vectors)))

    def vectors_for(self, decision: str) -> list[Vector]:
        return [v for v in self.vectors if v.decision == decision]


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _unit_sort_key(unit_id: str):
    # ids are "s<N>"; sort numerically with a lexical fallback
    if unit_id[:1] == "s" and unit_id[1:].isdigit():
        return (0, int(unit_id[1:]))
    return (1, unit_id)


def serialize_trace(trace: Trace) -> str:
    lines = [
        _dump(
            {
                "format": FORMAT_NAME,
                "version": FORMAT_VERSION,
                "program_sha256": trace.program_sha256,
            }
        )
    ]
    for uid in sorted(trace.units, key=_unit_sort_key):
        lines.append(_dump({"kind": "unit", "id": uid}))
    for v in sorted(trace.vectors, key=lambda v: v.seq):
        lines.append(_dump(v.to_json()))
    return "\n".join(lines) + "\n"


def parse_trace(text: str, file: str = "<trace>") -> Trace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise StaleTraceError(f"{file}: empty trace")
    try:
        meta = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise StaleTraceError(f"{file}: bad meta line: {exc}") from None
    if meta.get("format") != FORMAT_NAME:
        raise StaleTraceError(f"{file}: not a {FORMAT_NAME} file")
    if meta.get("version") != FORMAT_VERSION:
        raise StaleTraceError(f"{file}: unsupported version {meta.get('version')!r}")
    trace = Trace(program_sha256=str(meta.get("program_sha256", "")))
    for i, ln in enumerate(lines[1:], start=2):
        try:
            rec = json.loads(ln)
        except json.JSONDecodeError as exc:
            raise StaleTraceError(f"{file}:{i}: bad record: {exc}") from None
        kind = rec.get("kind")
        if kind == "unit":
            trace.units.add(str(rec["id"]))
        elif kind == "vec":
            conds = [str(c) for c in rec["conds"]]
            if any(c not in (TRUE, FALSE, NOT_EVALUATED) for c in conds):
                raise StaleTraceError(f"{file}:{i}: bad condition value in {conds}")
            trace.vectors.append(
                Vector(str(rec["decision"]), conds, bool(rec["outcome"]), int(rec["seq"]))
            )
        else:
            raise StaleTraceError(f"{file}:{i}: unknown record kind {kind!r}")
    trace.vectors.sort(key=lambda v: v.seq)
    return trace


def merge_traces(traces: Iterable[Trace], program_sha256: Optional[str] = None) -> Trace:
    """Merge per-test traces, in order, into one. All inputs must agree
    on the program hash (and with `program_sha256` when given); vectors
    are renumbered so the merge of a suite's per-test traces serializes
    identically to the trace of the same tests run sequentially."""
    traces = list(traces)
    if not traces and program_sha256 is None:
        raise StaleTraceError("nothing to merge")
    expected = program_sha256 if program_sha256 is not None else traces[0].program_sha256
    merged = Trace(program_sha256=expected)
    for t in traces:
        if t.program_sha256 != expected:
            raise StaleTraceError(
                "trace does not match the analyzed program "
                f"(expected {expected[:12]}…, got {t.program_sha256[:12]}…)"
            )
        merged.units |= t.units
        for v in sorted(t.vectors, key=lambda v: v.seq):
            merged.record_vector(v.decision, list(v.conds), v.outcome)
    return merged


def check_trace_matches(trace: Trace, program_sha256: str) -> None:
    if trace.program_sha256 != program_sha256:
        raise StaleTraceError(
            "trace was produced from a different program "
            f"(expected {program_sha256[:12]}…, got {trace.program_sha256[:12]}…)"
        )
