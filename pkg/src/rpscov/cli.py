"""Command-line front-end.

Two subcommands tie the pipeline together:

* ``analyze`` — parse and check one program, then print its decision and
  condition inventory (``--emit=decisions``, the default) or the classified
  sub-pattern decomposition of every pattern (``--emit=pattern-trees``).
  Exit 0 on success, 2 on parse/type errors (including non-exhaustive
  matches, whose message carries a concrete witness value).

* ``cover`` — additionally run a test-suite manifest on the instrumented
  interpreter, merge the traces, and verify the requested criterion
  (``--criterion=statement|decision|mcdc``, default mcdc).  Exit 0 if the
  criterion is satisfied, 1 if not, 2 on errors.

Both accept ``--slice-rule=verbatim|corrected``, ``--strict-arms`` and
``--format=text|json``.  The environment variable ``MCDC_FUEL`` bounds
interpreter steps (default 10^7).  Output ordering is deterministic:
decisions, conditions and units are listed sorted by id.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from rpscov import coverage as COV
from rpscov import decisions as D
from rpscov import nodes as N
from rpscov import suite as S
from rpscov.check import iter_patterns
from rpscov.errors import RpsError
from rpscov.parser import parse_program
from rpscov.pretty import program_hash, render_pattern
from rpscov.refutability import SLICE_RULES, dump_pattern_tree
from rpscov.spans import DUMMY_SPAN

# ── Argument parsing ─────────────────────────────────────────────────


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rpscov",
        description="Structural-coverage analysis (statement, decision, "
        "MC/DC) for pattern-matching programs.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("files", nargs="+", help="source file(s) of one program")
        p.add_argument(
            "--slice-rule", choices=SLICE_RULES, default="verbatim",
            help="how dynamic-size slice patterns are classified "
            "(default: verbatim)",
        )
        p.add_argument(
            "--strict-arms", action="store_true",
            help="require outcome/condition obligations even for pruned "
            "(contextually irrefutable) match arms",
        )
        p.add_argument(
            "--format", choices=("text", "json"), default="text",
            help="output format (default: text)",
        )

    pa = sub.add_parser("analyze", help="print the decision inventory")
    common(pa)
    pa.add_argument(
        "--emit", choices=("decisions", "pattern-trees"), default="decisions",
        help="what to print (default: decisions)",
    )

    pc = sub.add_parser("cover", help="run a suite and verify coverage")
    common(pc)
    pc.add_argument("--suite", required=True, help="suite manifest (JSON)")
    pc.add_argument(
        "--criterion", choices=COV.CRITERIA, default="mcdc",
        help="coverage criterion to verify (default: mcdc)",
    )
    pc.add_argument(
        "--parallel", action="store_true",
        help="run tests on parallel interpreter instances (merged trace "
        "is identical to a sequential run)",
    )
    return ap


def _load_program(paths: list[str]) -> N.Program:
    items: list[N.Item] = []
    span = None
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            src = fh.read()
        prog = parse_program(src, file=path)
        items.extend(prog.items)
        span = span or prog.span
    return N.Program(items, span or DUMMY_SPAN)


# ── analyze ──────────────────────────────────────────────────────────


def _decision_sort_key(d) -> int:
    return int(d.id[1:])


def _render_inventory(ds: D.DecisionSet, units: D.UnitSet) -> str:
    decisions = sorted(ds.decisions, key=_decision_sort_key)
    n_conds = sum(len(d.conditions) for d in decisions)
    lines = [
        f"{len(decisions)} decision{'s' if len(decisions) != 1 else ''}, "
        f"{n_conds} condition{'s' if n_conds != 1 else ''}"
    ]
    for d in decisions:
        flags = ", pruned" if d.pruned else ""
        lines.append(
            f"  {d.id} [{d.origin}] `{d.text}` in {d.fn_name} at {d.span}"
            f" — {len(d.conditions)} condition"
            f"{'s' if len(d.conditions) != 1 else ''}{flags}"
        )
        for c in d.conditions:
            exempt = "  (const-exempt)" if c.const_exempt else ""
            lines.append(f"    c{c.index} {c.kind}: {c.description}{exempt}")
        lines.append(
            "    structure: "
            + json.dumps(D.structure_json(d.structure), separators=(",", ":"))
        )
    statementlike = units.statementlike()
    entries = units.entries_exits()
    lines.append(
        f"units: {len(statementlike)} statement-like, "
        f"{len(entries)} entry/exit"
    )
    return "\n".join(lines)


def _pattern_tree_json(p: N.Pattern) -> dict:
    return {
        "kind": N.sub_pattern_kind(p),
        "text": render_pattern(p),
        "refutability": p.refutability.value,
        "children": [_pattern_tree_json(c) for c in p.children()],
    }


def _cmd_analyze(args) -> int:
    prog = _load_program(args.files)
    prog, env, ds, units = D.analyze_program(prog, args.slice_rule)
    if args.emit == "pattern-trees":
        pats = list(iter_patterns(prog))
        if args.format == "json":
            doc = {
                "program_sha256": program_hash(prog),
                "patterns": [
                    {
                        "fn": fn,
                        "span": str(p.span),
                        "tree": _pattern_tree_json(p),
                    }
                    for fn, p in pats
                ],
            }
            print(json.dumps(doc, indent=2, sort_keys=True))
        else:
            chunks = [
                f"# {fn} at {p.span}\n"
                + dump_pattern_tree(p, p.ty, env, args.slice_rule)
                for fn, p in pats
            ]
            print("\n\n".join(chunks) if chunks else "no patterns")
        return 0
    if args.format == "json":
        doc = {
            "program_sha256": program_hash(prog),
            "slice_rule": args.slice_rule,
            "strict_arms": args.strict_arms,
            "decisions": ds.to_json(),
            "units": units.to_json(),
            "summary": {
                "decisions": len(ds.decisions),
                "conditions": sum(len(d.conditions) for d in ds.decisions),
            },
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(_render_inventory(ds, units))
    return 0


# ── cover ────────────────────────────────────────────────────────────


def _render_test_line(r: S.TestResult) -> str:
    if r.status == "pass":
        return f"test {r.name}: pass"
    if r.status == "fail":
        from rpscov.values import render_value

        return (
            f"test {r.name}: FAIL — expected {render_value(r.expect)}, "
            f"got {render_value(r.value)}"
        )
    return f"test {r.name}: ERROR — {r.error}"


def _cmd_cover(args) -> int:
    prog = _load_program(args.files)
    prog, env, ds, units = D.analyze_program(prog, args.slice_rule)
    h = program_hash(prog)
    tests = S.load_suite_file(args.suite, prog, env)
    results, trace = S.run_suite(
        prog, env, ds, units, tests,
        parallel=args.parallel, program_sha256=h,
    )
    report = COV.check_coverage(
        ds, units, trace, env, h,
        criterion=args.criterion, strict_arms=args.strict_arms,
    )
    if args.format == "json":
        doc = report.to_json()
        doc["tests"] = [r.to_json() for r in results]
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for r in results:
            print(_render_test_line(r))
        print(report.render_text())
    return 0 if report.satisfied else 1


# ── Entry point ──────────────────────────────────────────────────────


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.cmd == "analyze":
            return _cmd_analyze(args)
        return _cmd_cover(args)
    except RpsError as exc:
        loc = f" at {exc.span}" if exc.span is not None else ""
        print(f"error: {exc.message}{loc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
