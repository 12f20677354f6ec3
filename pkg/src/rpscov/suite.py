"""Test-suite manifests and instrumented execution.

A suite drives an analyzed program through its entry functions while the
interpreter appends to a trace.  Manifests are JSON::

    {"tests": [
        {"name": "vip", "fn": "describe", "args": ["Person::Passenger(3)"]},
        {"name": "sum", "fn": "add", "args": ["2", "3"], "expect": "5"}
    ]}

Each ``args`` entry and the optional ``expect`` are constant expressions in
the analyzed language, type-checked against the entry function's signature.
Every test runs on a fresh interpreter instance (fresh statics, fresh
output); tests may therefore run in parallel on separate instances, and the
merged trace is byte-identical to a sequential run.

Per-test runtime failures (panics, fuel exhaustion) are reported in the
test's result but do not abort the suite, and the coverage recorded before
the failure is kept.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from rpscov import nodes as N
from rpscov import types as T
from rpscov import values as V
from rpscov.check import check_const_value
from rpscov.errors import EvalError, RpsError, SuiteError
from rpscov.interp import Interpreter
from rpscov.parser import parse_expr
from rpscov.pretty import program_hash
from rpscov.trace import Trace, merge_traces

# ── Test cases and results ───────────────────────────────────────────


@dataclass
class TestCase:
    """One suite entry: call ``fn`` with ``args``, optionally check the
    result against ``expect``.  Argument types are validated against the
    entry signature when the manifest is loaded."""

    name: str
    fn: str
    args: list[V.Value]
    expect: Optional[V.Value] = None
    arg_sources: list[str] = field(default_factory=list)
    expect_source: Optional[str] = None


@dataclass
class TestResult:
    """Outcome of one test: ``pass``, ``fail`` (result mismatched
    ``expect``), or ``error`` (the run panicked or ran out of fuel)."""

    name: str
    status: str
    value: Optional[V.Value] = None
    expect: Optional[V.Value] = None
    stdout: str = ""
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "status": self.status}
        if self.value is not None:
            out["value"] = V.render_value(self.value)
        if self.expect is not None:
            out["expect"] = V.render_value(self.expect)
        if self.stdout:
            out["stdout"] = self.stdout
        if self.error is not None:
            out["error"] = self.error
        return out


# ── Manifest loading ─────────────────────────────────────────────────

_TEST_KEYS = {"name", "fn", "args", "expect"}


def load_suite(
    text: str, prog: N.Program, env: T.TypeEnv, file: str = "<suite>"
) -> list[TestCase]:
    """Parse and validate a manifest against an analyzed program.

    Raises SuiteError on malformed JSON, unknown keys, unknown functions,
    arity mismatches, or arguments that fail to parse, type-check, or
    constant-evaluate.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SuiteError(f"{file}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("tests"), list):
        raise SuiteError(f'{file}: expected an object with a "tests" array')

    tests: list[TestCase] = []
    seen: set[str] = set()
    for i, entry in enumerate(doc["tests"]):
        where = f"{file}: test #{i + 1}"
        if not isinstance(entry, dict):
            raise SuiteError(f"{where}: expected an object")
        extra = sorted(set(entry) - _TEST_KEYS)
        if extra:
            raise SuiteError(
                f"{where}: unknown key(s) {', '.join(map(repr, extra))}; "
                f"allowed keys are name, fn, args, expect"
            )
        name = entry.get("name")
        fn = entry.get("fn")
        args = entry.get("args")
        if not isinstance(name, str) or not name:
            raise SuiteError(f'{where}: "name" must be a non-empty string')
        if name in seen:
            raise SuiteError(f"{where}: duplicate test name {name!r}")
        seen.add(name)
        where = f"{file}: test {name!r}"
        if not isinstance(fn, str) or not fn:
            raise SuiteError(f'{where}: "fn" must be a non-empty string')
        if args is None:
            args = []
        if not isinstance(args, list) or not all(
            isinstance(a, str) for a in args
        ):
            raise SuiteError(f'{where}: "args" must be an array of strings')
        info = env.fns.get(fn)
        if info is None:
            raise SuiteError(f"{where}: unknown function {fn!r}")
        if len(args) != len(info.param_types):
            raise SuiteError(
                f"{where}: {fn!r} takes {len(info.param_types)} argument(s), "
                f"got {len(args)}"
            )

        values = [
            _const_arg(src, info.param_types[j], prog, env, f"{where}: argument {j + 1}")
            for j, src in enumerate(args)
        ]
        expect_src = entry.get("expect")
        expect = None
        if expect_src is not None:
            if not isinstance(expect_src, str):
                raise SuiteError(f'{where}: "expect" must be a string')
            expect = _const_arg(
                expect_src, info.ret, prog, env, f'{where}: "expect"'
            )
        tests.append(TestCase(name, fn, values, expect, list(args), expect_src))
    return tests


def load_suite_file(path: str, prog: N.Program, env: T.TypeEnv) -> list[TestCase]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SuiteError(f"cannot read suite manifest: {exc}") from None
    return load_suite(text, prog, env, file=path)


def _const_arg(
    src: str, ty: T.Type, prog: N.Program, env: T.TypeEnv, where: str
) -> V.Value:
    try:
        e = parse_expr(src, file="<literal>")
        return check_const_value(e, ty, prog, env)
    except RpsError as exc:
        raise SuiteError(f"{where}: {exc.message} (in {src!r})") from None


# ── Execution ────────────────────────────────────────────────────────


def evaluate(
    prog: N.Program,
    env: T.TypeEnv,
    ds,
    units,
    test: TestCase,
    trace: Optional[Trace] = None,
    fuel: Optional[int] = None,
) -> tuple[TestResult, Trace]:
    """Run one test on a fresh interpreter, appending to ``trace`` (a fresh
    trace is created when none is given)."""
    if trace is None:
        trace = Trace(program_hash(prog))
    interp = Interpreter(prog, env, ds, units, trace, fuel=fuel)
    try:
        value = interp.call(test.fn, list(test.args))
    except EvalError as exc:
        result = TestResult(
            test.name, "error", stdout=interp.stdout, error=exc.message
        )
        return result, trace
    status = "pass"
    if test.expect is not None and not V.values_equal(value, test.expect):
        status = "fail"
    result = TestResult(test.name, status, value, test.expect, interp.stdout)
    return result, trace


def run_suite(
    prog: N.Program,
    env: T.TypeEnv,
    ds,
    units,
    tests: list[TestCase],
    fuel: Optional[int] = None,
    parallel: bool = False,
    program_sha256: Optional[str] = None,
) -> tuple[list[TestResult], Trace]:
    """Run every test and return per-test results plus the merged trace.

    Sequential mode appends every run to one accumulating trace; parallel
    mode gives each test a private trace and merges in manifest order.  The
    two serialize identically.
    """
    if program_sha256 is None:
        program_sha256 = program_hash(prog)
    if not tests:
        return [], Trace(program_sha256)
    if parallel:
        def one(test: TestCase) -> tuple[TestResult, Trace]:
            return evaluate(
                prog, env, ds, units, test,
                trace=Trace(program_sha256), fuel=fuel,
            )

        with ThreadPoolExecutor(max_workers=min(8, len(tests))) as pool:
            done = list(pool.map(one, tests))
        results = [r for r, _ in done]
        merged = merge_traces([t for _, t in done], program_sha256)
        return results, merged
    trace = Trace(program_sha256)
    results = [
        evaluate(prog, env, ds, units, test, trace=trace, fuel=fuel)[0]
        for test in tests
    ]
    return results, trace
