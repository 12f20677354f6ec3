"""Shared fixtures: corpus paths, analyzed programs, and a CLI runner."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

CORPUS = Path(__file__).parent / "corpus"
SUITES = CORPUS / "suites"


def corpus_path(name: str) -> Path:
    return CORPUS / name


def corpus_src(name: str) -> str:
    return (CORPUS / name).read_text()


def suite_path(name: str) -> Path:
    return SUITES / name


@pytest.fixture
def analyze():
    """Analyze a corpus file; returns (prog, env, decisions, units)."""
    from rpscov.decisions import analyze_source

    def run(name: str, slice_rule: str = "verbatim"):
        return analyze_source(corpus_src(name), file=name, slice_rule=slice_rule)

    return run


@pytest.fixture
def cli(capsys):
    """Invoke the command-line entry in-process; returns (exit, out, err)."""
    from rpscov.cli import main

    def run(*argv: str):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run
