"""End-to-end acceptance suite: one test per criterion, seed 42.

Each test prints a single ``criterion n: pass|fail`` line, visible even
without ``-s``.
"""
from __future__ import annotations

import subprocess
import sys

import pytest

from funcspec.verify import run_criterion

SEED = 42


def report(capsys, number: int, title: str, passed: bool, detail: str = ""):
    with capsys.disabled():
        line = f"\ncriterion {number} ({title}): {'pass' if passed else 'FAIL'}"
        print(line + (f" - {detail}" if detail else ""))


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number, capsys):
    res = run_criterion(number, SEED)
    report(capsys, number, res.title, res.passed, "; ".join(res.failures[:3]))
    assert res.passed, res.failures[:5]


def test_criterion_10_determinism(capsys):
    cmd = [sys.executable, "-m", "funcspec", "verify-all", "--seed", str(SEED)]
    runs = [subprocess.run(cmd, capture_output=True, check=False, timeout=900) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and bool(runs[0].stdout)
    ok = same and all(r.returncode == 0 for r in runs)
    report(capsys, 10, "byte-identical verify-all output", ok)
    assert [r.returncode for r in runs] == [0, 0], runs[0].stderr.decode()[-2000:]
    assert same
