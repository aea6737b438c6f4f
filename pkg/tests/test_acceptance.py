"""Acceptance criteria, one pass/fail line each (also listed in the terminal summary)."""

import io

import pytest

from conftest import ACCEPTANCE_LINES
from zstab import acceptance, cli


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    assert result.ok, result.detail


def test_criterion_10_selftest_deterministic():
    runs = []
    for _ in range(2):
        buf = io.StringIO()
        code = cli.main(["selftest"], stdout=buf)
        runs.append((code, buf.getvalue()))
    ok = runs[0] == runs[1] and runs[0][0] == 0
    line = f"[{'PASS' if ok else 'FAIL'}] criterion 10: selftest end-to-end, deterministic across runs"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok
