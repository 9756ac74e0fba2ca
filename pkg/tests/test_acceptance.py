"""Runs every acceptance criterion once and prints one pass/fail line per criterion."""

import pytest

from qkdv.acceptance import CRITERIA, Context, run_all

NUMBERS = [n for n, _, _ in CRITERIA] + [10]


@pytest.fixture(scope="module")
def results():
    # fresh context with caching disabled: everything is recomputed single-threaded
    out = run_all(Context(), report=lambda r: print(r.line(), flush=True))
    return {r.number: r for r in out}


@pytest.mark.parametrize("number", NUMBERS)
def test_criterion(results, number, capsys):
    res = results[number]
    with capsys.disabled():
        print("\n" + res.line())
    assert res.ok, res.line()
