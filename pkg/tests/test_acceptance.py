"""The acceptance gate: every criterion at its stated tolerance (exact)
and runtime budget, one test per criterion, plus the end-to-end suite."""

import pytest

from blowup_moduli.acceptance import CRITERIA, run_criteria

_BY_NAME = {name: (index, budget, fn) for index, name, budget, fn in CRITERIA}


@pytest.fixture(scope="module")
def results():
    out = {r.name: r for r in run_criteria(seed=7)}
    for r in out.values():
        print(r.line())
    return out


@pytest.mark.parametrize("name", list(_BY_NAME))
def test_criterion(results, name):
    r = results[name]
    assert r.passed, f"{r.name}: {r.detail}"
    assert r.elapsed < r.budget, f"{r.name} took {r.elapsed:.2f}s (budget {r.budget}s)"


def test_every_criterion_ran(results):
    assert len(results) == len(CRITERIA) == 8


def test_reports_are_seed_stable():
    one = [(r.name, r.passed, r.detail) for r in run_criteria(seed=11, name_filter="baselines")]
    two = [(r.name, r.passed, r.detail) for r in run_criteria(seed=11, name_filter="baselines")]
    assert one == two
