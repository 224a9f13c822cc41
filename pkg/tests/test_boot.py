"""Tests for bootstrap standard errors and percentile intervals."""

import pytest

from dualrec.boot import bootstrap
from dualrec.core import (
    AllResamplesFailed,
    ConditionViolated,
    DomainError,
    DrsTable,
    StratumPair,
)
from dualrec.datasets import CHILDREN_DEATH, ENCEPHALITIS, MEADOW_VOLES


def test_parametric_children_moment_se_band():
    res = bootstrap(CHILDREN_DEATH, "MME-I", scheme="parametric", b=1000, seed=0)
    # published standard error 48.12; the resampling scheme behind that
    # number is unstated, so the band is wide
    assert 48.12 * 0.65 <= res.se["n_a"] <= 48.12 * 1.35
    assert res.estimates["n_a"] == 268.0
    assert res.diagnostics["failures"] <= 50
    assert res.diagnostics["scheme"] == "parametric"
    assert res.diagnostics["resamples"] == 1000
    assert res.diagnostics["seed"] == 0
    # interval brackets the point estimate (failure fraction well under 5%)
    lo, hi = res.ci["n_a"]
    assert lo <= res.diagnostics["n_a_unrounded"] <= hi


def test_nonparametric_voles_lp_se_band():
    res = bootstrap(MEADOW_VOLES, "LP", scheme="nonparametric", b=1000, seed=0)
    # published standard error 1.30 for the reference stratum
    assert 1.30 * 0.5 <= res.se["n_b"] <= 1.30 * 1.5
    assert res.diagnostics["failures"] == 0
    lo, hi = res.ci["n_b"]
    assert lo <= res.diagnostics["n_b_unrounded"] <= hi
    lo, hi = res.ci["n_a"]
    assert lo <= res.diagnostics["n_a_unrounded"] <= hi


def test_degenerate_table_gives_zero_se():
    # fully-overlapping lists leave nothing to resample: every parametric
    # resample reproduces the observed table exactly
    pair = StratumPair(DrsTable(5, 0, 0), DrsTable(7, 0, 0))
    res = bootstrap(pair, "LP", scheme="parametric", b=2, seed=0)
    assert res.se["n_a"] == 0.0
    assert res.se["n_b"] == 0.0
    assert res.ci["n_a"] == (5.0, 5.0)


def test_bootstrap_reruns_bit_identically():
    a = bootstrap(MEADOW_VOLES, "LP", scheme="nonparametric", b=100, seed=42)
    b = bootstrap(MEADOW_VOLES, "LP", scheme="nonparametric", b=100, seed=42)
    assert a == b


def test_bootstrap_seed_changes_draws():
    a = bootstrap(MEADOW_VOLES, "LP", scheme="nonparametric", b=100, seed=1)
    b = bootstrap(MEADOW_VOLES, "LP", scheme="nonparametric", b=100, seed=2)
    assert a.se["n_a"] != b.se["n_a"]


def test_bootstrap_dependence_estimate_gets_uncertainty():
    res = bootstrap(CHILDREN_DEATH, "MME-I", scheme="parametric", b=200, seed=0)
    assert "alpha" in res.se
    assert res.se["alpha"] > 0.0
    assert "alpha" in res.ci


def test_ratio_linked_method_resamples():
    res = bootstrap(MEADOW_VOLES, "WOLTER-1", scheme="parametric", b=50, seed=0, ratio=1.147)
    assert res.estimates["n_a"] == 84.0
    assert res.diagnostics["failures"] < 50
    assert res.se["n_a"] > 0.0


def test_all_resamples_failed():
    # the Model II moment solution is feasible on the observed voles pair but
    # collapses on resamples drawn from its own fit
    with pytest.raises(AllResamplesFailed):
        bootstrap(MEADOW_VOLES, "MME-II", scheme="parametric", b=3, seed=0)


def test_point_estimate_preconditions_propagate():
    with pytest.raises(ConditionViolated):
        bootstrap(ENCEPHALITIS, "NOUR", scheme="parametric", b=10, seed=0)


def test_bootstrap_argument_validation():
    with pytest.raises(DomainError):
        bootstrap(MEADOW_VOLES, "LP", scheme="jackknife", b=10, seed=0)
    with pytest.raises(DomainError):
        bootstrap(MEADOW_VOLES, "LP", scheme="parametric", b=1, seed=0)
