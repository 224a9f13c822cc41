"""Bootstrap standard errors and percentile intervals for pair estimators.

Two resampling schemes are provided:

* ``parametric`` regenerates full tables from the fitted model and refits.
  The generating structure follows the estimator: the Model I fits draw
  stratum A from the dependent-capture model and stratum B with independent
  lists, the Model II fits draw both strata with the shared dependence, and
  the classical single-stratum methods draw each stratum under within-stratum
  independence at the fitted size with the observed list margins.
* ``nonparametric`` keeps each stratum's observed count fixed and
  redistributes those individuals over the three observed cells with their
  empirical proportions.

Each resample draws from its own child stream spawned from the seed, so
the collection of resamples does not depend on evaluation order.
Resamples whose refit fails (infeasible moment solution, violated
condition, non-convergence) are counted and excluded from the standard
error and interval; if every resample fails the bootstrap itself fails.
"""

from __future__ import annotations

import numpy as np

from .core import (
    AllResamplesFailed,
    BbmParams,
    DomainError,
    DrsTable,
    DualrecError,
    EstimateResult,
    StratumPair,
    empirical_ci,
    validate_table,
)
from .mle import FitConfig
from .model import cell_probabilities
from .sim import apply_method

_SCHEMES = ("parametric", "nonparametric")
_BBM_METHODS = ("MME-I", "MLE-I", "MME-II", "MLE-II")


def _generating_cells(method: str, data: StratumPair, point: EstimateResult):
    """Per-stratum (cell probabilities, size) of the parametric generator."""
    est, diag = point.estimates, point.diagnostics
    n_a = float(diag.get("n_a_unrounded", est["n_a"]))
    n_b = float(diag.get("n_b_unrounded", est["n_b"]))
    if method in _BBM_METHODS:
        alpha_b = est["alpha"] if method.endswith("-II") else 0.0
        cells_a = cell_probabilities(
            BbmParams(p1=est["p1"], p2=est["p2a"], alpha=est["alpha"], n=n_a)
        )
        cells_b = cell_probabilities(
            BbmParams(p1=est["p1"], p2=est["p2b"], alpha=alpha_b, n=n_b)
        )
        size_a = max(int(round(n_a)), 1)
        size_b = max(int(round(n_b)), 1)
        return (cells_a.as_tuple(), size_a), (cells_b.as_tuple(), size_b)
    return (
        _independence_cells(data.a, n_a),
        _independence_cells(data.b, n_b),
    )


def _independence_cells(table: DrsTable, n_hat: float):
    """Independent-list cell probabilities at the fitted stratum size."""
    n = max(int(round(n_hat)), table.x0)
    p1dot = table.x1dot / n
    pdot1 = table.xdot1 / n
    cells = (
        p1dot * pdot1,
        p1dot * (1.0 - pdot1),
        (1.0 - p1dot) * pdot1,
        (1.0 - p1dot) * (1.0 - pdot1),
    )
    return cells, n


def _draw_table(cells, n: int, rng: np.random.Generator) -> DrsTable:
    x11, x10, x01, _ = rng.multinomial(n, cells)
    return DrsTable(int(x11), int(x10), int(x01))


def _resample_observed(table: DrsTable, rng: np.random.Generator) -> DrsTable:
    t = validate_table(table)
    props = (t.x11 / t.x0, t.x10 / t.x0, t.x01 / t.x0)
    x11, x10, x01 = rng.multinomial(t.x0, props)
    return DrsTable(int(x11), int(x10), int(x01))


def bootstrap(
    data: StratumPair,
    method: str,
    scheme: str = "parametric",
    b: int = 1000,
    seed: int = 0,
    ratio: float | None = None,
    fit_config: FitConfig | None = None,
) -> EstimateResult:
    """Bootstrap one estimator on one stratum pair.

    Returns the point fit augmented with a standard error (sample standard
    deviation over successful resamples) and an empirical 2.5/97.5
    percentile interval for each size estimate, plus the dependence
    estimate where the method produces one.  Sizes are resampled on their
    unrounded scale.  Diagnostics gain the scheme, the resample count, the
    failure count, and the seed.
    """
    if scheme not in _SCHEMES:
        raise DomainError(f"unknown scheme {scheme!r}; valid: {', '.join(_SCHEMES)}")
    if b < 2:
        raise DomainError(f"need at least 2 resamples for a standard error, got {b}")
    point = apply_method(method, data, ratio=ratio, fit_config=fit_config)
    if scheme == "parametric":
        gen_a, gen_b = _generating_cells(method, data, point)

    keys = [k for k in ("n_a", "n_b", "alpha") if k in point.estimates]
    draws: dict[str, list[float]] = {k: [] for k in keys}
    failures = 0
    streams = np.random.SeedSequence(seed).spawn(b)
    for stream in streams:
        rng = np.random.default_rng(stream)
        if scheme == "parametric":
            resample = StratumPair(
                _draw_table(*gen_a, rng), _draw_table(*gen_b, rng)
            )
        else:
            resample = StratumPair(
                _resample_observed(data.a, rng), _resample_observed(data.b, rng)
            )
        try:
            refit = apply_method(method, resample, ratio=ratio, fit_config=fit_config)
        except DualrecError:
            failures += 1
            continue
        for k in keys:
            if k in ("n_a", "n_b"):
                draws[k].append(
                    float(refit.diagnostics.get(f"{k}_unrounded", refit.estimates[k]))
                )
            else:
                draws[k].append(float(refit.estimates[k]))

    used = b - failures
    if used == 0:
        raise AllResamplesFailed(f"{method} failed on all {b} resamples")
    se = {}
    ci = {}
    for k in keys:
        vals = np.asarray(draws[k], dtype=float)
        se[k] = float(np.std(vals, ddof=1)) if used > 1 else float("nan")
        ci[k] = empirical_ci(vals)

    diagnostics = dict(point.diagnostics)
    diagnostics.update(
        {"scheme": scheme, "resamples": b, "failures": failures, "seed": seed}
    )
    return EstimateResult(
        method=point.method,
        estimates=dict(point.estimates),
        se=se,
        ci=ci,
        diagnostics=diagnostics,
    )
