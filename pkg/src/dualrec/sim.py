"""Simulation designs, data generation, and replicate studies.

Designs are specified by the two list-inclusion marginals ``(p1dot, pdot1)``
per stratum plus a dependence level ``alpha``; the latent List 2 probability
is recovered from the marginal, so infeasible (marginal, alpha) combinations
are rejected at design construction.  Six standard marginal pairs ship as
presets P1..P6.

Under a Model I design the reference stratum B is generated with independent
lists (``alpha = 0``); under Model II both strata share the design's alpha.

Replicates use one child stream per replicate index spawned from the design
seed, so results are bit-identical whether replicates run serially or across
worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .classical import lincoln_petersen, nour, wolter_model1, wolter_model2
from .core import (
    AllReplicatesFailed,
    BbmParams,
    DidNotConverge,
    DomainError,
    DrsTable,
    DualrecError,
    EstimateResult,
    StratumPair,
    empirical_ci,
)
from .mle import FitConfig, mle_model_i, mle_model_ii
from .mme import mme_model_i, mme_model_ii
from .model import DependenceSign, cell_probabilities, p2_from_marginal

PRESETS: dict[str, tuple[float, float]] = {
    "P1": (0.60, 0.80),
    "P2": (0.60, 0.70),
    "P3": (0.80, 0.55),
    "P4": (0.80, 0.70),
    "P5": (0.50, 0.75),
    "P6": (0.50, 0.60),
}

ESTIMATORS = (
    "LP",
    "NOUR",
    "MME-I",
    "MLE-I",
    "MME-II",
    "MLE-II",
    "WOLTER-1",
    "WOLTER-2",
)


@dataclass(frozen=True)
class DesignPoint:
    """One simulation design: marginals per stratum, dependence, sizes."""

    p1dot_a: float
    pdot1_a: float
    p1dot_b: float
    pdot1_b: float
    alpha: float
    n_a: int
    n_b: int
    model: str = "I"
    replicates: int = 5000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.model not in ("I", "II"):
            raise DomainError(f"model must be 'I' or 'II', got {self.model!r}")
        if self.n_a <= 0 or self.n_b <= 0:
            raise DomainError("population sizes must be positive")
        if self.replicates <= 0:
            raise DomainError("replicates must be positive")
        # force the feasibility check: p2 of each stratum must exist
        self.params_a()
        self.params_b()

    def params_a(self) -> BbmParams:
        p2 = p2_from_marginal(self.pdot1_a, self.p1dot_a, self.alpha)
        return BbmParams(p1=self.p1dot_a, p2=p2, alpha=self.alpha, n=self.n_a)

    def params_b(self) -> BbmParams:
        alpha_b = 0.0 if self.model == "I" else self.alpha
        p2 = p2_from_marginal(self.pdot1_b, self.p1dot_b, alpha_b)
        return BbmParams(p1=self.p1dot_b, p2=p2, alpha=alpha_b, n=self.n_b)


def design_from_preset(
    preset: str,
    model: str,
    n_a: int,
    n_b: int,
    alpha: float,
    replicates: int = 5000,
    seed: int = 0,
) -> DesignPoint:
    """Build a DesignPoint from one of the named marginal presets."""
    if preset not in PRESETS:
        raise DomainError(
            f"unknown preset {preset!r}; valid presets: {', '.join(sorted(PRESETS))}"
        )
    p1dot, pdot1 = PRESETS[preset]
    return DesignPoint(
        p1dot_a=p1dot,
        pdot1_a=pdot1,
        p1dot_b=p1dot,
        pdot1_b=pdot1,
        alpha=alpha,
        n_a=n_a,
        n_b=n_b,
        model=model,
        replicates=replicates,
        seed=seed,
    )


def generate_stratum(
    params: BbmParams,
    sign: DependenceSign = DependenceSign.POSITIVE,
    mode: str = "multinomial",
    rng: np.random.Generator | None = None,
) -> DrsTable:
    """Draw one stratum's observed table from the dependent-capture model.

    ``mode="multinomial"`` draws the four cells in one multinomial;
    ``mode="individual"`` simulates each individual's latent draws and
    tabulates, which is slower but serves as a distributional cross-check.
    """
    if rng is None:
        rng = np.random.default_rng()
    n = int(round(params.n))
    if mode == "multinomial":
        cells = cell_probabilities(params, sign)
        x11, x10, x01, _ = rng.multinomial(n, cells.as_tuple())
        return DrsTable(int(x11), int(x10), int(x01))
    if mode == "individual":
        tied = rng.random(n) < params.alpha
        x1 = rng.random(n) < params.p1
        x2 = rng.random(n) < params.p2
        y = x1
        if sign is DependenceSign.POSITIVE:
            z = np.where(tied, x1, x2)
        else:
            z = np.where(tied, ~x1, x2)
        x11 = int(np.sum(y & z))
        x10 = int(np.sum(y & ~z))
        x01 = int(np.sum(~y & z))
        return DrsTable(x11, x10, x01)
    raise DomainError(f"unknown generation mode {mode!r}")


def generate_pair(design: DesignPoint, rng: np.random.Generator) -> StratumPair:
    """Draw both strata of one replicate under the design."""
    a = generate_stratum(design.params_a(), rng=rng)
    b = generate_stratum(design.params_b(), rng=rng)
    return StratumPair(a, b)


# ---------------------------------------------------------------------------
# Method dispatch shared by studies, the bootstrap, and the CLI
# ---------------------------------------------------------------------------


def apply_method(
    method: str,
    pair: StratumPair,
    ratio: float | None = None,
    fit_config: FitConfig | None = None,
) -> EstimateResult:
    """Apply one named estimator to a stratum pair.

    Single-stratum methods (LP, NOUR) are applied to each stratum and
    reported as ``n_a`` / ``n_b``.  Ratio-linked methods require ``ratio``.
    A likelihood fit that stops short of its tolerance raises
    :class:`DidNotConverge` so callers can count it as a failure.
    """
    if method == "LP":
        ra, rb = lincoln_petersen(pair.a), lincoln_petersen(pair.b)
        return EstimateResult(
            method="LP",
            estimates={"n_a": ra.estimates["n"], "n_b": rb.estimates["n"]},
            diagnostics={
                "n_a_unrounded": ra.diagnostics["n_unrounded"],
                "n_b_unrounded": rb.diagnostics["n_unrounded"],
            },
        )
    if method == "NOUR":
        ra, rb = nour(pair.a), nour(pair.b)
        return EstimateResult(
            method="NOUR",
            estimates={"n_a": ra.estimates["n"], "n_b": rb.estimates["n"]},
            diagnostics={
                "n_a_unrounded": ra.diagnostics["n_unrounded"],
                "n_b_unrounded": rb.diagnostics["n_unrounded"],
            },
        )
    if method == "MME-I":
        return mme_model_i(pair)
    if method == "MME-II":
        return mme_model_ii(pair)
    if method in ("MLE-I", "MLE-II"):
        cfg = fit_config or FitConfig()
        if ratio is not None:
            cfg = replace(cfg, known_ratio=ratio)
        fit = mle_model_i(pair, cfg) if method == "MLE-I" else mle_model_ii(pair, cfg)
        if not fit.diagnostics.get("converged", True):
            raise DidNotConverge(f"{method} stopped before meeting tolerance")
        return fit
    if method in ("WOLTER-1", "WOLTER-2"):
        if ratio is None:
            raise DomainError(f"{method} requires a known size ratio")
        fn = wolter_model1 if method == "WOLTER-1" else wolter_model2
        return fn(pair, ratio)
    raise DomainError(f"unknown estimator {method!r}; valid: {', '.join(ESTIMATORS)}")


# ---------------------------------------------------------------------------
# Replicate studies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EstimatorStudy:
    """Replicate aggregates for one estimator under one design."""

    mean_n_a: float
    rrmse_n_a: float
    ci_n_a: tuple[float, float]
    mean_n_b: float
    rrmse_n_b: float
    ci_n_b: tuple[float, float]
    mean_alpha: float | None
    failures: int
    used: int


@dataclass(frozen=True)
class StudySummary:
    """All estimator aggregates for one design."""

    design: DesignPoint
    estimators: dict[str, EstimatorStudy]


def _replicate_values(
    design: DesignPoint, methods: tuple[str, ...], fit_config, lo: int, hi: int
):
    """Run replicates [lo, hi) and return per-method value triples."""
    root = np.random.SeedSequence(design.seed)
    streams = root.spawn(design.replicates)
    ratio = design.n_a / design.n_b
    out = {m: [] for m in methods}
    for i in range(lo, hi):
        rng = np.random.default_rng(streams[i])
        pair = generate_pair(design, rng)
        for m in methods:
            try:
                fit = apply_method(m, pair, ratio=ratio if m.startswith("WOLTER") else None,
                                   fit_config=fit_config)
            except DualrecError:
                out[m].append((i, math.nan, math.nan, math.nan))
                continue
            d, e = fit.diagnostics, fit.estimates
            na = d.get("n_a_unrounded", e.get("n_a", math.nan))
            nb = d.get("n_b_unrounded", e.get("n_b", math.nan))
            alpha = e.get("alpha", math.nan)
            out[m].append((i, na, nb, alpha))
    return out


def run_study(
    design: DesignPoint,
    estimators=("MME-I", "NOUR"),
    fit_config: FitConfig | None = None,
    threads: int = 1,
) -> StudySummary:
    """Run the design's replicates and aggregate each estimator.

    Per estimator: means of the unrounded size estimates, relative root mean
    squared error against the design truth, empirical 2.5/97.5 percentile
    intervals, the mean dependence estimate where the method produces one,
    and the count of failed replicates (infeasible, condition-violating, or
    non-converged fits), which are excluded from all aggregates.
    """
    methods = tuple(estimators)
    for m in methods:
        if m not in ESTIMATORS:
            raise DomainError(f"unknown estimator {m!r}; valid: {', '.join(ESTIMATORS)}")
    reps = design.replicates
    if threads > 1:
        chunk = max(1, math.ceil(reps / threads))
        ranges = [(lo, min(lo + chunk, reps)) for lo in range(0, reps, chunk)]
        parts = []
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_replicate_values, design, methods, fit_config, lo, hi)
                for lo, hi in ranges
            ]
            parts = [f.result() for f in futures]
        rows = {m: [] for m in methods}
        for part in parts:
            for m in methods:
                rows[m].extend(part[m])
        for m in methods:
            rows[m].sort(key=lambda rec: rec[0])
    else:
        rows = _replicate_values(design, methods, fit_config, 0, reps)

    summaries = {}
    for m in methods:
        recs = rows[m]
        na = np.array([r[1] for r in recs])
        nb = np.array([r[2] for r in recs])
        al = np.array([r[3] for r in recs])
        ok = ~np.isnan(na)
        failures = int(reps - ok.sum())
        if failures == reps:
            raise AllReplicatesFailed(f"{m} failed on all {reps} replicates")
        na, nb, al = na[ok], nb[ok], al[ok]
        has_alpha = not bool(np.isnan(al).all())

        def agg(values: np.ndarray, truth: float):
            mean = float(math.fsum(values) / len(values))
            rrmse = float(math.sqrt(math.fsum((values - truth) ** 2) / len(values)) / truth)
            return mean, rrmse, empirical_ci(values)

        mean_a, rrmse_a, ci_a = agg(na, design.n_a)
        mean_b, rrmse_b, ci_b = agg(nb, design.n_b)
        summaries[m] = EstimatorStudy(
            mean_n_a=mean_a,
            rrmse_n_a=rrmse_a,
            ci_n_a=ci_a,
            mean_n_b=mean_b,
            rrmse_n_b=rrmse_b,
            ci_n_b=ci_b,
            mean_alpha=float(math.fsum(al) / len(al)) if has_alpha else None,
            failures=failures,
            used=int(ok.sum()),
        )
    return StudySummary(design=design, estimators=summaries)
