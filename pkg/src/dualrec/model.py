"""Dependent-capture probability model for one stratum, and joint likelihoods.

Model
-----
Each individual carries latent Bernoulli draws ``X1 ~ Bern(p1)`` and
``X2 ~ Bern(p2)``.  With probability ``alpha`` the List 2 outcome is tied
to the List 1 outcome, otherwise the two lists act independently:

* positive dependence: ``(Y, Z) = (X1, X1)`` w.p. ``alpha``, else ``(X1, X2)``
* negative dependence: ``(Y, Z) = (X1, 1 - X1)`` w.p. ``alpha``, else ``(X1, X2)``

``alpha = 0`` recovers two independent lists.  Under positive dependence the
cell probabilities are

    p11 = alpha*p1 + (1-alpha)*p1*p2        p10 = (1-alpha)*p1*(1-p2)
    p01 = (1-alpha)*(1-p1)*p2               p00 = alpha*(1-p1) + (1-alpha)*(1-p1)*(1-p2)

with marginals ``P(Y=1) = p1``, ``P(Z=1) = alpha*p1 + (1-alpha)*p2`` and
covariance ``+alpha*p1*(1-p1)``; the negative variant flips the tied outcome,
giving covariance ``-alpha*p1*(1-p1)``.

Two-stratum structures
----------------------
* Model I: stratum A follows the dependent model, stratum B has independent
  lists (``alpha = 0``), and both strata share the List 1 probability ``p1``.
* Model II: both strata follow the dependent model with a shared ``p1`` and a
  shared dependence parameter ``alpha0``; the List 2 probabilities ``p2a``,
  ``p2b`` remain stratum-specific.

The log-likelihoods below treat the population sizes as continuous via
log-gamma, which is what the fitting routines optimise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from scipy.special import digamma

from .core import (
    BbmParams,
    CellProbabilities,
    DegenerateDependence,
    DomainError,
    DrsTable,
    InfeasibleN,
    MtbParams,
    OutOfRange,
    StratumPair,
    log_factorial,
)


class DependenceSign(Enum):
    """Direction of the list dependence induced by the tied outcome."""

    POSITIVE = "positive"
    NEGATIVE = "negative"


class Marginals(NamedTuple):
    p_y: float
    p_z: float
    cov: float


def cell_probabilities(
    params: BbmParams, sign: DependenceSign = DependenceSign.POSITIVE
) -> CellProbabilities:
    """Cell probabilities of the full 2x2 table for one stratum."""
    p1, p2, a = params.p1, params.p2, params.alpha
    if sign is DependenceSign.POSITIVE:
        return CellProbabilities(
            p11=a * p1 + (1.0 - a) * p1 * p2,
            p10=(1.0 - a) * p1 * (1.0 - p2),
            p01=(1.0 - a) * (1.0 - p1) * p2,
            p00=a * (1.0 - p1) + (1.0 - a) * (1.0 - p1) * (1.0 - p2),
        )
    return CellProbabilities(
        p11=(1.0 - a) * p1 * p2,
        p10=a * p1 + (1.0 - a) * p1 * (1.0 - p2),
        p01=a * (1.0 - p1) + (1.0 - a) * (1.0 - p1) * p2,
        p00=(1.0 - a) * (1.0 - p1) * (1.0 - p2),
    )


def marginals_and_covariance(
    params: BbmParams, sign: DependenceSign = DependenceSign.POSITIVE
) -> Marginals:
    """List-inclusion marginals and the between-list covariance."""
    p1, p2, a = params.p1, params.p2, params.alpha
    if sign is DependenceSign.POSITIVE:
        return Marginals(p1, a * p1 + (1.0 - a) * p2, a * p1 * (1.0 - p1))
    return Marginals(p1, a * (1.0 - p1) + (1.0 - a) * p2, -a * p1 * (1.0 - p1))


def to_mtb(params: BbmParams) -> MtbParams:
    """Map a positively dependent stratum to its behavioural-response form.

    The dependent model with ``alpha < 1`` is observationally equivalent to
    a first-capture probability ``p = (1-alpha)*p2`` and recapture
    probability ``c = p11 / p1``, i.e. a response ratio
    ``phi = 1 + alpha / ((1-alpha)*p2) >= 1``.
    """
    if params.alpha >= 1.0:
        raise DegenerateDependence("alpha = 1 has no finite response ratio")
    p = (1.0 - params.alpha) * params.p2
    phi = 1.0 + params.alpha / p
    return MtbParams(p1dot=params.p1, p=p, c=phi * p, phi=phi)


def p2_from_marginal(p_dot1: float, p1: float, alpha: float) -> float:
    """Recover the latent List 2 probability from a target List 2 marginal.

    Inverts ``p_dot1 = alpha*p1 + (1-alpha)*p2`` (positive dependence).
    Raises :class:`OutOfRange` when the implied ``p2`` is not in ``(0, 1]``,
    which signals an infeasible (marginal, alpha) combination.
    """
    if alpha >= 1.0:
        raise DegenerateDependence("alpha = 1 leaves p2 unidentified")
    p2 = (p_dot1 - alpha * p1) / (1.0 - alpha)
    if p2 > 1.0 and p2 <= 1.0 + 1e-12:  # float fuzz on an exact boundary
        p2 = 1.0
    if not 0.0 < p2 <= 1.0:
        raise OutOfRange(
            f"marginal {p_dot1} with p1={p1}, alpha={alpha} implies p2={p2}, "
            "outside (0, 1]"
        )
    return p2


# ---------------------------------------------------------------------------
# Joint parameter types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelIParams:
    """Model I parameters: dependent stratum A, independent stratum B."""

    n_a: float
    n_b: float
    alpha_a: float
    p1: float
    p2a: float
    p2b: float

    def __post_init__(self) -> None:
        for name in ("p1", "p2a", "p2b"):
            p = getattr(self, name)
            if not 0.0 < p < 1.0:
                raise DomainError(f"{name} must be in (0,1), got {p}")
        if not 0.0 <= self.alpha_a <= 1.0:
            raise DomainError(f"alpha_a must be in [0,1], got {self.alpha_a}")
        if self.n_a <= 0 or self.n_b <= 0:
            raise DomainError("population sizes must be positive")


@dataclass(frozen=True)
class ModelIIParams:
    """Model II parameters: both strata dependent with shared alpha0."""

    n_a: float
    n_b: float
    alpha0: float
    p1: float
    p2a: float
    p2b: float

    def __post_init__(self) -> None:
        for name in ("p1", "p2a", "p2b"):
            p = getattr(self, name)
            if not 0.0 < p < 1.0:
                raise DomainError(f"{name} must be in (0,1), got {p}")
        if not 0.0 <= self.alpha0 <= 1.0:
            raise DomainError(f"alpha0 must be in [0,1], got {self.alpha0}")
        if self.n_a <= 0 or self.n_b <= 0:
            raise DomainError("population sizes must be positive")


# ---------------------------------------------------------------------------
# Log-likelihoods
# ---------------------------------------------------------------------------


def _xlog(coef: float, x: float) -> float:
    # coef * log(x) with the 0 * log(0) = 0 convention
    if coef == 0.0:
        return 0.0
    if x <= 0.0:
        return -math.inf
    return coef * math.log(x)


def _lfac_ratio(n: float, x0: int, mode: str) -> float:
    # log( n! / (n - x0)! ), n treated as continuous.  Exact mode goes via
    # log-gamma directly so the continuous extension stays defined on the
    # open region n > x0 - 1 that the optimiser's transform exposes; the
    # Stirling forms have no continuation below n = x0, so that region is
    # walled off.
    if mode == "exact":
        v = n - x0 + 1.0
        if v <= 0.0:
            # n - x0 + 1 underflows to 0 when the optimiser pins n at its
            # transform floor; the likelihood limit there is -inf
            return -math.inf
        return math.lgamma(n + 1.0) - math.lgamma(v)
    if n - x0 < 0.0:
        return -math.inf
    return log_factorial(n, mode) - log_factorial(n - x0, mode)


def _dlfac_ratio(n: float, x0: int, mode: str) -> float:
    # d/dn of _lfac_ratio, matching each mode's own functional form; the
    # Stirling branches floor n - x0 away from zero so the derivative keeps
    # pointing away from the wall instead of overflowing.
    if mode == "exact":
        return float(digamma(n + 1.0) - digamma(max(n - x0 + 1.0, 1e-12)))
    v = max(n - x0, 1e-12)
    if mode == "stirling1":
        return math.log(n) - math.log(v)
    if mode == "stirling3":
        return math.log(n) + 0.5 / n - math.log(v) - 0.5 / v
    raise DomainError(f"unknown log-factorial mode {mode!r}")


def _check_feasible(n_a: float, n_b: float, pair: StratumPair) -> None:
    if n_a < pair.a.x0:
        raise InfeasibleN(f"n_a = {n_a} < observed x0A = {pair.a.x0}")
    if n_b < pair.b.x0:
        raise InfeasibleN(f"n_b = {n_b} < observed x0B = {pair.b.x0}")


def _loglik_i_raw(
    n_a: float,
    n_b: float,
    alpha: float,
    p1: float,
    p2a: float,
    p2b: float,
    pair: StratumPair,
    mode: str,
) -> float:
    # Continuous extension used by the optimiser; callers guarantee
    # n_k > x0k - 1 so the log-gamma arguments stay positive.
    A, B = pair.a, pair.b
    q11 = alpha + (1.0 - alpha) * p2a          # p11A = p1 * q11
    q00 = alpha + (1.0 - alpha) * (1.0 - p2a)  # p00A = (1-p1) * q00
    out = _lfac_ratio(n_a, A.x0, mode) + _lfac_ratio(n_b, B.x0, mode)
    out += _xlog(A.x11, p1 * q11)
    out += _xlog(A.x10 + B.x11 + B.x10, p1)
    out += _xlog(A.x01 + n_b - B.x11 - B.x10, 1.0 - p1)
    out += _xlog(A.x01, p2a)
    out += _xlog(B.x11 + B.x01, p2b)
    out += _xlog(A.x10, 1.0 - p2a)
    out += _xlog(n_b - B.x11 - B.x01, 1.0 - p2b)
    out += _xlog(A.x10 + A.x01, 1.0 - alpha)
    out += _xlog(n_a - A.x0, (1.0 - p1) * q00)
    return out


def loglik_model_i(
    theta: ModelIParams, data: StratumPair, logfac: str = "exact"
) -> float:
    """Joint log-likelihood of Model I at ``theta`` for the observed pair.

    Population sizes are treated as continuous (log-gamma factorials); the
    ``logfac`` mode selects exact, first-order or three-term approximations
    of the log-factorial terms.
    """
    _check_feasible(theta.n_a, theta.n_b, data)
    return _loglik_i_raw(
        theta.n_a, theta.n_b, theta.alpha_a, theta.p1, theta.p2a, theta.p2b,
        data, logfac,
    )


def _loglik_ii_raw(
    n_a: float,
    n_b: float,
    alpha: float,
    p1: float,
    p2a: float,
    p2b: float,
    pair: StratumPair,
    mode: str,
) -> float:
    A, B = pair.a, pair.b
    r11a = alpha + (1.0 - alpha) * p2a
    r00a = alpha + (1.0 - alpha) * (1.0 - p2a)
    r11b = alpha + (1.0 - alpha) * p2b
    r00b = alpha + (1.0 - alpha) * (1.0 - p2b)
    out = _lfac_ratio(n_a, A.x0, mode) + _lfac_ratio(n_b, B.x0, mode)
    out += _xlog(A.x11, p1 * r11a) + _xlog(B.x11, p1 * r11b)
    out += _xlog(A.x10 + B.x10, p1)
    out += _xlog(A.x01 + B.x01, 1.0 - p1)
    out += _xlog(A.x01, p2a) + _xlog(B.x01, p2b)
    out += _xlog(A.x10, 1.0 - p2a) + _xlog(B.x10, 1.0 - p2b)
    out += _xlog(A.x10 + A.x01 + B.x10 + B.x01, 1.0 - alpha)
    out += _xlog(n_a - A.x0, (1.0 - p1) * r00a)
    out += _xlog(n_b - B.x0, (1.0 - p1) * r00b)
    return out


def loglik_model_ii(
    theta: ModelIIParams, data: StratumPair, logfac: str = "exact"
) -> float:
    """Joint log-likelihood of Model II at ``theta`` for the observed pair."""
    _check_feasible(theta.n_a, theta.n_b, data)
    return _loglik_ii_raw(
        theta.n_a, theta.n_b, theta.alpha0, theta.p1, theta.p2a, theta.p2b,
        data, logfac,
    )


# ---------------------------------------------------------------------------
# Analytic gradients (exact log-gamma mode), natural parameter scale
# ---------------------------------------------------------------------------


def _grad_i_raw(
    n_a: float,
    n_b: float,
    alpha: float,
    p1: float,
    p2a: float,
    p2b: float,
    pair: StratumPair,
    mode: str = "exact",
) -> list[float]:
    A, B = pair.a, pair.b
    q11 = alpha + (1.0 - alpha) * p2a
    q00 = alpha + (1.0 - alpha) * (1.0 - p2a)
    d_na = _dlfac_ratio(n_a, A.x0, mode) + math.log((1.0 - p1) * q00)
    d_nb = (
        _dlfac_ratio(n_b, B.x0, mode)
        + math.log(1.0 - p1)
        + math.log(1.0 - p2b)
    )
    d_alpha = (
        A.x11 * (1.0 - p2a) / q11
        - (A.x10 + A.x01) / (1.0 - alpha)
        + (n_a - A.x0) * p2a / q00
    )
    d_p1 = (A.x11 + A.x10 + B.x11 + B.x10) / p1 - (
        A.x01 + n_b - B.x11 - B.x10 + n_a - A.x0
    ) / (1.0 - p1)
    d_p2a = (
        A.x11 * (1.0 - alpha) / q11
        + A.x01 / p2a
        - A.x10 / (1.0 - p2a)
        - (n_a - A.x0) * (1.0 - alpha) / q00
    )
    d_p2b = (B.x11 + B.x01) / p2b - (n_b - B.x11 - B.x01) / (1.0 - p2b)
    return [float(d_na), float(d_nb), float(d_alpha), float(d_p1), float(d_p2a), float(d_p2b)]


def loglik_model_i_grad(
    theta: ModelIParams, data: StratumPair, logfac: str = "exact"
) -> list[float]:
    """Gradient of the Model I log-likelihood at ``theta``.

    Components follow the order ``(n_a, n_b, alpha_a, p1, p2a, p2b)`` on the
    natural parameter scale; the size derivatives match the ``logfac`` mode
    used for the objective.
    """
    _check_feasible(theta.n_a, theta.n_b, data)
    return _grad_i_raw(
        theta.n_a, theta.n_b, theta.alpha_a, theta.p1, theta.p2a, theta.p2b,
        data, logfac,
    )


def _grad_ii_raw(
    n_a: float,
    n_b: float,
    alpha: float,
    p1: float,
    p2a: float,
    p2b: float,
    pair: StratumPair,
    mode: str = "exact",
) -> list[float]:
    A, B = pair.a, pair.b
    r11a = alpha + (1.0 - alpha) * p2a
    r00a = alpha + (1.0 - alpha) * (1.0 - p2a)
    r11b = alpha + (1.0 - alpha) * p2b
    r00b = alpha + (1.0 - alpha) * (1.0 - p2b)
    d_na = _dlfac_ratio(n_a, A.x0, mode) + math.log((1.0 - p1) * r00a)
    d_nb = _dlfac_ratio(n_b, B.x0, mode) + math.log((1.0 - p1) * r00b)
    d_alpha = (
        A.x11 * (1.0 - p2a) / r11a
        + B.x11 * (1.0 - p2b) / r11b
        - (A.x10 + A.x01 + B.x10 + B.x01) / (1.0 - alpha)
        + (n_a - A.x0) * p2a / r00a
        + (n_b - B.x0) * p2b / r00b
    )
    d_p1 = (A.x11 + B.x11 + A.x10 + B.x10) / p1 - (
        A.x01 + B.x01 + n_a - A.x0 + n_b - B.x0
    ) / (1.0 - p1)
    d_p2a = (
        A.x11 * (1.0 - alpha) / r11a
        + A.x01 / p2a
        - A.x10 / (1.0 - p2a)
        - (n_a - A.x0) * (1.0 - alpha) / r00a
    )
    d_p2b = (
        B.x11 * (1.0 - alpha) / r11b
        + B.x01 / p2b
        - B.x10 / (1.0 - p2b)
        - (n_b - B.x0) * (1.0 - alpha) / r00b
    )
    return [float(d_na), float(d_nb), float(d_alpha), float(d_p1), float(d_p2a), float(d_p2b)]


def loglik_model_ii_grad(
    theta: ModelIIParams, data: StratumPair, logfac: str = "exact"
) -> list[float]:
    """Gradient of the Model II log-likelihood, ordered like Model I's."""
    _check_feasible(theta.n_a, theta.n_b, data)
    return _grad_ii_raw(
        theta.n_a, theta.n_b, theta.alpha0, theta.p1, theta.p2a, theta.p2b,
        data, logfac,
    )
