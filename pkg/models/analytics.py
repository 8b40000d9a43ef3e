"""Closed-form means, mixed moments and correlations of mosaic fields.

All formulas take the hit probabilities (p_x, p_y, p_xy) of the set family
and the laws of N and U. Write p1 = p_xy, p2 = p_x - p_xy, p3 = p_y - p_xy
and p4 = 1 - p_x - p_y + p_xy for the four cell-pattern probabilities of a
single set.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from models.distributions import CountDistribution, DeterministicCount, ValueDistribution
from models.exceptions import DegenerateModelError, DomainError, InconsistentProbabilitiesError
from models.oracle import enumerate_raw, enumerate_raw_over_count
from models.random_sets import check_hit_probabilities

logger = logging.getLogger(__name__)

CORRELATION_SLACK = 1e-9
PGF_ARGUMENT_TOL = 1e-12
G_KINDS = ("injective", "constant", "max_index")


@dataclass(frozen=True)
class LinearF:
    """|I_I & I_J| = a |I & J| - b |I ^ J| + c."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.b < 0 or self.c < 0:
            raise DomainError(f"LinearF needs b, c >= 0, got b={self.b}, c={self.c}")
        if self.a < -self.b:
            raise DomainError(f"LinearF needs a >= -b, got a={self.a}, b={self.b}")

    def __call__(self, i, j):
        return self.a * np.asarray(i) - self.b * np.asarray(j) + self.c


@dataclass(frozen=True)
class MomentReport:
    mean_x: float
    mean_y: float
    mixed_moment: float
    covariance: float
    correlation: float
    variance_x: float
    variance_y: float

    def __post_init__(self):
        if math.isfinite(self.correlation) and abs(self.correlation) > 1.0 + CORRELATION_SLACK:
            raise InconsistentProbabilitiesError(f"correlation {self.correlation} outside [-1, 1]")

    @classmethod
    def from_raw(cls, raw) -> "MomentReport":
        mean_x, mean_y, mxy, mxx, myy = (float(v) for v in raw)
        var_x = mxx - mean_x ** 2
        var_y = myy - mean_y ** 2
        cov = mxy - mean_x * mean_y
        if var_x > 0 and var_y > 0:
            corr = cov / math.sqrt(var_x * var_y)
        else:
            corr = math.nan
        return cls(mean_x, mean_y, mxy, cov, corr, var_x, var_y)


def _pattern(p_x: float, p_y: float, p_xy: float) -> Tuple[float, float, float, float]:
    check_hit_probabilities(p_x, p_y, p_xy)
    p1 = float(p_xy)
    p2 = max(0.0, p_x - p_xy)
    p3 = max(0.0, p_y - p_xy)
    p4 = max(0.0, 1.0 - p_x - p_y + p_xy)
    return p1, p2, p3, p4


def _pgf_at(count: CountDistribution, t: float) -> float:
    if t < -1.0 - PGF_ARGUMENT_TOL or t > 1.0 + PGF_ARGUMENT_TOL:
        raise InconsistentProbabilitiesError(f"pgf argument {t} outside [-1, 1]")
    return float(count.pgf(min(1.0, max(-1.0, t))))


def _pgf_slope_at(count: CountDistribution, t: float) -> float:
    if t < -1.0 - PGF_ARGUMENT_TOL or t > 1.0 + PGF_ARGUMENT_TOL:
        raise InconsistentProbabilitiesError(f"pgf argument {t} outside [-1, 1]")
    return float(count.pgf_derivative(min(1.0, max(-1.0, t))))


def _term(coefficient: float, factor: Callable[[], float]) -> float:
    # zero coefficients never touch the factor, which may be infinite
    return 0.0 if coefficient == 0 else coefficient * factor()


# ---------------------------------------------------------------------------
# General linear model
# ---------------------------------------------------------------------------

def mean_general(f: LinearF, count: CountDistribution, p_x: float, value: Optional[ValueDistribution] = None) -> float:
    """E Z(x) = E U (a E N p_x + c); the factor E U is dropped when ``value`` is None."""
    if not 0.0 <= p_x <= 1.0:
        raise DomainError(f"p_x must lie in [0, 1], got {p_x}")
    inner = _term(f.a * p_x, lambda: count.mean) + f.c
    if value is None:
        return inner
    return _term(value.mean, lambda: inner)


def _equal_value_mass(f: LinearF, g_kind: str, count: CountDistribution, p1, p2, p3, p4) -> float:
    """sum over (I, J) with g(I) = g(J) of P(x in C_I, y in C_J) |I_I & I_J|, mixed over N."""
    a, b, c = f.a, f.b, f.c
    if g_kind == "injective":
        s = p1 + p4
        return _term(a * p1, lambda: _pgf_slope_at(count, s)) + _term(c, lambda: _pgf_at(count, s))
    if g_kind == "max_index":
        q = p4
        psi_q = _pgf_at(count, q)
        out = c * psi_q
        if p1 == 0.0:
            return out
        gap = 1.0 - q
        kappa = a * p1 - b * (p2 + p3)
        out += p1 * (a + c) * (1.0 - psi_q) / gap
        out += _term(p1 * kappa / gap ** 2, lambda: psi_q - 1.0 + count.mean * gap)
        return out
    raise DomainError(f"unknown g kind {g_kind!r}")


def _mixed_raw(f: LinearF, g_kind: str, count: CountDistribution, p_x, p_y, p_xy, value: ValueDistribution) -> float:
    p1, p2, p3, p4 = _pattern(p_x, p_y, p_xy)
    a, b, c = f.a, f.b, f.c
    shared = _term(a * p1, lambda: count.mean) - _term(b * (p2 + p3), lambda: count.mean) + c
    product = (
        _term(a * a * (p1 - p_x * p_y), lambda: count.mean)
        + _term(a * a * p_x * p_y, lambda: count.second_moment)
        + _term(a * c * (p_x + p_y), lambda: count.mean)
        + c * c
    )
    if g_kind == "constant":
        different = 0.0
    else:
        different = shared - _equal_value_mass(f, g_kind, count, p1, p2, p3, p4)
    return (
        _term(value.variance, lambda: shared - different)
        + _term(value.mean ** 2, lambda: product)
    )


def _check_finite_moments(f: LinearF, count: CountDistribution) -> None:
    if (f.a != 0 or f.b != 0) and not math.isfinite(count.second_moment):
        raise DegenerateModelError(
            f"count {count.kind} has an infinite second moment; a field with a={f.a}, b={f.b} has infinite moments"
        )


def _general_raw(f, g_kind, count, p_x, p_y, p_xy, value) -> np.ndarray:
    if g_kind not in G_KINDS:
        raise DomainError(f"g kind must be one of {', '.join(G_KINDS)}, got {g_kind!r}")
    _check_finite_moments(f, count)
    return np.array([
        mean_general(f, count, p_x, value),
        mean_general(f, count, p_y, value),
        _mixed_raw(f, g_kind, count, p_x, p_y, p_xy, value),
        _mixed_raw(f, g_kind, count, p_x, p_x, p_x, value),
        _mixed_raw(f, g_kind, count, p_y, p_y, p_y, value),
    ])


def mixed_moment_general(f, g_kind: str, count: CountDistribution, p_x, p_y, p_xy, value: ValueDistribution) -> MomentReport:
    """Mean, mixed moment and correlation of the general field at a pair of points.

    ``f`` is a :class:`LinearF` for the closed forms. Any other callable
    f(i, j) is handled by the enumeration oracle mixed over N.
    """
    if isinstance(f, LinearF):
        return MomentReport.from_raw(_general_raw(f, g_kind, count, p_x, p_y, p_xy, value))
    logger.info("no closed form for f=%r, falling back to enumeration", f)
    raw = enumerate_raw_over_count(count, lambda n: f, g_kind, p_x, p_y, p_xy, value)
    return MomentReport.from_raw(raw)


def general_linear_raw(a: int, b: int, c_min: int, g_kind: str, count: CountDistribution, p_x, p_y, p_xy, value) -> np.ndarray:
    """Raw moments for c_n = max(c_min, n b); mixes per-n closed forms when c_n varies."""
    support = count.support_max
    if b == 0 or (support is not None and support * b <= c_min):
        return _general_raw(LinearF(a, b, max(c_min, 0)), g_kind, count, p_x, p_y, p_xy, value)
    if not math.isfinite(count.mean):
        raise DegenerateModelError(f"count {count.kind} has infinite mean; c_n = n b makes the moments infinite")
    table = count.series_table()
    raw = np.zeros(5)
    for n, weight in enumerate(table):
        if weight == 0.0:
            continue
        f = LinearF(a, b, max(c_min, n * b))
        raw += weight * _general_raw(f, g_kind, DeterministicCount(n), p_x, p_y, p_xy, value)
    return raw / table.sum()


def marginal_mean_variance(f: LinearF, g_kind, count, p_x, value) -> Tuple[float, float]:
    raw = _general_raw(f, g_kind, count, p_x, p_x, p_x, value)
    return float(raw[0]), float(raw[3] - raw[0] ** 2)


# ---------------------------------------------------------------------------
# Correlations of the four named submodels
# ---------------------------------------------------------------------------

def corr_simple(p_x, p_y, p_xy, count: CountDistribution) -> float:
    p1, _, _, p4 = _pattern(p_x, p_y, p_xy)
    return _pgf_at(count, p1 + p4)


def _token_constants(count: CountDistribution, value: ValueDistribution) -> Tuple[float, float]:
    if not count.mean > 0:
        raise DegenerateModelError("token field needs E N > 0")
    if not math.isfinite(count.second_moment):
        raise DegenerateModelError(f"token field needs a finite second moment of N, {count.kind} has none")
    a = value.second_moment * count.mean
    b = value.mean ** 2 * (count.variance - count.mean)
    return a, b


def _token_denominator(a, b, p_x, p_y) -> float:
    squared = (a + b * p_x) * (a + b * p_y) * p_x * p_y
    if not squared > 0:
        raise DegenerateModelError("token field variance vanishes at one of the points")
    return math.sqrt(squared)


def corr_token(p_x, p_y, p_xy, count: CountDistribution, value: ValueDistribution) -> float:
    _pattern(p_x, p_y, p_xy)
    a, b = _token_constants(count, value)
    return (a * p_xy + b * p_x * p_y) / _token_denominator(a, b, p_x, p_y)


def corr_mixture(p_x, p_y, p_xy, count: CountDistribution, value: ValueDistribution) -> float:
    p1, _, _, p4 = _pattern(p_x, p_y, p_xy)
    a, b = _token_constants(count, value)
    c = value.variance
    d = value.variance * count.mean
    extra = _term(p_xy, lambda: _term(c, lambda: _pgf_slope_at(count, p1 + p4)) - d)
    return extra / _token_denominator(a, b, p_x, p_y) + corr_token(p_x, p_y, p_xy, count, value)


def corr_deadleaves(p_x, p_y, p_xy, count: CountDistribution) -> float:
    _, _, _, p4 = _pattern(p_x, p_y, p_xy)
    covered = p_x + p_y - p_xy
    if not covered > 0:
        raise DegenerateModelError("dead leaves correlation needs p_x + p_y - p_xy > 0")
    return (p_xy + (p_x + p_y - 2.0 * p_xy) * _pgf_at(count, p4)) / covered


def poisson_mixture_correlation(rho_simple, rho_token, value: ValueDistribution):
    """lambda rho_token rho_simple + (1 - lambda) rho_token with lambda = Var U / E U^2."""
    if not value.second_moment > 0:
        raise DegenerateModelError("value law has E U^2 = 0")
    lam = value.variance / value.second_moment
    rho_simple = np.asarray(rho_simple, dtype=float)
    rho_token = np.asarray(rho_token, dtype=float)
    out = lam * rho_token * rho_simple + (1.0 - lam) * rho_token
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Field models
# ---------------------------------------------------------------------------

# (a, b, c_min, g) describing each named submodel as a general linear field
_SUBMODEL_FORMS = {
    "simple": (0, 0, 1, "injective"),
    "token": (1, 0, 0, "constant"),
    "mixture": (1, 0, 0, "injective"),
    "dead_leaves": (0, 0, 1, "max_index"),
}


def linear_form(submodel) -> Tuple[int, int, int, str]:
    if submodel.kind == "general":
        return submodel.a, submodel.b, submodel.c_min, submodel.g
    return _SUBMODEL_FORMS[submodel.kind]


def hit_probabilities(model, x, y) -> Tuple[float, float, float]:
    p_x = float(model.sets.p_x(x))
    p_y = float(model.sets.p_x(y))
    p_xy = float(model.sets.p_xy(x, y))
    check_hit_probabilities(p_x, p_y, p_xy)
    return p_x, p_y, p_xy


def model_moments(model, x, y) -> MomentReport:
    p_x, p_y, p_xy = hit_probabilities(model, x, y)
    a, b, c_min, g_kind = linear_form(model.submodel)
    raw = general_linear_raw(a, b, c_min, g_kind, model.count, p_x, p_y, p_xy, model.value)
    return MomentReport.from_raw(raw)


def model_correlation(model, x, y) -> float:
    """Correlation of Z(x) and Z(y) through the submodel's own formula."""
    p_x, p_y, p_xy = hit_probabilities(model, x, y)
    kind = model.submodel.kind
    if kind == "simple":
        return corr_simple(p_x, p_y, p_xy, model.count)
    if kind == "token":
        return corr_token(p_x, p_y, p_xy, model.count, model.value)
    if kind == "mixture":
        return corr_mixture(p_x, p_y, p_xy, model.count, model.value)
    if kind == "dead_leaves":
        return corr_deadleaves(p_x, p_y, p_xy, model.count)
    report = model_moments(model, x, y)
    if not math.isfinite(report.correlation):
        raise DegenerateModelError("general field has zero variance at one of the points")
    return report.correlation


def marginal_moments(model, points) -> Tuple[np.ndarray, np.ndarray]:
    """Mean and variance of Z at each point."""
    pts = model.space.check(points)
    a, b, c_min, g_kind = linear_form(model.submodel)
    means = np.empty(pts.shape[0])
    variances = np.empty(pts.shape[0])
    for k, x in enumerate(pts):
        p_x = float(model.sets.p_x(x))
        raw = general_linear_raw(a, b, c_min, g_kind, model.count, p_x, p_x, p_x, model.value)
        means[k] = raw[0]
        variances[k] = raw[3] - raw[0] ** 2
    return means, variances


def enumerate_oracle(n: int, f, g_kind: str, p_x, p_y, p_xy, value: ValueDistribution, family=None) -> MomentReport:
    """Exact moments given N = n (n <= 14) by summing over all pairs of index sets.

    ``f`` gives |I_I & I_J| from (|I & J|, |I ^ J|); alternatively ``family``
    maps an index set to its member ids and overlaps are counted directly.
    """
    return MomentReport.from_raw(enumerate_raw(n, f, g_kind, p_x, p_y, p_xy, value, family))


def enumerate_over_count(count: CountDistribution, f, g_kind: str, p_x, p_y, p_xy, value: ValueDistribution) -> MomentReport:
    return MomentReport.from_raw(enumerate_raw_over_count(count, lambda n: f, g_kind, p_x, p_y, p_xy, value))
