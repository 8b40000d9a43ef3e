"""Laws of the set count N, the cell values U and set radii/diameters.

Each law exposes the functionals the moment and correlation formulas need:
the probability generating function and its derivative, the first two
moments, an exact pmf table, and a sampler taking an explicit
``numpy.random.Generator``.
"""
from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy import signal, special, stats

from models.exceptions import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

PGF_TOL = 1e-12
POWER_ALPHA_TAIL = 1e-12
POWER_ALPHA_MAX_TABLE = 2**22
SERIES_MASS = 1.0 - 1e-12
SERIES_MAX_TERMS = 10**6
_FFT_THRESHOLD = 512


def _check_pgf_argument(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < -1.0 - PGF_TOL) or np.any(arr > 1.0 + PGF_TOL) or np.any(np.isnan(arr)):
        raise DomainError(f"pgf argument must lie in [-1, 1], got {t}")
    return np.clip(arr, -1.0, 1.0)


def _scalar_or_array(value):
    arr = np.asarray(value, dtype=float)
    return float(arr) if arr.ndim == 0 else arr


def _truncated_convolve(a: np.ndarray, b: np.ndarray, length: int) -> np.ndarray:
    if min(len(a), len(b)) > _FFT_THRESHOLD:
        out = signal.fftconvolve(a, b)[:length]
        return np.clip(out, 0.0, None)
    return np.convolve(a, b)[:length]


# ---------------------------------------------------------------------------
# Count laws
# ---------------------------------------------------------------------------

class CountDistribution(ABC):
    kind: str = "count"

    def pgf(self, t):
        """E[t^N] for t in [-1, 1] (scalar or array)."""
        return _scalar_or_array(self._pgf(_check_pgf_argument(t)))

    def pgf_derivative(self, t):
        """psi_N'(t); at t=1 this is E[N] and may be infinite."""
        return _scalar_or_array(self._pgf_derivative(_check_pgf_argument(t)))

    @abstractmethod
    def _pgf(self, t: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _pgf_derivative(self, t: np.ndarray) -> np.ndarray: ...

    @property
    @abstractmethod
    def mean(self) -> float: ...

    @property
    @abstractmethod
    def variance(self) -> float: ...

    @property
    def second_moment(self) -> float:
        return self.variance + self.mean ** 2

    @property
    def support_max(self) -> Optional[int]:
        return None

    @abstractmethod
    def pmf_table(self, k_max: int) -> np.ndarray:
        """P(N = k) for k = 0..k_max, not renormalised."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: Optional[int] = None): ...

    def series_table(self, mass: float = SERIES_MASS, max_terms: int = SERIES_MAX_TERMS) -> np.ndarray:
        """pmf up to the first k where the cumulative mass reaches ``mass``.

        Used where an expectation over N has no pgf form. Logs a warning when
        ``max_terms`` is hit first.
        """
        if self.support_max is not None and self.support_max < max_terms:
            return self.pmf_table(self.support_max)
        k_max = 64
        while True:
            k_max = min(k_max, max_terms - 1)
            table = self.pmf_table(k_max)
            cum = np.cumsum(table)
            hit = np.nonzero(cum >= mass)[0]
            if hit.size:
                return table[: hit[0] + 1]
            if k_max >= max_terms - 1:
                logger.warning(
                    "%s: series truncated at %d terms with mass %.3g short of target",
                    self.kind, max_terms, mass - cum[-1],
                )
                return table
            k_max *= 4

    def truncated(self, k_max: int) -> "TableCount":
        """Law conditioned on N <= k_max, as a renormalised table."""
        table = self.pmf_table(int(k_max))
        total = table.sum()
        if total <= 0:
            raise DomainError(f"{self.kind}: no mass on 0..{k_max}")
        return TableCount(tuple(table / total))

    def check_not_degenerate(self) -> None:
        if self.pmf_table(0)[0] >= 1.0:
            raise ConfigurationError(f"count: {self.kind} is almost surely zero")


@dataclass(frozen=True)
class Poisson(CountDistribution):
    lam: float
    kind: str = field(default="poisson", init=False)

    def __post_init__(self):
        if not self.lam > 0 or not math.isfinite(self.lam):
            raise ConfigurationError(f"count.lam: must be positive and finite, got {self.lam}")

    def _pgf(self, t):
        return np.exp(self.lam * (t - 1.0))

    def _pgf_derivative(self, t):
        return self.lam * np.exp(self.lam * (t - 1.0))

    @property
    def mean(self):
        return float(self.lam)

    @property
    def variance(self):
        return float(self.lam)

    def pmf_table(self, k_max):
        return stats.poisson.pmf(np.arange(k_max + 1), self.lam)

    def sample(self, rng, size=None):
        return rng.poisson(self.lam, size=size)


@dataclass(frozen=True)
class Geometric(CountDistribution):
    """Number of trials up to and including the first success, support {1, 2, ...}."""

    p: float
    kind: str = field(default="geometric", init=False)

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ConfigurationError(f"count.p: must lie in (0, 1], got {self.p}")

    def _pgf(self, t):
        return self.p * t / (1.0 - (1.0 - self.p) * t)

    def _pgf_derivative(self, t):
        return self.p / (1.0 - (1.0 - self.p) * t) ** 2

    @property
    def mean(self):
        return 1.0 / self.p

    @property
    def variance(self):
        return (1.0 - self.p) / self.p ** 2

    def pmf_table(self, k_max):
        return stats.geom.pmf(np.arange(k_max + 1), self.p)

    def sample(self, rng, size=None):
        return rng.geometric(self.p, size=size)


@dataclass(frozen=True)
class Binomial(CountDistribution):
    n: int
    p: float
    kind: str = field(default="binomial", init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"count.n: must be a positive integer, got {self.n}")
        if not 0.0 < self.p <= 1.0:
            raise ConfigurationError(f"count.p: must lie in (0, 1], got {self.p}")

    def _pgf(self, t):
        return (1.0 - self.p + self.p * t) ** self.n

    def _pgf_derivative(self, t):
        return self.n * self.p * (1.0 - self.p + self.p * t) ** (self.n - 1)

    @property
    def mean(self):
        return self.n * self.p

    @property
    def variance(self):
        return self.n * self.p * (1.0 - self.p)

    @property
    def support_max(self):
        return int(self.n)

    def pmf_table(self, k_max):
        return stats.binom.pmf(np.arange(k_max + 1), self.n, self.p)

    def sample(self, rng, size=None):
        return rng.binomial(self.n, self.p, size=size)


@dataclass(frozen=True)
class NegativeBinomial(CountDistribution):
    """Failures before the r-th success; pgf (p / (1 - (1-p) t))^r on N_0."""

    r: float
    p: float
    kind: str = field(default="negative_binomial", init=False)

    def __post_init__(self):
        if not self.r > 0:
            raise ConfigurationError(f"count.r: must be positive, got {self.r}")
        if not 0.0 < self.p < 1.0:
            raise ConfigurationError(f"count.p: must lie in (0, 1), got {self.p}")

    def _pgf(self, t):
        return (self.p / (1.0 - (1.0 - self.p) * t)) ** self.r

    def _pgf_derivative(self, t):
        q = 1.0 - self.p
        return self.r * q * self.p ** self.r * (1.0 - q * t) ** (-self.r - 1.0)

    @property
    def mean(self):
        return self.r * (1.0 - self.p) / self.p

    @property
    def variance(self):
        return self.r * (1.0 - self.p) / self.p ** 2

    def pmf_table(self, k_max):
        return stats.nbinom.pmf(np.arange(k_max + 1), self.r, self.p)

    def sample(self, rng, size=None):
        return rng.negative_binomial(self.r, self.p, size=size)


@lru_cache(maxsize=16)
def _power_alpha_pmf(alpha: float, k_max: int) -> np.ndarray:
    table = np.zeros(k_max + 1)
    if k_max >= 1:
        k = np.arange(1, k_max, dtype=float)
        factors = np.concatenate([[alpha], (k - alpha) / (k + 1.0)])
        table[1:] = np.cumprod(factors)
    table.setflags(write=False)
    return table


def _power_alpha_tail(alpha: float, k):
    """P(K > k), closed form through log-gamma."""
    if alpha == 1.0:
        return np.where(np.asarray(k) >= 1, 0.0, 1.0)
    k = np.asarray(k, dtype=float)
    return np.exp(special.gammaln(k + 1.0 - alpha) - special.gammaln(1.0 - alpha) - special.gammaln(k + 1.0))


@lru_cache(maxsize=16)
def _power_alpha_sampling_cdf(alpha: float) -> np.ndarray:
    if alpha == 1.0:
        return np.array([0.0, 1.0])
    k = 1
    while k < POWER_ALPHA_MAX_TABLE and _power_alpha_tail(alpha, k) >= POWER_ALPHA_TAIL:
        k *= 2
    k = min(k, POWER_ALPHA_MAX_TABLE)
    cdf = np.cumsum(_power_alpha_pmf(alpha, k))
    tail = 1.0 - cdf[-1]
    if tail > POWER_ALPHA_TAIL:
        logger.info("power-alpha(%g): table capped at %d entries, tail mass %.3g lumped", alpha, k, tail)
    cdf[-1] = 1.0
    cdf.setflags(write=False)
    return cdf


@dataclass(frozen=True)
class PowerAlpha(CountDistribution):
    """Count on {1, 2, ...} with pgf 1 - (1 - t)^alpha."""

    alpha: float
    kind: str = field(default="power_alpha", init=False)

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"power-alpha: alpha must lie in (0, 1], got {self.alpha}")

    def _pgf(self, t):
        return 1.0 - (1.0 - t) ** self.alpha

    def _pgf_derivative(self, t):
        if self.alpha == 1.0:
            return np.ones_like(t)
        gap = 1.0 - t
        with np.errstate(divide="ignore"):
            return np.where(gap > 0, self.alpha * np.power(np.where(gap > 0, gap, 1.0), self.alpha - 1.0), np.inf)

    @property
    def mean(self):
        return 1.0 if self.alpha == 1.0 else math.inf

    @property
    def variance(self):
        return 0.0 if self.alpha == 1.0 else math.inf

    def pmf_table(self, k_max):
        return np.array(_power_alpha_pmf(float(self.alpha), int(k_max)))

    def tail_mass(self, k: int) -> float:
        return float(_power_alpha_tail(float(self.alpha), k))

    def sample(self, rng, size=None):
        cdf = _power_alpha_sampling_cdf(float(self.alpha))
        u = rng.random(size)
        return np.searchsorted(cdf, u, side="right").astype(np.int64)


def power_alpha(alpha: float) -> PowerAlpha:
    return PowerAlpha(float(alpha))


@dataclass(frozen=True)
class Compound(CountDistribution):
    """N = K_1 + ... + K_L with L independent of the i.i.d. K_l."""

    outer: CountDistribution
    inner: CountDistribution
    kind: str = field(default="compound", init=False)

    def _pgf(self, t):
        return self.outer._pgf(self.inner._pgf(t))

    def _pgf_derivative(self, t):
        inner = self.inner._pgf(t)
        outer_slope = self.outer._pgf_derivative(inner)
        inner_slope = self.inner._pgf_derivative(t)
        with np.errstate(invalid="ignore"):
            out = outer_slope * inner_slope
        return np.where(outer_slope == 0, 0.0, out)

    @property
    def mean(self):
        return self.outer.mean * self.inner.mean

    @property
    def variance(self):
        if math.isinf(self.inner.mean) or math.isinf(self.outer.mean):
            return math.inf
        return self.outer.mean * self.inner.variance + self.outer.variance * self.inner.mean ** 2

    @property
    def support_max(self):
        if self.outer.support_max is None or self.inner.support_max is None:
            return None
        return self.outer.support_max * self.inner.support_max

    def pmf_table(self, k_max):
        length = k_max + 1
        inner = np.zeros(length)
        inner_table = self.inner.pmf_table(k_max)
        inner[: len(inner_table)] = inner_table[:length]
        outer = self.outer.series_table(mass=1.0 - 1e-14)
        out = np.zeros(length)
        power = np.zeros(length)
        power[0] = 1.0
        # sum_l P(L=l) * (inner pmf)^{*l}, truncated to k_max
        for l, weight in enumerate(outer):
            if l > 0:
                power = _truncated_convolve(power, inner, length)
            out += weight * power
            if inner[0] == 0.0 and l >= k_max:
                break
        return out

    def sample(self, rng, size=None):
        shape = () if size is None else size
        counts = np.asarray(self.outer.sample(rng, size=shape), dtype=np.int64)
        flat = counts.ravel()
        total = int(flat.sum())
        draws = np.asarray(self.inner.sample(rng, size=total), dtype=np.int64)
        owners = np.repeat(np.arange(flat.size), flat)
        sums = np.bincount(owners, weights=draws, minlength=flat.size).astype(np.int64)
        if size is None:
            return int(sums[0])
        return sums.reshape(counts.shape)


@dataclass(frozen=True)
class DeterministicCount(CountDistribution):
    n: int
    kind: str = field(default="deterministic", init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ConfigurationError(f"count.n: must be a non-negative integer, got {self.n}")

    def _pgf(self, t):
        return t ** self.n

    def _pgf_derivative(self, t):
        if self.n == 0:
            return np.zeros_like(t)
        return self.n * t ** (self.n - 1)

    @property
    def mean(self):
        return float(self.n)

    @property
    def variance(self):
        return 0.0

    @property
    def support_max(self):
        return int(self.n)

    def pmf_table(self, k_max):
        table = np.zeros(k_max + 1)
        if self.n <= k_max:
            table[self.n] = 1.0
        return table

    def sample(self, rng, size=None):
        if size is None:
            return int(self.n)
        return np.full(size, int(self.n), dtype=np.int64)


@dataclass(frozen=True)
class TableCount(CountDistribution):
    """Finite-support law given by its pmf on 0..len(pmf)-1."""

    pmf: Tuple[float, ...]
    kind: str = field(default="table", init=False)

    def __post_init__(self):
        table = np.asarray(self.pmf, dtype=float)
        if table.ndim != 1 or table.size == 0:
            raise ConfigurationError("count.pmf: must be a non-empty list")
        if np.any(table < 0):
            raise ConfigurationError("count.pmf: entries must be non-negative")
        total = table.sum()
        if abs(total - 1.0) > 1e-9:
            raise ConfigurationError(f"count.pmf: entries must sum to 1, got {total}")
        object.__setattr__(self, "pmf", tuple(float(v) for v in table / total))

    @property
    def _coefficients(self) -> np.ndarray:
        return np.asarray(self.pmf)

    def _pgf(self, t):
        return np.polynomial.polynomial.polyval(t, self._coefficients)

    def _pgf_derivative(self, t):
        return np.polynomial.polynomial.polyval(t, np.polynomial.polynomial.polyder(self._coefficients))

    @property
    def mean(self):
        k = np.arange(len(self.pmf))
        return float(k @ self._coefficients)

    @property
    def variance(self):
        k = np.arange(len(self.pmf))
        return float((k ** 2) @ self._coefficients - self.mean ** 2)

    @property
    def support_max(self):
        return len(self.pmf) - 1

    def pmf_table(self, k_max):
        table = np.zeros(k_max + 1)
        n = min(k_max + 1, len(self.pmf))
        table[:n] = self._coefficients[:n]
        return table

    def sample(self, rng, size=None):
        cdf = np.cumsum(self._coefficients)
        cdf[-1] = 1.0
        u = rng.random(size)
        out = np.searchsorted(cdf, u, side="right")
        return int(out) if size is None else out.astype(np.int64)


# ---------------------------------------------------------------------------
# Value laws
# ---------------------------------------------------------------------------

class ValueDistribution(ABC):
    """Law of the cell values U. Draws go through the quantile function so
    that the i-th value of a stream is the i-th uniform of that stream."""

    kind: str = "value"

    @property
    @abstractmethod
    def mean(self) -> float: ...

    @property
    @abstractmethod
    def variance(self) -> float: ...

    @property
    def second_moment(self) -> float:
        return self.variance + self.mean ** 2

    @abstractmethod
    def from_uniform(self, u: np.ndarray) -> np.ndarray: ...

    def sample(self, rng: np.random.Generator, size: Optional[int] = None):
        values = self.from_uniform(np.atleast_1d(rng.random(size)))
        return float(values[0]) if size is None else values


@dataclass(frozen=True)
class Gaussian(ValueDistribution):
    mu: float
    sigma2: float
    kind: str = field(default="gaussian", init=False)

    def __post_init__(self):
        if not self.sigma2 >= 0 or not math.isfinite(self.sigma2):
            raise ConfigurationError(f"value.variance: must be finite and >= 0, got {self.sigma2}")

    @property
    def mean(self):
        return float(self.mu)

    @property
    def variance(self):
        return float(self.sigma2)

    def from_uniform(self, u):
        if self.sigma2 == 0:
            return np.full(np.shape(u), float(self.mu))
        # shift the 2^-53 grid of [0, 1) to bin midpoints so u = 0 stays finite
        mid = np.asarray(u, dtype=float) + 2.0 ** -54
        return stats.norm.ppf(mid, loc=self.mu, scale=math.sqrt(self.sigma2))


@dataclass(frozen=True)
class UniformValue(ValueDistribution):
    low: float
    high: float
    kind: str = field(default="uniform", init=False)

    def __post_init__(self):
        if not self.high >= self.low:
            raise ConfigurationError(f"value.high: must be >= low, got [{self.low}, {self.high}]")

    @property
    def mean(self):
        return 0.5 * (self.low + self.high)

    @property
    def variance(self):
        return (self.high - self.low) ** 2 / 12.0

    def from_uniform(self, u):
        return self.low + (self.high - self.low) * np.asarray(u)


@dataclass(frozen=True)
class TwoPoint(ValueDistribution):
    """``high`` with probability p, ``low`` otherwise."""

    low: float
    high: float
    p: float
    kind: str = field(default="two_point", init=False)

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ConfigurationError(f"value.p: must lie in [0, 1], got {self.p}")

    @property
    def mean(self):
        return self.low + self.p * (self.high - self.low)

    @property
    def variance(self):
        return self.p * (1.0 - self.p) * (self.high - self.low) ** 2

    def from_uniform(self, u):
        return np.where(np.asarray(u) < self.p, float(self.high), float(self.low))


@dataclass(frozen=True)
class DeterministicValue(ValueDistribution):
    value: float
    kind: str = field(default="deterministic", init=False)

    @property
    def mean(self):
        return float(self.value)

    @property
    def variance(self):
        return 0.0

    def from_uniform(self, u):
        return np.full(np.shape(u), float(self.value))


# ---------------------------------------------------------------------------
# Radius and diameter laws
# ---------------------------------------------------------------------------

class RadiusLaw(ABC):
    kind: str = "radius"

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: Optional[int] = None): ...

    @property
    @abstractmethod
    def upper(self) -> float:
        """Right end of the support."""


@dataclass(frozen=True)
class DeterministicRadius(RadiusLaw):
    value: float
    kind: str = field(default="deterministic", init=False)

    def __post_init__(self):
        if not self.value >= 0 or not math.isfinite(self.value):
            raise ConfigurationError(f"radius.value: must be finite and >= 0, got {self.value}")

    @property
    def upper(self):
        return float(self.value)

    @property
    def mean(self):
        return float(self.value)

    def sample(self, rng, size=None):
        if size is None:
            return float(self.value)
        return np.full(size, float(self.value))


@dataclass(frozen=True)
class Sironvalle(RadiusLaw):
    """Diameter law F(x) = (a - sqrt(a^2 - x^2)) / a on [0, a]."""

    a: float
    kind: str = field(default="sironvalle", init=False)

    def __post_init__(self):
        if not self.a > 0:
            raise ConfigurationError(f"diameter.a: must be positive, got {self.a}")

    @property
    def upper(self):
        return float(self.a)

    @property
    def mean(self):
        return self.a * math.pi / 4.0

    @property
    def second_moment(self):
        return 2.0 * self.a ** 2 / 3.0

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, self.a)
        return (self.a - np.sqrt(self.a ** 2 - x ** 2)) / self.a

    def sample(self, rng, size=None):
        u = rng.random(size)
        return self.a * np.sqrt(1.0 - (1.0 - u) ** 2)


@dataclass(frozen=True)
class UniformDiameter(RadiusLaw):
    a: float
    kind: str = field(default="uniform", init=False)

    def __post_init__(self):
        if not self.a > 0:
            raise ConfigurationError(f"diameter.a: must be positive, got {self.a}")

    @property
    def upper(self):
        return float(self.a)

    @property
    def mean(self):
        return 0.5 * self.a

    def sample(self, rng, size=None):
        return self.a * rng.random(size)


@dataclass(frozen=True)
class CosinePolynomial(RadiusLaw):
    """Cap radius R whose cosine has CDF F_Q(t) = 1/2 + sum_q p_q t^(2q+1) on [-1, 1]."""

    p: Tuple[float, ...]
    kind: str = field(default="cos_polynomial", init=False)

    def __post_init__(self):
        coeffs = tuple(float(v) for v in self.p)
        object.__setattr__(self, "p", coeffs)
        if not coeffs:
            raise ConfigurationError("radius.p: at least one coefficient is required")
        if any(v < 0 for v in coeffs):
            raise ConfigurationError(f"radius.p: coefficients must be >= 0, got {coeffs}")
        if abs(sum(coeffs) - 0.5) > 1e-12:
            raise ConfigurationError(f"radius.p: coefficients must sum to 1/2, got {sum(coeffs)}")

    @property
    def Q(self) -> int:
        return len(self.p) - 1

    @property
    def upper(self):
        return math.pi

    def cdf(self, t):
        t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)
        out = np.full(t.shape, 0.5)
        for q, pq in enumerate(self.p):
            out = out + pq * t ** (2 * q + 1)
        return out

    def density(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        for q, pq in enumerate(self.p):
            out = out + pq * (2 * q + 1) * t ** (2 * q)
        return np.where(np.abs(t) <= 1.0, out, 0.0)

    def quantile(self, u, tol: float = 1e-12) -> np.ndarray:
        """Solve F_Q(T) = u by vectorised bisection, polished with Newton steps."""
        u = np.asarray(u, dtype=float)
        lo = np.full(u.shape, -1.0)
        hi = np.full(u.shape, 1.0)
        while np.max(hi - lo, initial=0.0) > 1e-6:
            mid = 0.5 * (lo + hi)
            below = self.cdf(mid) < u
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        t = 0.5 * (lo + hi)
        for _ in range(50):
            slope = self.density(t)
            step = np.where(slope > 0, (self.cdf(t) - u) / np.where(slope > 0, slope, 1.0), 0.0)
            t_new = np.clip(t - step, lo, hi)
            # flat spots of F_Q: fall back to the bracket midpoint
            t_new = np.where(slope > 0, t_new, 0.5 * (lo + hi))
            converged = np.max(np.abs(t_new - t), initial=0.0) <= tol
            t = t_new
            if converged:
                break
        return t

    def sample(self, rng, size=None):
        u = rng.random(size)
        t = self.quantile(np.atleast_1d(u))
        r = np.arccos(np.clip(t, -1.0, 1.0))
        return float(r[0]) if size is None else r


@dataclass(frozen=True)
class Hemisphere(RadiusLaw):
    kind: str = field(default="hemisphere", init=False)

    @property
    def upper(self):
        return math.pi / 2.0

    def sample(self, rng, size=None):
        if size is None:
            return math.pi / 2.0
        return np.full(size, math.pi / 2.0)


def sample_count(dist: CountDistribution, rng: np.random.Generator) -> int:
    return int(dist.sample(rng))


def sample_value(dist: ValueDistribution, rng: np.random.Generator) -> float:
    return float(dist.sample(rng))


def sample_radius(law: RadiusLaw, rng: np.random.Generator) -> float:
    return float(law.sample(rng))
