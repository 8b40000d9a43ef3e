"""I.i.d. random closed set families with sampling, membership and hit probabilities.

Every family is bound to the space it lives in. ``p_x = P(x in B)`` and
``p_xy = P(x, y in B)`` are the only channel through which the geometry of
the sets enters the moment formulas, so each family provides them in closed
form (or by the cap-intersection quadrature on spheres of dimension >= 3).
"""
from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional, Tuple, Union

import numpy as np
from scipy import integrate, special

from models.distributions import (
    CosinePolynomial,
    DeterministicRadius,
    Hemisphere,
    RadiusLaw,
    Sironvalle,
    UniformDiameter,
)
from models.exceptions import (
    ConfigurationError,
    DomainError,
    InconsistentProbabilitiesError,
    UnsupportedError,
)
from models.spaces import (
    Cylinder,
    EuclidRect,
    Space,
    Sphere,
    Torus,
    TWO_PI,
    incomplete_beta,
    is_euclid,
    sphere_surface_total,
)

logger = logging.getLogger(__name__)

CAP_QUAD_EPSREL = 1e-10
CAP_QUAD_EPSABS = 1e-13


def _points(space: Space, x) -> np.ndarray:
    return space.check(x)


def _scalar(value):
    arr = np.asarray(value, dtype=float)
    return float(arr) if arr.ndim == 0 else arr


def _first_or_all(value):
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    return float(arr[0]) if arr.size == 1 else arr


# ---------------------------------------------------------------------------
# Planar lens areas, shared by the R^2, cylinder and torus ball families
# ---------------------------------------------------------------------------

def lens_area(t, delta):
    """Area of the intersection of two discs of diameter t with centres delta apart."""
    t = np.asarray(t, dtype=float)
    delta = np.asarray(delta, dtype=float)
    safe_t = np.where(t > 0, t, 1.0)
    ratio = np.clip(delta / safe_t, 0.0, 1.0)
    area = 0.5 * (t ** 2 * np.arccos(ratio) - delta * np.sqrt(np.clip(t ** 2 - delta ** 2, 0.0, None)))
    return _scalar(np.where((delta <= t) & (t > 0), area, 0.0))


def mean_lens_area_uniform(a: float, delta):
    """Mean lens area for a diameter uniform on [0, a]."""
    delta = np.asarray(delta, dtype=float)
    ratio = np.clip(delta / a, 0.0, 1.0)
    root = np.sqrt(np.clip(1.0 - ratio ** 2, 0.0, None))
    # artanh(sqrt(1 - delta^2/a^2)) = log((a + sqrt(a^2 - delta^2)) / delta), finite for delta > 0
    safe = np.where(delta > 0, delta, 1.0)
    log_term = np.where(delta > 0, delta ** 3 / a * np.log(a * (1.0 + root) / safe), 0.0)
    value = (a ** 2 * np.arccos(ratio) - 2.0 * delta * a * root + log_term) / 6.0
    return _scalar(np.where(delta <= a, value, 0.0))


def spherical_correlation(a: float, delta):
    """1 - 3h/(2a) + h^3/(2a^3) on [0, a], zero beyond."""
    t = np.minimum(np.abs(np.asarray(delta, dtype=float)) / a, 1.0)
    return _scalar(1.0 - 0.5 * t * (3.0 - t ** 2))


def mean_lens_area_sironvalle(a: float, delta):
    return _scalar(math.pi * a ** 2 / 6.0 * np.asarray(spherical_correlation(a, delta)))


# ---------------------------------------------------------------------------
# Spherical caps
# ---------------------------------------------------------------------------

def cap_fraction(d: int, r: float) -> float:
    """sigma_d(B_r) / sigma_d(S^d) for a cap of geodesic radius r in [0, pi]."""
    if r <= math.pi / 2.0:
        return 0.5 * float(special.betainc(d / 2.0, 0.5, math.sin(r) ** 2))
    return 1.0 - cap_fraction(d, math.pi - r)


@lru_cache(maxsize=65536)
def _cap_intersection(d: int, r: float, dist: float) -> float:
    if dist > 2.0 * r:
        return 0.0
    if d == 1:
        return max(2.0 * r - dist, 0.0)
    cos_r = math.cos(r)
    half = math.cos(dist / 2.0)
    if cos_r <= 0.0:
        upper = 1.0
    elif half <= 0.0:
        return 0.0
    else:
        upper = math.sqrt(max(0.0, 1.0 - (cos_r / half) ** 2))
    upper = min(upper, math.sin(r))
    exponent = (d - 2) / 2.0

    def integrand(a):
        rest = 1.0 - a * a
        if rest <= 0.0:
            return 0.0
        inner_r = math.acos(min(1.0, max(-1.0, cos_r / math.sqrt(rest))))
        return rest ** exponent * _cap_intersection(d - 1, inner_r, dist)

    # integrand is even in a and vanishes where 2 r(a) < dist
    value, _ = integrate.quad(integrand, 0.0, upper, epsabs=CAP_QUAD_EPSABS, epsrel=CAP_QUAD_EPSREL, limit=200)
    return 2.0 * value


def cap_intersection_area(d: int, r: float, dist: float) -> float:
    """Surface measure of B_r(x) cap B_r(y) on S^d for d(x, y) = dist, r <= pi/2.

    Dimension reduction: the d-dimensional overlap is an integral over
    slices whose (d-1)-dimensional overlaps have radius
    arccos(cos r / sqrt(1 - a^2)); the circle gives the base case (2r - dist)+.
    """
    if d < 1:
        raise DomainError(f"cap_intersection_area: d must be >= 1, got {d}")
    if not 0.0 <= r <= math.pi / 2.0 + 1e-15:
        raise DomainError(f"cap_intersection_area: r must lie in [0, pi/2], got {r}")
    if not 0.0 <= dist <= math.pi + 1e-12:
        raise DomainError(f"cap_intersection_area: dist must lie in [0, pi], got {dist}")
    return _cap_intersection(int(d), float(min(r, math.pi / 2.0)), float(min(dist, math.pi)))


def _cap_pair_s2(r: float, delta: np.ndarray) -> np.ndarray:
    """Closed form for two caps of radius r <= pi/2 on the 2-sphere."""
    cos_r, sin_r = math.cos(r), math.sin(r)
    out = np.zeros_like(delta)
    inside = (delta > 0) & (delta <= 2.0 * r)
    dl = delta[inside]
    first = np.arccos(np.clip((cos_r ** 2 - np.cos(dl)) / sin_r ** 2, -1.0, 1.0)) / (2.0 * math.pi)
    if cos_r > 0:
        sin_d = np.sin(dl)
        with np.errstate(divide="ignore", invalid="ignore"):
            arg = np.where(sin_d > 0, cos_r * (1.0 - np.cos(dl)) / (sin_r * sin_d), 1.0)
        first = first - cos_r / math.pi * np.arccos(np.clip(arg, -1.0, 1.0))
    out[inside] = first
    out[delta == 0] = (1.0 - cos_r) / 2.0
    return np.clip(out, 0.0, None)


def cap_pair_probability(d: int, r: float, delta) -> Union[float, np.ndarray]:
    """P(x, y in B_r(X)) for X uniform on S^d and deterministic r in [0, pi]."""
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    if r > math.pi / 2.0:
        # complement caps of radius pi - r around the antipodes
        out = 2.0 * cap_fraction(d, r) - 1.0 + np.atleast_1d(cap_pair_probability(d, math.pi - r, delta))
        return _first_or_all(out)
    if r == 0.0:
        out = np.zeros_like(delta)
    elif d == 1:
        out = np.clip(r / math.pi - delta / (2.0 * math.pi), 0.0, None)
    elif d == 2:
        out = _cap_pair_s2(r, delta)
    else:
        total = sphere_surface_total(d)
        out = np.array([cap_intersection_area(d, r, float(v)) / total for v in delta])
    return _first_or_all(out)


@lru_cache(maxsize=256)
def cos_polynomial_constant(q: int, l: int, d: int) -> float:
    log_value = (
        -(2 * q + 1) * math.log(2.0)
        + special.gammaln(2 * q + 2)
        + special.gammaln((d + 1) / 2.0)
        - special.gammaln((2 * l + 1) / 2.0)
        - special.gammaln(q - l + 2)
        - special.gammaln((2 * q + d + 2) / 2.0)
    )
    return float(math.exp(log_value))


def cos_polynomial_pair_probability(law: CosinePolynomial, d: int, delta):
    delta = np.asarray(delta, dtype=float)
    s = np.sin(delta / 2.0)
    c = np.cos(delta / 2.0)
    out = np.full(delta.shape, 0.5)
    for q, pq in enumerate(law.p):
        if pq == 0.0:
            continue
        for l in range(1, q + 2):
            out = out - pq * cos_polynomial_constant(q, l, d) * s ** (2 * l - 1) * c ** (2 * (q - l + 1))
    return _scalar(out)


# ---------------------------------------------------------------------------
# Sampled sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SetBatch:
    """n sampled sets of one family; ``params`` arrays share the leading axis n."""

    family: "SetFamily"
    params: Mapping[str, np.ndarray]

    def __len__(self) -> int:
        first = next(iter(self.params.values()))
        return int(np.shape(first)[0])

    def instance(self, i: int) -> "SetInstance":
        return SetInstance(self.family, {k: np.asarray(v[i]) for k, v in self.params.items()})

    @property
    def instances(self):
        return [self.instance(i) for i in range(len(self))]

    def membership(self, points) -> np.ndarray:
        """Boolean (n_sets, n_points) matrix; closed sets, boundaries included."""
        pts = self.family.space.check(points)
        if len(self) == 0:
            return np.zeros((0, pts.shape[0]), dtype=bool)
        return self.family.membership(self.params, pts)


@dataclass(frozen=True, eq=False)
class SetInstance:
    family: "SetFamily"
    params: Mapping[str, np.ndarray]

    def contains(self, x) -> bool:
        batch = {k: np.asarray(v)[None, ...] for k, v in self.params.items()}
        pts = self.family.space.check(x)
        return bool(self.family.membership(batch, pts)[0, 0])


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

class _IsotropicPairs:
    """Families whose p_xy depends on the points only through their distance."""

    def p_xy(self, x, y):
        delta = self.space.distances(_points(self.space, x), _points(self.space, y))
        return _first_or_all(self.pair_from_distance(delta))

    def p_x(self, x):
        X = _points(self.space, x)
        value = float(np.atleast_1d(self.pair_from_distance(np.zeros(1)))[0])
        return value if X.shape[0] == 1 else np.full(X.shape[0], value)


def _unit_vectors(rng: np.random.Generator, size: int, width: int) -> np.ndarray:
    g = rng.standard_normal((size, width))
    norm = np.linalg.norm(g, axis=1, keepdims=True)
    return g / np.where(norm > 0, norm, 1.0)


@dataclass(frozen=True)
class HalfSpace(_IsotropicPairs):
    """H(X, R) = {z : <z, X> >= R}, X uniform on S^(d-1), R uniform on [-C_M, C_M]."""

    space: Space
    C_M: Optional[float] = None
    kind: str = field(default="halfspace", init=False)

    def __post_init__(self):
        if not is_euclid(self.space):
            raise ConfigurationError(f"sets.kind: halfspace requires a Euclidean space, got {self.space.kind}")
        if self.C_M is None:
            object.__setattr__(self, "C_M", self.space.C_M)
        if self.C_M < self.space.C_M * (1.0 - 1e-12):
            raise ConfigurationError(f"sets.C_M: {self.C_M} does not cover the space radius {self.space.C_M}")

    @property
    def omega(self) -> float:
        d = self.space.d
        return 4.0 * math.sqrt(math.pi) * self.C_M * math.exp(special.gammaln((d + 1) / 2.0) - special.gammaln(d / 2.0))

    def sample(self, rng, size) -> SetBatch:
        X = _unit_vectors(rng, size, self.space.d)
        R = rng.uniform(-self.C_M, self.C_M, size)
        return SetBatch(self, {"X": X, "R": R})

    def membership(self, params, pts):
        return params["X"] @ pts.T >= params["R"][:, None]

    def pair_from_distance(self, delta):
        return _scalar(0.5 - np.asarray(delta, dtype=float) / self.omega)

    def p_x(self, x):
        _points(self.space, x)
        return 0.5


@dataclass(frozen=True)
class EuclidBallSets(_IsotropicPairs):
    """B_{D/2}(Y), Y uniform on the ball of radius C_M + a/2, D in [0, a]."""

    space: Space
    a: float
    diameter: RadiusLaw
    C_M: Optional[float] = None
    kind: str = field(default="euclid-ball", init=False)

    def __post_init__(self):
        if not is_euclid(self.space):
            raise ConfigurationError(f"sets.kind: euclid-ball requires a Euclidean space, got {self.space.kind}")
        if not self.a > 0:
            raise ConfigurationError(f"sets.a: must be positive, got {self.a}")
        if not isinstance(self.diameter, (DeterministicRadius, UniformDiameter, Sironvalle)):
            raise ConfigurationError(f"sets.diameter: {self.diameter.kind} is not a diameter law")
        if self.diameter.upper > self.a * (1.0 + 1e-12):
            raise ConfigurationError(f"sets.diameter: support exceeds a = {self.a}")
        if self.C_M is None:
            object.__setattr__(self, "C_M", self.space.C_M)
        if self.C_M < self.space.C_M * (1.0 - 1e-12):
            raise ConfigurationError(f"sets.C_M: {self.C_M} does not cover the space radius {self.space.C_M}")

    @property
    def d(self) -> int:
        return self.space.d

    def sample(self, rng, size) -> SetBatch:
        d = self.d
        direction = _unit_vectors(rng, size, d)
        Y = direction * ((self.C_M + self.a / 2.0) * rng.random(size) ** (1.0 / d))[:, None]
        D = np.asarray(self.diameter.sample(rng, size), dtype=float)
        return SetBatch(self, {"Y": Y, "D": D})

    def membership(self, params, pts):
        dist = np.linalg.norm(params["Y"][:, None, :] - pts[None, :, :], axis=-1)
        return dist <= params["D"][:, None] / 2.0

    def _deterministic(self, t: float, delta: np.ndarray) -> np.ndarray:
        d = self.d
        if t <= 0:
            return np.zeros_like(delta)
        const = math.exp(special.gammaln(d / 2.0 + 1.0) - special.gammaln((d + 1) / 2.0)) / math.sqrt(math.pi)
        const *= (t / (2.0 * self.C_M + self.a)) ** d
        out = np.zeros_like(delta)
        for i, v in enumerate(delta):
            if v <= t:
                x = 1.0 - min(v * v / (t * t), 1.0)
                out[i] = const * incomplete_beta(x, (d + 1) / 2.0, 0.5)
        return out

    def _uniform(self, delta: np.ndarray) -> np.ndarray:
        d, a = self.d, self.a
        omega2 = (d + 1) * math.sqrt(math.pi) * (2.0 * self.C_M + a) ** d
        omega2 *= math.exp(special.gammaln((d + 1) / 2.0) - special.gammaln(d / 2.0 + 1.0))
        out = np.zeros_like(delta)
        for i, v in enumerate(delta):
            if v > a:
                continue
            x = 1.0 - min(v * v / (a * a), 1.0)
            value = a ** d * incomplete_beta(x, (d + 1) / 2.0, 0.5)
            if v > 0 and x > 0:
                value -= v ** (d + 1) / a * incomplete_beta(x, (d + 1) / 2.0, -d / 2.0)
            out[i] = value / omega2
        return out

    def pair_from_distance(self, delta):
        delta = np.atleast_1d(np.asarray(delta, dtype=float))
        law = self.diameter
        if isinstance(law, DeterministicRadius):
            out = self._deterministic(law.value, delta)
        elif isinstance(law, UniformDiameter):
            out = self._uniform(delta)
        else:
            if self.d != 2:
                raise UnsupportedError("Sironvalle diameters have a closed form only in dimension 2")
            out = 2.0 * self.a ** 2 / (3.0 * (2.0 * self.C_M + self.a) ** 2) * np.asarray(
                spherical_correlation(self.a, delta))
        return _scalar(out if out.size > 1 else out[0])


@dataclass(frozen=True)
class Hyperrect:
    """E(Z) = {z : |z_k - Z_k| <= a_k}, Z uniform on prod [-(R_k + a_k), R_k + a_k]."""

    space: Space
    a: Tuple[float, ...]
    R: Optional[Tuple[float, ...]] = None
    kind: str = field(default="hyperrect", init=False)

    def __post_init__(self):
        if not is_euclid(self.space):
            raise ConfigurationError(f"sets.kind: hyperrect requires a Euclidean space, got {self.space.kind}")
        a = tuple(float(v) for v in np.atleast_1d(self.a))
        if len(a) == 1 and self.space.d > 1:
            a = a * self.space.d
        if len(a) != self.space.d or any(not v > 0 for v in a):
            raise ConfigurationError(f"sets.a: need {self.space.d} positive half-widths, got {self.a}")
        object.__setattr__(self, "a", a)
        if self.R is None:
            R = self.space.R if isinstance(self.space, EuclidRect) else (self.space.C_M,) * self.space.d
        else:
            R = tuple(float(v) for v in self.R)
        object.__setattr__(self, "R", tuple(R))
        if len(self.R) != self.space.d:
            raise ConfigurationError(f"sets.R: need {self.space.d} half-widths, got {self.R}")
        cover = self.space.R if isinstance(self.space, EuclidRect) else (self.space.C_M,) * self.space.d
        if any(r < c * (1.0 - 1e-12) for r, c in zip(self.R, cover)):
            raise ConfigurationError(f"sets.R: {self.R} does not cover the space")

    def sample(self, rng, size) -> SetBatch:
        bound = np.asarray(self.R) + np.asarray(self.a)
        return SetBatch(self, {"Z": rng.uniform(-bound, bound, size=(size, len(bound)))})

    def membership(self, params, pts):
        gap = np.abs(params["Z"][:, None, :] - pts[None, :, :])
        return np.all(gap <= np.asarray(self.a), axis=-1)

    def p_xy(self, x, y):
        X = _points(self.space, x)
        Y = _points(self.space, y)
        a = np.asarray(self.a)
        R = np.asarray(self.R)
        factors = np.clip(2.0 * a - np.abs(X - Y), 0.0, None) / (2.0 * (R + a))
        out = np.prod(factors, axis=-1)
        return _scalar(out if out.size > 1 else out[0])

    def p_x(self, x):
        X = _points(self.space, x)
        value = float(np.prod(np.asarray(self.a) / (np.asarray(self.R) + np.asarray(self.a))))
        return value if X.shape[0] == 1 else np.full(X.shape[0], value)

    def pair_from_offset(self, offset) -> Union[float, np.ndarray]:
        """p_xy as a function of the coordinate offsets x - y (shape (..., d))."""
        a = np.asarray(self.a)
        R = np.asarray(self.R)
        off = np.asarray(offset, dtype=float)
        return _scalar(np.prod(np.clip(2.0 * a - np.abs(off), 0.0, None) / (2.0 * (R + a)), axis=-1))


@dataclass(frozen=True)
class SphereCap(_IsotropicPairs):
    """B_R(X), X uniform on S^d."""

    space: Space
    radius: RadiusLaw
    kind: str = field(default="sphere-cap", init=False)

    def __post_init__(self):
        if not isinstance(self.space, Sphere):
            raise ConfigurationError(f"sets.kind: sphere-cap requires a sphere, got {self.space.kind}")
        if not isinstance(self.radius, (DeterministicRadius, Hemisphere, CosinePolynomial)):
            raise ConfigurationError(f"sets.radius: {self.radius.kind} is not a cap radius law")
        if isinstance(self.radius, DeterministicRadius) and not 0.0 <= self.radius.value <= math.pi:
            raise ConfigurationError(f"sets.radius.value: must lie in [0, pi], got {self.radius.value}")

    @property
    def d(self) -> int:
        return self.space.d

    def sample(self, rng, size) -> SetBatch:
        X = _unit_vectors(rng, size, self.d + 1)
        R = np.asarray(self.radius.sample(rng, size), dtype=float)
        return SetBatch(self, {"X": X, "R": R})

    def membership(self, params, pts):
        dist = np.arccos(np.clip(params["X"] @ pts.T, -1.0, 1.0))
        return dist <= params["R"][:, None]

    def pair_from_distance(self, delta):
        delta = np.asarray(delta, dtype=float)
        law = self.radius
        if isinstance(law, Hemisphere):
            return _scalar(0.5 - delta / (2.0 * math.pi))
        if isinstance(law, CosinePolynomial):
            return cos_polynomial_pair_probability(law, self.d, delta)
        return cap_pair_probability(self.d, float(law.value), delta)

    def p_x(self, x):
        X = _points(self.space, x)
        if isinstance(self.radius, DeterministicRadius):
            value = cap_fraction(self.d, float(self.radius.value))
        else:
            value = 0.5
        return value if X.shape[0] == 1 else np.full(X.shape[0], value)


@dataclass(frozen=True)
class _FlatBallSets(_IsotropicPairs, ABC):
    """Balls of diameter D <= a <= pi in a flat quotient of the plane."""

    def _validate(self, expected):
        if not isinstance(self.space, expected):
            raise ConfigurationError(f"sets.kind: {self.kind} requires a {expected.__name__.lower()}, "
                                     f"got {self.space.kind}")
        if not 0.0 < self.a <= math.pi:
            raise ConfigurationError(f"sets.a: must lie in (0, pi] so a ball cannot overlap itself, got {self.a}")
        if not isinstance(self.diameter, (DeterministicRadius, UniformDiameter, Sironvalle)):
            raise ConfigurationError(f"sets.diameter: {self.diameter.kind} is not a diameter law")
        if self.diameter.upper > self.a * (1.0 + 1e-12):
            raise ConfigurationError(f"sets.diameter: support exceeds a = {self.a}")

    @property
    @abstractmethod
    def area(self) -> float:
        """Measure of the region the ball centres are drawn from."""

    @abstractmethod
    def sample(self, rng, size) -> SetBatch: ...

    def membership(self, params, pts):
        dist = self.space.distances(params["X"][:, None, :], pts[None, :, :])
        return dist <= params["D"][:, None] / 2.0

    def pair_from_distance(self, delta):
        delta = np.asarray(delta, dtype=float)
        law = self.diameter
        if isinstance(law, DeterministicRadius):
            lens = lens_area(law.value, delta)
        elif isinstance(law, UniformDiameter):
            lens = mean_lens_area_uniform(self.a, delta)
        else:
            lens = mean_lens_area_sironvalle(self.a, delta)
        return _scalar(np.asarray(lens) / self.area)


@dataclass(frozen=True)
class CylinderBall(_FlatBallSets):
    space: Space
    a: float
    diameter: RadiusLaw
    kind: str = field(default="cylinder-ball", init=False)

    def __post_init__(self):
        self._validate(Cylinder)

    @property
    def area(self) -> float:
        return TWO_PI * (self.space.h + self.a)

    def sample(self, rng, size) -> SetBatch:
        angle = np.mod(rng.uniform(0.0, TWO_PI, size), TWO_PI)
        height = rng.uniform(-self.a / 2.0, self.space.h + self.a / 2.0, size)
        D = np.asarray(self.diameter.sample(rng, size), dtype=float)
        return SetBatch(self, {"X": np.column_stack([angle, height]), "D": D})


@dataclass(frozen=True)
class TorusBall(_FlatBallSets):
    space: Space
    a: float
    diameter: RadiusLaw
    kind: str = field(default="torus-ball", init=False)

    def __post_init__(self):
        self._validate(Torus)

    @property
    def area(self) -> float:
        return TWO_PI ** 2

    def sample(self, rng, size) -> SetBatch:
        X = np.mod(rng.uniform(0.0, TWO_PI, size=(size, 2)), TWO_PI)
        D = np.asarray(self.diameter.sample(rng, size), dtype=float)
        return SetBatch(self, {"X": X, "D": D})


SetFamily = Union[HalfSpace, EuclidBallSets, Hyperrect, SphereCap, CylinderBall, TorusBall]
ISOTROPIC_KINDS = ("halfspace", "euclid-ball", "sphere-cap", "cylinder-ball", "torus-ball")


def sample_set(fam: SetFamily, rng: np.random.Generator) -> SetInstance:
    return fam.sample(rng, 1).instance(0)


def contains(s: SetInstance, x) -> bool:
    return s.contains(x)


def hit_prob_single(fam: SetFamily, x) -> float:
    """p_x = P(x in B)."""
    return fam.p_x(x)


def hit_prob_pair(fam: SetFamily, x, y) -> float:
    """p_xy = P(x, y in B)."""
    return fam.p_xy(x, y)


def check_hit_probabilities(p_x, p_y, p_xy, tol: float = 1e-9) -> None:
    lower = max(0.0, p_x + p_y - 1.0)
    upper = min(p_x, p_y)
    if not (lower - tol <= p_xy <= upper + tol) or not (0.0 <= p_x <= 1.0 and 0.0 <= p_y <= 1.0):
        raise InconsistentProbabilitiesError(
            f"hit probabilities (p_x={p_x}, p_y={p_y}, p_xy={p_xy}) violate the bounds [{lower}, {upper}]"
        )
