"""Index sets M, their metrics and the special functions of the hit probabilities.

Points are numpy arrays. Euclidean points carry their d coordinates, sphere
points are unit vectors in R^(d+1), cylinder points are (angle, height) and
torus points (angle, angle), angles in [0, 2*pi).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np
from scipy import integrate, special

from models.exceptions import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
UNIT_NORM_TOL = 1e-12
BOUND_TOL = 1e-12


def circle_distance(u, v):
    delta = np.abs(np.asarray(u, dtype=float) - np.asarray(v, dtype=float)) % TWO_PI
    return np.minimum(delta, TWO_PI - delta)


def _as_points(x, width: int) -> np.ndarray:
    pts = np.asarray(x, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != width:
        raise DomainError(f"expected points with {width} coordinates, got shape {np.shape(x)}")
    if not np.all(np.isfinite(pts)):
        raise DomainError("points must have finite coordinates")
    return pts


def _check_angles(angles: np.ndarray, what: str) -> None:
    if np.any(angles < 0.0) or np.any(angles >= TWO_PI):
        raise DomainError(f"{what} must lie in [0, 2*pi)")


@dataclass(frozen=True)
class EuclidBall:
    d: int
    C_M: float
    kind: str = field(default="euclid-ball", init=False)

    def __post_init__(self):
        if self.d < 1:
            raise ConfigurationError(f"space.d: dimension must be >= 1, got {self.d}")
        if not self.C_M > 0:
            raise ConfigurationError(f"space.C_M: must be positive, got {self.C_M}")

    @property
    def width(self) -> int:
        return self.d

    @property
    def radius(self) -> float:
        return float(self.C_M)

    def check(self, x) -> np.ndarray:
        pts = _as_points(x, self.width)
        if np.any(np.linalg.norm(pts, axis=1) > self.C_M * (1.0 + BOUND_TOL)):
            raise DomainError(f"point outside the ball of radius {self.C_M}")
        return pts

    def distances(self, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.linalg.norm(np.asarray(X) - np.asarray(y), axis=-1)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        direction = rng.standard_normal((size, self.d))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        scale = self.C_M * rng.random(size) ** (1.0 / self.d)
        return direction * scale[:, None]

    @property
    def diameter(self) -> float:
        return 2.0 * self.C_M


@dataclass(frozen=True)
class EuclidRect:
    R: Tuple[float, ...]
    kind: str = field(default="euclid-rect", init=False)

    def __post_init__(self):
        object.__setattr__(self, "R", tuple(float(r) for r in self.R))
        if not self.R:
            raise ConfigurationError("space.R: at least one half-width is required")
        if any(not r > 0 for r in self.R):
            raise ConfigurationError(f"space.R: half-widths must be positive, got {self.R}")

    @property
    def d(self) -> int:
        return len(self.R)

    @property
    def width(self) -> int:
        return self.d

    @property
    def C_M(self) -> float:
        # radius of the smallest centred ball containing the rectangle
        return float(np.linalg.norm(self.R))

    def check(self, x) -> np.ndarray:
        pts = _as_points(x, self.width)
        bound = np.asarray(self.R) * (1.0 + BOUND_TOL)
        if np.any(np.abs(pts) > bound):
            raise DomainError(f"point outside the rectangle with half-widths {self.R}")
        return pts

    def distances(self, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.linalg.norm(np.asarray(X) - np.asarray(y), axis=-1)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        R = np.asarray(self.R)
        return rng.uniform(-R, R, size=(size, self.d))

    @property
    def diameter(self) -> float:
        return 2.0 * self.C_M


@dataclass(frozen=True)
class Sphere:
    d: int
    kind: str = field(default="sphere", init=False)

    def __post_init__(self):
        if self.d < 1:
            raise ConfigurationError(f"space.d: dimension must be >= 1, got {self.d}")

    @property
    def width(self) -> int:
        return self.d + 1

    def check(self, x) -> np.ndarray:
        pts = _as_points(x, self.width)
        if np.any(np.abs(np.linalg.norm(pts, axis=1) - 1.0) > UNIT_NORM_TOL):
            raise DomainError("sphere points must be unit vectors")
        return pts

    def distances(self, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.arccos(np.clip(np.sum(np.asarray(X) * np.asarray(y), axis=-1), -1.0, 1.0))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        g = rng.standard_normal((size, self.width))
        return g / np.linalg.norm(g, axis=1, keepdims=True)

    @property
    def diameter(self) -> float:
        return math.pi


@dataclass(frozen=True)
class Cylinder:
    h: float
    kind: str = field(default="cylinder", init=False)

    def __post_init__(self):
        if not self.h > 0:
            raise ConfigurationError(f"space.h: height must be positive, got {self.h}")

    d = 2
    width = 2

    def check(self, x) -> np.ndarray:
        pts = _as_points(x, self.width)
        _check_angles(pts[:, 0], "cylinder angle")
        if np.any(pts[:, 1] < 0.0) or np.any(pts[:, 1] > self.h):
            raise DomainError(f"cylinder height must lie in [0, {self.h}]")
        return pts

    def distances(self, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.hypot(circle_distance(X[..., 0], y[..., 0]), X[..., 1] - y[..., 1])

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.column_stack([np.mod(rng.uniform(0.0, TWO_PI, size), TWO_PI), rng.uniform(0.0, self.h, size)])

    @property
    def diameter(self) -> float:
        return math.hypot(math.pi, self.h)


@dataclass(frozen=True)
class Torus:
    kind: str = field(default="torus", init=False)

    d = 2
    width = 2

    def check(self, x) -> np.ndarray:
        pts = _as_points(x, self.width)
        _check_angles(pts, "torus angles")
        return pts

    def distances(self, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.hypot(circle_distance(X[..., 0], y[..., 0]), circle_distance(X[..., 1], y[..., 1]))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.mod(rng.uniform(0.0, TWO_PI, size=(size, 2)), TWO_PI)

    @property
    def diameter(self) -> float:
        return math.pi * math.sqrt(2.0)


Space = Union[EuclidBall, EuclidRect, Sphere, Cylinder, Torus]
EUCLID_KINDS = ("euclid-ball", "euclid-rect")


def is_euclid(space: Space) -> bool:
    return space.kind in EUCLID_KINDS


def distance(space: Space, x, y) -> float:
    """Metric of ``space`` between two single points."""
    px = space.check(x)[0]
    py = space.check(y)[0]
    return float(space.distances(px[None, :], py)[0])


def sample_uniform_point(space: Space, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Uniform point(s) w.r.t. volume or surface measure; shape (width,) or (size, width)."""
    if size is None:
        return space.sample(rng, 1)[0]
    return space.sample(rng, int(size))


def lonlat_to_unit(lon, lat) -> np.ndarray:
    """Unit vectors on the 2-sphere from longitude/latitude in radians."""
    lon = np.asarray(lon, dtype=float)
    lat = np.asarray(lat, dtype=float)
    return np.stack([np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)], axis=-1)


def sphere_surface_total(d: int) -> float:
    """Total surface measure of the unit sphere S^d."""
    if d < 1:
        raise DomainError(f"sphere dimension must be >= 1, got {d}")
    return 2.0 * math.pi ** ((d + 1) / 2.0) / math.gamma((d + 1) / 2.0)


def incomplete_beta(x: float, a: float, b: float) -> float:
    """Unnormalised incomplete beta B_x(a, b) = int_0^x t^(a-1) (1-t)^(b-1) dt.

    ``b`` may be zero or negative as long as ``x < 1``; that branch integrates
    after the substitution t = 1 - exp(-w), which removes the endpoint
    singularity of the integrand.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"incomplete_beta: x must lie in [0, 1], got {x}")
    if not a > 0:
        raise DomainError(f"incomplete_beta: a must be positive, got {a}")
    if b <= 0 and x >= 1.0:
        raise DomainError(f"incomplete_beta: integral diverges at x=1 for b={b}")
    if x == 0.0:
        return 0.0
    if b > 0:
        return float(special.betainc(a, b, x) * special.beta(a, b))

    upper = -math.log1p(-x)

    def integrand(w):
        return (-math.expm1(-w)) ** (a - 1.0) * math.exp(-w * b)

    value, abserr = integrate.quad(integrand, 0.0, upper, epsabs=1e-14, epsrel=1e-10, limit=200)
    logger.debug("incomplete_beta(%g, %g, %g) = %.17g (+/- %.2g)", x, a, b, value, abserr)
    return float(value)


def points_at_distance(space: Space, delta: float) -> Tuple[np.ndarray, np.ndarray]:
    """A pair of points of ``space`` at distance ``delta``, placed along the first axis."""
    delta = float(delta)
    if delta < 0 or delta > space.diameter * (1.0 + BOUND_TOL):
        raise DomainError(f"distance {delta} outside [0, {space.diameter}] for {space.kind}")
    if is_euclid(space):
        x = np.zeros(space.d)
        y = np.zeros(space.d)
        x[0], y[0] = -delta / 2.0, delta / 2.0
    elif isinstance(space, Sphere):
        x = np.zeros(space.width)
        y = np.zeros(space.width)
        x[0] = 1.0
        y[0], y[1] = math.cos(delta), math.sin(delta)
    elif isinstance(space, Cylinder):
        if delta > math.pi:
            raise DomainError(f"cylinder pairs along the circle need distance <= pi, got {delta}")
        x = np.array([0.0, space.h / 2.0])
        y = np.array([delta, space.h / 2.0])
    else:
        if delta > math.pi:
            raise DomainError(f"torus pairs along one circle need distance <= pi, got {delta}")
        x = np.zeros(2)
        y = np.array([delta, 0.0])
    return space.check(x)[0], space.check(y)[0]
