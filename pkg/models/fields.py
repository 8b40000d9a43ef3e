"""Mosaic random fields: realizations and pointwise evaluation.

A realization stores the sampled count, the sampled sets and the values
that are attached to individual sets. Values attached to cells are never
stored: they are drawn on demand from a stream keyed by the cell's index
set, so Z(x) is a pure function of the realization and x.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from models.analytics import G_KINDS, marginal_moments
from models.distributions import CountDistribution, ValueDistribution
from models.exceptions import ConfigurationError, DegenerateModelError, DomainError
from models.random_sets import SetBatch, SetFamily
from models.spaces import Cylinder, EuclidBall, EuclidRect, Space, Sphere, Torus, TWO_PI, lonlat_to_unit
from utils.randomness import KeyedGenerator, encode_index_set

logger = logging.getLogger(__name__)

IndexSet = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Submodels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimpleMosaic:
    kind: str = field(default="simple", init=False)


@dataclass(frozen=True)
class RandomToken:
    kind: str = field(default="token", init=False)


@dataclass(frozen=True)
class Mixture:
    kind: str = field(default="mixture", init=False)


@dataclass(frozen=True)
class DeadLeaves:
    kind: str = field(default="dead_leaves", init=False)


@dataclass(frozen=True)
class GeneralLinear:
    """f_n(i, j) = a i - b j + c_n with c_n = max(c_min, n b)."""

    a: int
    b: int
    c_min: int
    g: str = "injective"
    kind: str = field(default="general", init=False)

    def __post_init__(self):
        for name in ("a", "b", "c_min"):
            value = getattr(self, name)
            if int(value) != value:
                raise ConfigurationError(f"general.{name}: must be an integer, got {value}")
        if self.b < 0:
            raise ConfigurationError(f"general.b: must be >= 0, got {self.b}")
        if self.c_min < 0:
            raise ConfigurationError(f"general.c_min: must be >= 0, got {self.c_min}")
        if self.a < -self.b:
            raise ConfigurationError(f"general.a: must be >= -b = {-self.b}, got {self.a}")
        if self.g not in G_KINDS:
            raise ConfigurationError(f"general.g: must be one of {', '.join(G_KINDS)}, got {self.g!r}")

    def c_for(self, n: int) -> int:
        return max(int(self.c_min), int(n) * int(self.b))


Submodel = Union[SimpleMosaic, RandomToken, Mixture, DeadLeaves, GeneralLinear]
SUBMODELS = {
    "simple": SimpleMosaic,
    "token": RandomToken,
    "mixture": Mixture,
    "dead_leaves": DeadLeaves,
}


@dataclass(frozen=True)
class FieldModel:
    space: Space
    sets: SetFamily
    count: CountDistribution
    value: ValueDistribution
    submodel: Submodel

    def __post_init__(self):
        if self.sets.space != self.space:
            raise ConfigurationError(
                f"sets: family {self.sets.kind} is bound to {self.sets.space}, not to {self.space}"
            )
        if self.count.pmf_table(0)[0] >= 1.0:
            logger.info("count law %s is almost surely zero; the field is a single cell", self.count.kind)


# ---------------------------------------------------------------------------
# Index families for the general linear model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexFamily:
    """Disjoint id blocks A, B_i, C_i with I_I = A + sum_{i not in I} B_i + sum_{i in I} C_i.

    |A| = c - n b, |B_i| = b, |C_i| = a + b, which gives
    |I_I & I_J| = a |I & J| - b |I ^ J| + c.
    """

    n: int
    a: int
    b: int
    c: int

    @property
    def a_size(self) -> int:
        return self.c - self.n * self.b

    def block_b(self, i: int) -> range:
        start = self.a_size + (i - 1) * self.b
        return range(start, start + self.b)

    def block_c(self, i: int) -> range:
        start = self.c + (i - 1) * (self.a + self.b)
        return range(start, start + self.a + self.b)

    @property
    def id_count(self) -> int:
        return self.c + self.n * (self.a + self.b)

    def members(self, index_set: Sequence[int]) -> np.ndarray:
        chosen = set(int(i) for i in index_set)
        parts = [np.arange(self.a_size)]
        for i in range(1, self.n + 1):
            block = self.block_c(i) if i in chosen else self.block_b(i)
            parts.append(np.arange(block.start, block.stop))
        return np.concatenate(parts).astype(np.int64)

    __call__ = members


def lemma1_family(n: int, a: int, b: int, c: int) -> IndexFamily:
    if n < 0 or b < 0 or c < 0:
        raise DomainError(f"index family needs n, b, c >= 0, got n={n}, b={b}, c={c}")
    if a < -b:
        raise DomainError(f"index family needs a >= -b, got a={a}, b={b}")
    if c < n * b:
        raise DomainError(f"index family needs c >= n b, got c={c}, n b={n * b}")
    return IndexFamily(int(n), int(a), int(b), int(c))


# ---------------------------------------------------------------------------
# Realizations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Realization:
    model: FieldModel
    n: int
    sets: SetBatch
    token_values: Optional[np.ndarray] = None
    leaf_values: Optional[np.ndarray] = None
    cell_stream: Optional[KeyedGenerator] = None

    @property
    def instances(self):
        return self.sets.instances


def realize(model: FieldModel, g: KeyedGenerator) -> Realization:
    n = int(model.count.sample(g.derive("count").rng()))
    sets = model.sets.sample(g.derive("sets").rng(), n)
    kind = model.submodel.kind
    token_values = leaf_values = cell_stream = None
    if kind == "token":
        token_values = np.atleast_1d(model.value.sample(g.derive("token").rng(), n))
    elif kind == "dead_leaves":
        leaf_values = np.atleast_1d(model.value.sample(g.derive("leaves").rng(), n + 1))
    else:
        cell_stream = g.derive("cells")
    return Realization(model, n, sets, token_values, leaf_values, cell_stream)


def membership_set(r: Realization, x) -> IndexSet:
    hits = r.sets.membership(x)[:, 0]
    return tuple(int(i) + 1 for i in np.nonzero(hits)[0])


def _cell_values(r: Realization, index_set: IndexSet) -> float:
    kind = r.model.submodel.kind
    value = r.model.value
    if kind == "simple":
        stream = r.cell_stream.derive("cell", encode_index_set(index_set))
        return float(value.from_uniform(stream.uniforms(1))[0])
    if kind == "mixture":
        if not index_set:
            return 0.0
        stream = r.cell_stream.derive("cell", encode_index_set(index_set))
        draws = value.from_uniform(stream.uniforms(max(index_set)))
        return float(draws[np.asarray(index_set) - 1].sum())
    # general linear model
    sub: GeneralLinear = r.model.submodel
    family = IndexFamily(r.n, sub.a, sub.b, sub.c_for(r.n))
    ids = family.members(index_set)
    if ids.size == 0:
        return 0.0
    if sub.g == "injective":
        stream = r.cell_stream.derive("cell", encode_index_set(index_set))
    elif sub.g == "constant":
        stream = r.cell_stream.derive("const")
    else:
        stream = r.cell_stream.derive("max", max(index_set, default=0))
    draws = value.from_uniform(stream.uniforms(int(ids.max()) + 1))
    return float(draws[ids].sum())


def evaluate_many(r: Realization, points) -> np.ndarray:
    """Z at every row of ``points``; one membership pass, one value draw per cell."""
    member = r.sets.membership(points)
    m = member.shape[1]
    kind = r.model.submodel.kind
    if kind == "token":
        if r.n == 0:
            return np.zeros(m)
        return r.token_values @ member
    if kind == "dead_leaves":
        if r.n == 0:
            return np.full(m, r.leaf_values[0])
        covered = member.any(axis=0)
        last = r.n - np.argmax(member[::-1, :], axis=0)
        return r.leaf_values[np.where(covered, last, 0)]
    if r.n == 0:
        return np.full(m, _cell_values(r, ()))
    # group points by cell: identical membership columns share one value
    packed = np.ascontiguousarray(np.packbits(member, axis=0).T)
    keys = packed.view(np.dtype((np.void, packed.shape[1]))).ravel()
    _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    values = np.empty(first.size)
    for slot, column in enumerate(first):
        index_set = tuple(int(i) + 1 for i in np.nonzero(member[:, column])[0])
        values[slot] = _cell_values(r, index_set)
    return values[inverse.ravel()]


def evaluate(r: Realization, x) -> float:
    return float(evaluate_many(r, x)[0])


# ---------------------------------------------------------------------------
# Normalised sums and rasters
# ---------------------------------------------------------------------------

def normalized_sum(model: FieldModel, m: int, points, g: KeyedGenerator) -> np.ndarray:
    """(1/sqrt(m)) sum_k (Z_k(x) - mu) / sigma over m independent realizations."""
    if m < 1:
        raise DomainError(f"normalized_sum: m must be >= 1, got {m}")
    pts = model.space.check(points)
    mean, variance = marginal_moments(model, pts)
    if np.any(np.asarray(variance) <= 0):
        raise DegenerateModelError("normalized_sum: marginal variance is zero")
    sigma = np.sqrt(variance)
    total = np.zeros(pts.shape[0])
    for k in range(m):
        r = realize(model, g.derive("replicate", k))
        total += (evaluate_many(r, pts) - mean) / sigma
    return total / math.sqrt(m)


@dataclass(frozen=True)
class GridSpec:
    """``width`` x ``height`` cell centres over an extent (lo0, hi0, lo1, hi1)."""

    width: int
    height: int
    extent: Optional[Tuple[float, float, float, float]] = None

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise DomainError(f"grid must be at least 1x1, got {self.width}x{self.height}")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        try:
            w, h = text.lower().split("x")
            return cls(int(w), int(h))
        except ValueError as e:
            raise DomainError(f"grid must look like WxH, got {text!r}: {str(e)}")


def _default_extent(space: Space) -> Tuple[float, float, float, float]:
    if isinstance(space, EuclidRect):
        if space.d != 2:
            raise DomainError(f"euclid raster needs d = 2, got {space.d}")
        return (-space.R[0], space.R[0], -space.R[1], space.R[1])
    if isinstance(space, EuclidBall):
        if space.d != 2:
            raise DomainError(f"euclid raster needs d = 2, got {space.d}")
        half = space.C_M / math.sqrt(2.0)
        return (-half, half, -half, half)
    if isinstance(space, Sphere):
        if space.d != 2:
            raise DomainError(f"lon/lat raster needs the 2-sphere, got d = {space.d}")
        return (-math.pi, math.pi, -math.pi / 2.0, math.pi / 2.0)
    if isinstance(space, Cylinder):
        return (0.0, TWO_PI, 0.0, space.h)
    if isinstance(space, Torus):
        return (0.0, TWO_PI, 0.0, TWO_PI)
    raise DomainError(f"no raster layout for space {space.kind}")


def grid_points(space: Space, grid: GridSpec) -> np.ndarray:
    """Cell-centre points in row-major order, row 0 at the top of the image."""
    lo0, hi0, lo1, hi1 = grid.extent if grid.extent is not None else _default_extent(space)
    u = lo0 + (np.arange(grid.width) + 0.5) * (hi0 - lo0) / grid.width
    v = hi1 - (np.arange(grid.height) + 0.5) * (hi1 - lo1) / grid.height
    uu, vv = np.meshgrid(u, v)
    if isinstance(space, Sphere):
        pts = lonlat_to_unit(uu.ravel(), vv.ravel())
    else:
        pts = np.column_stack([uu.ravel(), vv.ravel()])
    return space.check(pts)


def raster(model: FieldModel, grid: GridSpec, g: KeyedGenerator) -> np.ndarray:
    pts = grid_points(model.space, grid)
    r = realize(model, g)
    logger.info("raster %dx%d with n=%d sets", grid.width, grid.height, r.n)
    return evaluate_many(r, pts).reshape(grid.height, grid.width)
