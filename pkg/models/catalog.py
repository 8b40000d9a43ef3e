"""Named correlation functions of mosaic fields and the models generating them.

Rows ``t1r1``..``t1r10`` live on the planar disc of radius C_M, rows
``t2r1``..``t2r11`` on the 2-sphere. ``cyl-sph`` and ``torus-sph`` carry the
spherical correlation over to the cylinder and the torus.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Tuple

import numpy as np
import pandas as pd

from models.analytics import model_correlation
from models.distributions import (
    Binomial,
    Compound,
    CosinePolynomial,
    DeterministicRadius,
    Gaussian,
    Geometric,
    Hemisphere,
    NegativeBinomial,
    Poisson,
    Sironvalle,
    UniformDiameter,
    power_alpha,
)
from models.exceptions import ConfigurationError, DomainError, ParameterRangeError
from models.fields import DeadLeaves, FieldModel, Mixture, RandomToken, SimpleMosaic
from models.random_sets import (
    CylinderBall,
    EuclidBallSets,
    HalfSpace,
    Hyperrect,
    SphereCap,
    TorusBall,
    spherical_correlation,
)
from models.spaces import Cylinder, EuclidBall, Sphere, Torus, points_at_distance

logger = logging.getLogger(__name__)

# U with E U^2 = 1 and (E U)^2 = 1/2, used by the geometric-count token rows
TOKEN_VALUE = Gaussian(1.0 / math.sqrt(2.0), 0.5)


@dataclass(frozen=True)
class CorrelationModel:
    row_id: str
    title: str
    params: Mapping[str, float]
    rho: Callable[[np.ndarray], np.ndarray]
    model: FieldModel
    argument: str = "distance"
    extra: bool = False

    @property
    def max_distance(self) -> float:
        return float(self.model.space.diameter)

    def _offsets(self, delta) -> np.ndarray:
        # a bare distance is an offset along the first axis
        arr = np.asarray(delta, dtype=float)
        if arr.ndim == 0 or arr.shape[-1] != self.model.space.d:
            arr = np.stack([arr, np.zeros_like(arr)], axis=-1)
        return arr

    def __call__(self, delta):
        arr = np.asarray(delta, dtype=float)
        if self.argument == "offset":
            arr = self._offsets(arr)
        out = np.asarray(self.rho(arr), dtype=float)
        return float(out) if out.ndim == 0 else out

    def pair(self, delta) -> Tuple[np.ndarray, np.ndarray]:
        """Two points whose distance (or coordinate offset) is ``delta``."""
        if self.argument == "offset":
            off = self._offsets(delta)
            return self.model.space.check(-off / 2.0)[0], self.model.space.check(off / 2.0)[0]
        return points_at_distance(self.model.space, float(delta))

    def model_rho(self, delta) -> float:
        """Correlation of the generating field at a pair at ``delta``, from its hit probabilities."""
        x, y = self.pair(delta)
        return model_correlation(self.model, x, y)


# ---------------------------------------------------------------------------
# Parameter checks
# ---------------------------------------------------------------------------

def _check(row_id: str, name: str, value, ok: bool, expected: str) -> None:
    if not ok:
        raise ParameterRangeError(f"catalog.{row_id}.{name}: must be {expected}, got {value}")


def _alpha(row_id, p):
    _check(row_id, "alpha", p["alpha"], 0.0 < p["alpha"] <= 1.0, "in (0, 1]")


def _positive(row_id, p, *names):
    for name in names:
        _check(row_id, name, p[name], p[name] > 0, "positive")


def _lambda1(row_id, p):
    _check(row_id, "lambda1", p["lambda1"], 0.0 < p["lambda1"] <= 1.0, "in (0, 1]")


def _lambda2(row_id, p):
    _check(row_id, "lambda2", p["lambda2"], 0.0 < p["lambda2"] < 1.0, "in (0, 1)")


# ---------------------------------------------------------------------------
# Generating models
# ---------------------------------------------------------------------------

def _plane(p) -> EuclidBall:
    return EuclidBall(2, p["C_M"])


def _sphere() -> Sphere:
    return Sphere(2)


def _geometric(lambda1: float) -> Geometric:
    return Geometric(lambda1 / (2.0 * (2.0 - lambda1)))


def _mixture_value(lambda2: float) -> Gaussian:
    # Var U / E U^2 = lambda2
    return Gaussian(1.0, lambda2 / (1.0 - lambda2))


def _halfspace_model(p, count, value, submodel) -> FieldModel:
    space = _plane(p)
    return FieldModel(space, HalfSpace(space), count, value, submodel)


def _hemisphere_model(count, value, submodel) -> FieldModel:
    space = _sphere()
    return FieldModel(space, SphereCap(space, Hemisphere()), count, value, submodel)


def _uniform_cos_model(count, value, submodel, coefficients=(0.5,)) -> FieldModel:
    space = _sphere()
    return FieldModel(space, SphereCap(space, CosinePolynomial(tuple(coefficients))), count, value, submodel)


def _unit_gaussian() -> Gaussian:
    return Gaussian(0.0, 1.0)


@dataclass(frozen=True)
class _Row:
    row_id: str
    title: str
    defaults: Dict[str, float]
    validate: Callable[[str, Dict[str, float]], None]
    rho: Callable[[Dict[str, float]], Callable[[np.ndarray], np.ndarray]]
    build: Callable[[Dict[str, float]], FieldModel]
    argument: str = "distance"
    extra: bool = False


_ROWS: List[_Row] = [
    _Row(
        "t1r1", "simple mosaic, halfspaces, N = K_1 + ... + K_L, L ~ Poi((pi C_M / c1)^alpha)",
        {"alpha": 0.5, "c1": 1.0, "C_M": 1.0},
        lambda r, p: (_alpha(r, p), _positive(r, p, "c1", "C_M")),
        lambda p: lambda d: np.exp(-((d / p["c1"]) ** p["alpha"])),
        lambda p: _halfspace_model(
            p, Compound(Poisson((math.pi * p["C_M"] / p["c1"]) ** p["alpha"]), power_alpha(p["alpha"])),
            _unit_gaussian(), SimpleMosaic()),
    ),
    _Row(
        "t1r2", "simple mosaic, halfspaces, L ~ Bin(n, (pi C_M / c2)^alpha)",
        {"alpha": 0.5, "c2": math.pi, "n": 3, "C_M": 1.0},
        lambda r, p: (
            _alpha(r, p), _positive(r, p, "C_M"),
            _check(r, "c2", p["c2"], p["c2"] >= math.pi * p["C_M"] * (1.0 - 1e-12), "at least pi C_M"),
            _check(r, "n", p["n"], p["n"] >= 1 and int(p["n"]) == p["n"], "a positive integer"),
        ),
        lambda p: lambda d: (1.0 - (d / p["c2"]) ** p["alpha"]) ** int(p["n"]),
        lambda p: _halfspace_model(
            p, Compound(Binomial(int(p["n"]), min(1.0, (math.pi * p["C_M"] / p["c2"]) ** p["alpha"])),
                        power_alpha(p["alpha"])),
            _unit_gaussian(), SimpleMosaic()),
    ),
    _Row(
        "t1r3", "simple mosaic, halfspaces, L ~ NegBin(beta / alpha, 1 / (1 + (pi C_M / c1)^alpha))",
        {"alpha": 0.5, "beta": 1.0, "c1": 1.0, "C_M": 1.0},
        lambda r, p: (_alpha(r, p), _positive(r, p, "beta", "c1", "C_M")),
        lambda p: lambda d: (1.0 + (d / p["c1"]) ** p["alpha"]) ** (-p["beta"] / p["alpha"]),
        lambda p: _halfspace_model(
            p, Compound(NegativeBinomial(p["beta"] / p["alpha"],
                                         1.0 / (1.0 + (math.pi * p["C_M"] / p["c1"]) ** p["alpha"])),
                        power_alpha(p["alpha"])),
            _unit_gaussian(), SimpleMosaic()),
    ),
    _Row(
        "t1r4", "random token, halfspaces, geometric N",
        {"lambda1": 0.5, "C_M": 1.0},
        lambda r, p: (_lambda1(r, p), _positive(r, p, "C_M")),
        lambda p: lambda d: p["lambda1"] * (1.0 - d / (math.pi * p["C_M"])) + (1.0 - p["lambda1"]),
        lambda p: _halfspace_model(p, _geometric(p["lambda1"]), TOKEN_VALUE, RandomToken()),
    ),
    _Row(
        "t1r5", "mixture, halfspaces, N ~ Poi(pi C_M / c1)",
        {"lambda2": 0.5, "c1": 1.0, "C_M": 1.0},
        lambda r, p: (_lambda2(r, p), _positive(r, p, "c1", "C_M")),
        lambda p: lambda d: (
            p["lambda2"] * (1.0 - d / (math.pi * p["C_M"])) * np.exp(-d / p["c1"])
            + (1.0 - p["lambda2"]) * (1.0 - d / (math.pi * p["C_M"]))
        ),
        lambda p: _halfspace_model(p, Poisson(math.pi * p["C_M"] / p["c1"]), _mixture_value(p["lambda2"]), Mixture()),
    ),
    _Row(
        "t1r6", "dead leaves, halfspaces, N = K",
        {"alpha": 0.5, "C_M": 1.0},
        lambda r, p: (_alpha(r, p), _positive(r, p, "C_M")),
        lambda p: lambda d: 1.0 - 2.0 ** (1.0 - p["alpha"]) * (d / (math.pi * p["C_M"]))
        / (1.0 + d / (math.pi * p["C_M"])) ** (1.0 - p["alpha"]),
        lambda p: _halfspace_model(p, power_alpha(p["alpha"]), _unit_gaussian(), DeadLeaves()),
    ),
    _Row(
        "t1r7", "random token, discs of diameter a, Poisson N",
        {"a": 1.0, "lam": 10.0, "C_M": 1.0},
        lambda r, p: _positive(r, p, "a", "lam", "C_M"),
        lambda p: lambda d: np.where(
            d <= p["a"],
            2.0 / math.pi * np.arccos(np.clip(d / p["a"], 0.0, 1.0))
            - 2.0 / (math.pi * p["a"] ** 2) * d * np.sqrt(np.clip(p["a"] ** 2 - d ** 2, 0.0, None)),
            0.0,
        ),
        lambda p: _disc_model(p, DeterministicRadius(p["a"])),
    ),
    _Row(
        "t1r8", "random token, discs with Sironvalle diameters, Poisson N",
        {"a": 1.0, "lam": 10.0, "C_M": 1.0},
        lambda r, p: _positive(r, p, "a", "lam", "C_M"),
        lambda p: lambda d: spherical_correlation(p["a"], d),
        lambda p: _disc_model(p, Sironvalle(p["a"])),
    ),
    _Row(
        "t1r9", "random token, discs with uniform diameters, Poisson N",
        {"a": 1.0, "lam": 10.0, "C_M": 1.0},
        lambda r, p: _positive(r, p, "a", "lam", "C_M"),
        lambda p: lambda d: _uniform_disc_rho(p["a"], d),
        lambda p: _disc_model(p, UniformDiameter(p["a"])),
    ),
    _Row(
        "t1r10", "random token, rectangles with half-widths (a1, a2), Poisson N",
        {"a1": 0.5, "a2": 0.5, "lam": 10.0, "C_M": 1.0},
        lambda r, p: _positive(r, p, "a1", "a2", "lam", "C_M"),
        lambda p: lambda off: (
            np.clip(2.0 * p["a1"] - np.abs(np.asarray(off)[..., 0]), 0.0, None)
            * np.clip(2.0 * p["a2"] - np.abs(np.asarray(off)[..., 1]), 0.0, None)
            / (4.0 * p["a1"] * p["a2"])
        ),
        lambda p: _rect_model(p),
        argument="offset",
    ),
    _Row(
        "t2r1", "simple mosaic, hemispheres, L ~ Poi((pi / c)^alpha)",
        {"alpha": 0.5, "c": 1.0},
        lambda r, p: (_alpha(r, p), _positive(r, p, "c")),
        lambda p: lambda d: np.exp(-((d / p["c"]) ** p["alpha"])),
        lambda p: _hemisphere_model(
            Compound(Poisson((math.pi / p["c"]) ** p["alpha"]), power_alpha(p["alpha"])),
            _unit_gaussian(), SimpleMosaic()),
    ),
    _Row(
        "t2r2", "simple mosaic, hemispheres, L ~ NegBin(beta / alpha, 1 / (1 + (pi / c)^alpha))",
        {"alpha": 0.5, "beta": 1.0, "c": 1.0},
        lambda r, p: (_alpha(r, p), _positive(r, p, "beta", "c")),
        lambda p: lambda d: (1.0 + (d / p["c"]) ** p["alpha"]) ** (-p["beta"] / p["alpha"]),
        lambda p: _hemisphere_model(
            Compound(NegativeBinomial(p["beta"] / p["alpha"], 1.0 / (1.0 + (math.pi / p["c"]) ** p["alpha"])),
                     power_alpha(p["alpha"])),
            _unit_gaussian(), SimpleMosaic()),
    ),
    _Row(
        "t2r3", "random token, hemispheres, geometric N",
        {"lambda1": 0.5},
        _lambda1,
        lambda p: lambda d: p["lambda1"] * (1.0 - d / math.pi) + (1.0 - p["lambda1"]),
        lambda p: _hemisphere_model(_geometric(p["lambda1"]), TOKEN_VALUE, RandomToken()),
    ),
    _Row(
        "t2r4", "mixture, hemispheres, N ~ Poi(pi / c)",
        {"lambda2": 0.5, "c": 1.0},
        lambda r, p: (_lambda2(r, p), _positive(r, p, "c")),
        lambda p: lambda d: (
            p["lambda2"] * (1.0 - d / math.pi) * np.exp(-d / p["c"]) + (1.0 - p["lambda2"]) * (1.0 - d / math.pi)
        ),
        lambda p: _hemisphere_model(Poisson(math.pi / p["c"]), _mixture_value(p["lambda2"]), Mixture()),
    ),
    _Row(
        "t2r5", "dead leaves, hemispheres, N = K",
        {"alpha": 0.5},
        _alpha,
        lambda p: lambda d: 1.0 - 2.0 ** (1.0 - p["alpha"]) * (d / math.pi) / (1.0 + d / math.pi) ** (1.0 - p["alpha"]),
        lambda p: _hemisphere_model(power_alpha(p["alpha"]), _unit_gaussian(), DeadLeaves()),
    ),
    _Row(
        "t2r6", "random token, caps of radius r, Poisson N",
        {"r": 1.0, "lam": 10.0},
        lambda r, p: (
            _positive(r, p, "lam"),
            _check(r, "r", p["r"], 0.0 < p["r"] <= math.pi / 2.0, "in (0, pi/2]"),
        ),
        lambda p: lambda d: _cap_rho(p["r"], d),
        lambda p: FieldModel(
            _sphere(), SphereCap(_sphere(), DeterministicRadius(p["r"])), Poisson(p["lam"]),
            _unit_gaussian(), RandomToken()),
    ),
    _Row(
        "t2r7", "simple mosaic, caps with uniform cos R, L ~ Poi((2 / c)^alpha)",
        {"alpha": 0.5, "c": 1.0},
        lambda r, p: (_alpha(r, p), _positive(r, p, "c")),
        lambda p: lambda d: np.exp(-((np.sin(d / 2.0) / p["c"]) ** p["alpha"])),
        lambda p: _uniform_cos_model(
            Compound(Poisson((2.0 / p["c"]) ** p["alpha"]), power_alpha(p["alpha"])),
            _unit_gaussian(), SimpleMosaic()),
    ),
    _Row(
        "t2r8", "simple mosaic, caps with uniform cos R, L ~ NegBin(beta / alpha, 1 / (1 + (2 / c)^alpha))",
        {"alpha": 0.5, "beta": 1.0, "c": 1.0},
        lambda r, p: (_alpha(r, p), _positive(r, p, "beta", "c")),
        lambda p: lambda d: (1.0 + (np.sin(d / 2.0) / p["c"]) ** p["alpha"]) ** (-p["beta"] / p["alpha"]),
        lambda p: _uniform_cos_model(
            Compound(NegativeBinomial(p["beta"] / p["alpha"], 1.0 / (1.0 + (2.0 / p["c"]) ** p["alpha"])),
                     power_alpha(p["alpha"])),
            _unit_gaussian(), SimpleMosaic()),
    ),
    _Row(
        "t2r9", "random token, caps with uniform cos R, geometric N",
        {"lambda1": 0.5},
        _lambda1,
        lambda p: lambda d: p["lambda1"] * (1.0 - 0.5 * np.sin(d / 2.0)) + (1.0 - p["lambda1"]),
        lambda p: _uniform_cos_model(_geometric(p["lambda1"]), TOKEN_VALUE, RandomToken()),
    ),
    _Row(
        "t2r10", "random token, caps with cos R of cdf (1 + t^3) / 2, Poisson N",
        {"lam": 10.0},
        lambda r, p: _positive(r, p, "lam"),
        lambda p: lambda d: (
            1.0 - 0.25 * np.sin(d / 2.0) ** 3 - 0.375 * np.sin(d / 2.0) * np.cos(d / 2.0) ** 2
        ),
        lambda p: _uniform_cos_model(Poisson(p["lam"]), _unit_gaussian(), RandomToken(), coefficients=(0.0, 0.5)),
    ),
    _Row(
        "t2r11", "simple mosaic, caps with uniform cos R, N = K",
        {"alpha": 0.5},
        _alpha,
        lambda p: lambda d: 1.0 - (0.5 * np.sin(d / 2.0)) ** p["alpha"],
        lambda p: _uniform_cos_model(power_alpha(p["alpha"]), _unit_gaussian(), SimpleMosaic()),
    ),
    _Row(
        "cyl-sph", "random token, cylinder discs with Sironvalle diameters, Poisson N",
        {"a": 1.0, "h": 1.0, "lam": 10.0},
        lambda r, p: (
            _positive(r, p, "h", "lam"),
            _check(r, "a", p["a"], 0.0 < p["a"] <= math.pi, "in (0, pi]"),
        ),
        lambda p: lambda d: spherical_correlation(p["a"], d),
        lambda p: _flat_model(Cylinder(p["h"]), CylinderBall, p),
        extra=True,
    ),
    _Row(
        "torus-sph", "random token, torus discs with Sironvalle diameters, Poisson N",
        {"a": 1.0, "lam": 10.0},
        lambda r, p: (
            _positive(r, p, "lam"),
            _check(r, "a", p["a"], 0.0 < p["a"] <= math.pi, "in (0, pi]"),
        ),
        lambda p: lambda d: spherical_correlation(p["a"], d),
        lambda p: _flat_model(Torus(), TorusBall, p),
        extra=True,
    ),
]
_REGISTRY: Dict[str, _Row] = {row.row_id: row for row in _ROWS}


def _disc_model(p, diameter) -> FieldModel:
    space = _plane(p)
    sets = EuclidBallSets(space, p["a"], diameter)
    return FieldModel(space, sets, Poisson(p["lam"]), _unit_gaussian(), RandomToken())


def _rect_model(p) -> FieldModel:
    space = _plane(p)
    return FieldModel(space, Hyperrect(space, (p["a1"], p["a2"])), Poisson(p["lam"]), _unit_gaussian(), RandomToken())


def _flat_model(space, family, p) -> FieldModel:
    return FieldModel(space, family(space, p["a"], Sironvalle(p["a"])), Poisson(p["lam"]), _unit_gaussian(), RandomToken())


def _uniform_disc_rho(a: float, d):
    d = np.asarray(d, dtype=float)
    inside = (d > 0) & (d < a)
    safe = np.where(inside, d, a / 2.0)
    root = np.sqrt(1.0 - safe ** 2 / a ** 2)
    value = (
        2.0 / math.pi * np.arccos(safe / a)
        - 4.0 / (math.pi * a ** 2) * safe * np.sqrt(a ** 2 - safe ** 2)
        + 2.0 / (math.pi * a ** 3) * safe ** 3 * np.arctanh(root)
    )
    return np.where(d <= 0, 1.0, np.where(inside, value, 0.0))


def _cap_rho(r: float, d):
    d = np.asarray(d, dtype=float)
    inside = (d > 0) & (d <= 2.0 * r)
    safe = np.where(inside, d, r)
    cos_r, sin_r = math.cos(r), math.sin(r)
    first = np.arccos(np.clip((cos_r ** 2 - np.cos(safe)) / sin_r ** 2, -1.0, 1.0))
    second = np.arccos(np.clip(cos_r * (1.0 - np.cos(safe)) / (sin_r * np.sin(safe)), -1.0, 1.0))
    value = (first - 2.0 * cos_r * second) / (math.pi * (1.0 - cos_r))
    return np.where(d <= 0, 1.0, np.where(inside, value, 0.0))


class CatalogManager:
    @staticmethod
    def row_ids(include_extra: bool = True) -> List[str]:
        return [row.row_id for row in _ROWS if include_extra or not row.extra]

    @staticmethod
    def list_rows() -> pd.DataFrame:
        records = [
            {
                "row_id": row.row_id,
                "title": row.title,
                "parameters": ", ".join(f"{k}={v:g}" for k, v in row.defaults.items()),
                "extra": row.extra,
            }
            for row in _ROWS
        ]
        return pd.DataFrame.from_records(records)

    @staticmethod
    def get_row(row_id: str, **params: Any) -> CorrelationModel:
        row = _REGISTRY.get(row_id)
        if row is None:
            raise ConfigurationError(f"catalog.row: unknown row id {row_id!r}")
        unknown = set(params) - set(row.defaults)
        if unknown:
            raise ParameterRangeError(
                f"catalog.{row_id}: unknown parameter(s) {', '.join(sorted(unknown))}; "
                f"expected {', '.join(row.defaults)}"
            )
        values = dict(row.defaults)
        for name, raw in params.items():
            try:
                values[name] = float(raw)
            except (TypeError, ValueError):
                raise ParameterRangeError(f"catalog.{row_id}.{name}: expected a number, got {raw!r}")
        row.validate(row_id, values)
        try:
            model = row.build(values)
        except (ConfigurationError, DomainError) as e:
            raise ParameterRangeError(f"catalog.{row_id}: {str(e)}")
        logger.debug("catalog row %s with %s", row_id, values)
        return CorrelationModel(row_id, row.title, values, row.rho(values), model, row.argument, row.extra)

    @staticmethod
    def distance_grid(entry: CorrelationModel, points: int = 50) -> np.ndarray:
        """Evenly spaced distances over the range where the row's pairs can be placed."""
        space = entry.model.space
        if space.kind in ("cylinder", "torus"):
            upper = math.pi
        else:
            upper = float(space.diameter)
        return np.linspace(0.0, upper, points)


def catalog(row_id: str, **params: Any) -> CorrelationModel:
    return CatalogManager.get_row(row_id, **params)
