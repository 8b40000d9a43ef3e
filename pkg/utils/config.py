"""Run configuration: one TOML file, CLI overrides, environment defaults.

Every block names its law or family with ``kind``; errors name the dotted
key path of the offending entry. All model checks run here, before any
sampling.
"""
from __future__ import annotations

import logging
import os
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - Python 3.10 fallback
    import tomli as tomllib
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional

from models.catalog import CatalogManager, CorrelationModel
from models.distributions import (
    Binomial,
    Compound,
    CosinePolynomial,
    CountDistribution,
    DeterministicCount,
    DeterministicRadius,
    DeterministicValue,
    Gaussian,
    Geometric,
    Hemisphere,
    NegativeBinomial,
    Poisson,
    RadiusLaw,
    Sironvalle,
    TableCount,
    TwoPoint,
    UniformDiameter,
    UniformValue,
    ValueDistribution,
    power_alpha,
)
from models.exceptions import ConfigurationError, DomainError, MosaicError
from models.fields import SUBMODELS, FieldModel, GeneralLinear
from models.random_sets import CylinderBall, EuclidBallSets, HalfSpace, Hyperrect, SphereCap, TorusBall
from models.spaces import Cylinder, EuclidBall, EuclidRect, Sphere, Torus
from utils.randomness import SEED_MAX

logger = logging.getLogger(__name__)

SEED_ENV = "MOSAIC_SEED"
THREADS_ENV = "MOSAIC_THREADS"
LOG_LEVEL_ENV = "MOSAIC_LOG_LEVEL"
DEFAULT_LOG_LEVEL = "WARNING"


def _block(parent: Mapping[str, Any], key: str, path: str) -> Mapping[str, Any]:
    value = parent.get(key)
    if value is None:
        raise ConfigurationError(f"{path}{key}: missing block")
    if not isinstance(value, Mapping):
        raise ConfigurationError(f"{path}{key}: expected a table, got {type(value).__name__}")
    return value


def _get(block: Mapping[str, Any], key: str, path: str, default: Any = ...) -> Any:
    if key in block:
        return block[key]
    if default is ...:
        raise ConfigurationError(f"{path}.{key}: missing key")
    return default


def _number(block, key, path, default: Any = ...) -> float:
    value = _get(block, key, path, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{path}.{key}: expected a number, got {value!r}")
    return float(value)


def _integer(block, key, path, default: Any = ...) -> int:
    value = _get(block, key, path, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{path}.{key}: expected an integer, got {value!r}")
    return int(value)


def _kind(block, path) -> str:
    kind = _get(block, "kind", path)
    if not isinstance(kind, str):
        raise ConfigurationError(f"{path}.kind: expected a string, got {kind!r}")
    return kind


def _unknown(path: str, kind: str, known) -> ConfigurationError:
    return ConfigurationError(f"{path}.kind: unknown kind {kind!r}; expected one of {', '.join(known)}")


def _wrap(path: str, build):
    # re-raise model errors with the block path in front
    try:
        return build()
    except ConfigurationError as e:
        message = str(e)
        if message.startswith(path):
            raise
        raise ConfigurationError(f"{path}: {message}")
    except DomainError as e:
        raise ConfigurationError(f"{path}: {str(e)}")


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def build_space(block: Mapping[str, Any], path: str = "space"):
    kind = _kind(block, path)
    builders = {
        "euclid-ball": lambda: EuclidBall(_integer(block, "d", path, 2), _number(block, "C_M", path, 1.0)),
        "euclid-rect": lambda: EuclidRect(tuple(float(v) for v in _get(block, "R", path))),
        "sphere": lambda: Sphere(_integer(block, "d", path, 2)),
        "cylinder": lambda: Cylinder(_number(block, "h", path)),
        "torus": lambda: Torus(),
    }
    if kind not in builders:
        raise _unknown(path, kind, builders)
    return _wrap(path, builders[kind])


def build_count(block: Mapping[str, Any], path: str = "count") -> CountDistribution:
    kind = _kind(block, path)
    builders = {
        "poisson": lambda: Poisson(_number(block, "lam", path)),
        "geometric": lambda: Geometric(_number(block, "p", path)),
        "binomial": lambda: Binomial(_integer(block, "n", path), _number(block, "p", path)),
        "negative_binomial": lambda: NegativeBinomial(_number(block, "r", path), _number(block, "p", path)),
        "power_alpha": lambda: power_alpha(_number(block, "alpha", path)),
        "compound": lambda: Compound(
            build_count(_block(block, "outer", f"{path}."), f"{path}.outer"),
            build_count(_block(block, "inner", f"{path}."), f"{path}.inner"),
        ),
        "deterministic": lambda: DeterministicCount(_integer(block, "n", path)),
        "table": lambda: TableCount(tuple(float(v) for v in _get(block, "pmf", path))),
    }
    if kind not in builders:
        raise _unknown(path, kind, builders)
    return _wrap(path, builders[kind])


def build_value(block: Mapping[str, Any], path: str = "value") -> ValueDistribution:
    kind = _kind(block, path)
    builders = {
        "gaussian": lambda: Gaussian(_number(block, "mean", path, 0.0), _number(block, "variance", path, 1.0)),
        "uniform": lambda: UniformValue(_number(block, "low", path), _number(block, "high", path)),
        "two_point": lambda: TwoPoint(_number(block, "low", path), _number(block, "high", path),
                                      _number(block, "p", path)),
        "deterministic": lambda: DeterministicValue(_number(block, "value", path)),
    }
    if kind not in builders:
        raise _unknown(path, kind, builders)
    return _wrap(path, builders[kind])


def build_radius(block: Mapping[str, Any], path: str) -> RadiusLaw:
    kind = _kind(block, path)
    builders = {
        "deterministic": lambda: DeterministicRadius(_number(block, "value", path)),
        "sironvalle": lambda: Sironvalle(_number(block, "a", path)),
        "uniform": lambda: UniformDiameter(_number(block, "a", path)),
        "cos_polynomial": lambda: CosinePolynomial(tuple(float(v) for v in _get(block, "p", path))),
        "hemisphere": lambda: Hemisphere(),
    }
    if kind not in builders:
        raise _unknown(path, kind, builders)
    return _wrap(path, builders[kind])


def build_sets(block: Mapping[str, Any], space, path: str = "sets"):
    kind = _kind(block, path)

    def diameter():
        return build_radius(_block(block, "diameter", f"{path}."), f"{path}.diameter")

    builders = {
        "halfspace": lambda: HalfSpace(space),
        "euclid-ball": lambda: EuclidBallSets(space, _number(block, "a", path), diameter()),
        "hyperrect": lambda: Hyperrect(space, tuple(float(v) for v in _get(block, "a", path))),
        "sphere-cap": lambda: SphereCap(space, build_radius(_block(block, "radius", f"{path}."), f"{path}.radius")),
        "cylinder-ball": lambda: CylinderBall(space, _number(block, "a", path), diameter()),
        "torus-ball": lambda: TorusBall(space, _number(block, "a", path), diameter()),
    }
    if kind not in builders:
        raise _unknown(path, kind, builders)
    return _wrap(path, builders[kind])


def build_submodel(raw: Mapping[str, Any]):
    name = raw.get("submodel", "simple")
    if name == "general":
        block = _block(raw, "general", "")
        return _wrap("general", lambda: GeneralLinear(
            _integer(block, "a", "general"),
            _integer(block, "b", "general", 0),
            _integer(block, "c_min", "general", 0),
            str(_get(block, "g", "general", "injective")),
        ))
    if name not in SUBMODELS:
        raise ConfigurationError(
            f"submodel: unknown submodel {name!r}; expected one of {', '.join([*SUBMODELS, 'general'])}"
        )
    return SUBMODELS[name]()


def build_model(raw: Mapping[str, Any]) -> FieldModel:
    space = build_space(_block(raw, "space", ""))
    sets = build_sets(_block(raw, "sets", ""), space)
    count = build_count(_block(raw, "count", ""))
    value = build_value(_block(raw, "value", ""))
    submodel = build_submodel(raw)
    try:
        return FieldModel(space, sets, count, value, submodel)
    except MosaicError as e:
        raise ConfigurationError(f"model: {str(e)}")


# ---------------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RunConfig:
    raw: Mapping[str, Any]
    model: FieldModel
    seed: int
    threads: int
    catalog_entry: Optional[CorrelationModel] = None
    options: Dict[str, Any] = field(default_factory=dict)


def _env_int(name: str, default: int) -> int:
    text = os.getenv(name)
    if text is None or text == "":
        return default
    try:
        return int(text)
    except ValueError:
        raise ConfigurationError(f"{name}: expected an integer, got {text!r}")


def read_config_file(path: str) -> Dict[str, Any]:
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(f"{path}: {str(e)}")
    except OSError as e:
        raise ConfigurationError(f"{path}: cannot read config: {str(e)}")


def resolve_config(raw: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Merge file keys with CLI overrides (non-None values win) and environment defaults."""
    merged: Dict[str, Any] = dict(raw)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    seed = merged.get("seed", _env_int(SEED_ENV, 0))
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= SEED_MAX:
        raise ConfigurationError(f"seed: expected an integer in [0, 2^64 - 1], got {seed!r}")
    threads = merged.get("threads", _env_int(THREADS_ENV, os.cpu_count() or 1))
    if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
        raise ConfigurationError(f"threads: expected a positive integer, got {threads!r}")

    entry = None
    if "catalog" in merged:
        block = _block(merged, "catalog", "")
        row = _get(block, "row", "catalog")
        params = {k: v for k, v in block.items() if k != "row"}
        entry = CatalogManager.get_row(str(row), **params)
        model = entry.model
    else:
        model = build_model(merged)

    options = {k: v for k, v in merged.items()
               if k not in ("seed", "threads", "space", "sets", "count", "value", "submodel", "general", "catalog")}
    logger.debug("resolved config: seed=%d threads=%d model=%s", seed, threads, model.submodel.kind)
    return RunConfig(merged, model, int(seed), int(threads), entry, options)


def load_config(path: Optional[str], overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    raw = read_config_file(path) if path else {}
    return resolve_config(raw, overrides)
