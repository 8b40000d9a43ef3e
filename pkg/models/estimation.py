"""Monte Carlo estimates of correlations and hit probabilities.

Correlations are ensemble quantities: every replicate is an independent
realization evaluated at the same anchor and probe points. Replicates are
grouped into fixed-size chunks whose partial sums are reduced in chunk
order, so results do not depend on the number of workers.
"""
from __future__ import annotations

import concurrent.futures as cf
import logging
import math
import os
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from models.analytics import model_correlation
from models.exceptions import DegenerateModelError, DomainError
from models.fields import FieldModel, evaluate_many, realize
from models.random_sets import SetFamily
from models.spaces import Cylinder, Space, Sphere, Torus, is_euclid
from utils.randomness import KeyedGenerator

logger = logging.getLogger(__name__)

CHUNK_REPLICATES = 2000
HIT_CHUNK = 100_000
Z_THRESHOLD = 4.0
SE_FLOOR = 1e-12
REPORT_COLUMNS = ["d", "rho_hat", "se", "rho_analytic", "z"]


@dataclass(frozen=True, eq=False)
class PairDesign:
    anchor: np.ndarray
    probes: np.ndarray
    distances: np.ndarray

    @classmethod
    def along_axis(cls, space: Space, distances: Sequence[float]) -> "PairDesign":
        """Anchor and probes on one line (or great circle) of ``space``."""
        d = np.asarray(distances, dtype=float)
        if d.ndim != 1 or d.size == 0 or np.any(d < 0):
            raise DomainError("design distances must be a non-empty list of non-negative numbers")
        span = float(d.max())
        if is_euclid(space):
            anchor = np.zeros(space.d)
            anchor[0] = -span / 2.0
            probes = np.tile(anchor, (d.size, 1))
            probes[:, 0] += d
        elif isinstance(space, Sphere):
            anchor = np.zeros(space.width)
            anchor[0] = 1.0
            probes = np.zeros((d.size, space.width))
            probes[:, 0], probes[:, 1] = np.cos(d), np.sin(d)
        elif isinstance(space, (Cylinder, Torus)):
            if span > math.pi:
                raise DomainError(f"{space.kind} designs along one circle need distances <= pi, got {span}")
            level = space.h / 2.0 if isinstance(space, Cylinder) else 0.0
            anchor = np.array([0.0, level])
            probes = np.column_stack([d, np.full(d.size, level)])
        else:
            raise DomainError(f"no pair design for space {space.kind}")
        space.check(anchor)
        space.check(probes)
        found = space.distances(probes, anchor)
        if np.any(np.abs(found - d) > 1e-9):
            raise DomainError("design points do not realise the requested distances")
        return cls(anchor, probes, d)

    @property
    def points(self) -> np.ndarray:
        return np.vstack([self.anchor[None, :], self.probes])


@dataclass(frozen=True)
class EstimateRow:
    d: float
    rho_hat: float
    se: float
    rho_analytic: float
    z: float

    @property
    def degenerate(self) -> bool:
        return not math.isfinite(self.rho_hat)


@dataclass(frozen=True)
class HitEstimate:
    p_x_hat: float
    p_y_hat: float
    p_xy_hat: float
    se_x: float
    se_y: float
    se_xy: float


def _replicate_chunk(model: FieldModel, points: np.ndarray, g: KeyedGenerator, start: int, stop: int) -> np.ndarray:
    """Sums of z0, z_k, z0^2, z_k^2, z0 z_k over replicates [start, stop)."""
    k = points.shape[0] - 1
    out = np.zeros((5, k))
    for rep in range(start, stop):
        z = evaluate_many(realize(model, g.derive("replicate", rep)), points)
        z0, zk = z[0], z[1:]
        out[0] += z0
        out[1] += zk
        out[2] += z0 * z0
        out[3] += zk * zk
        out[4] += z0 * zk
    return out


def _chunks(m: int) -> List[Tuple[int, int]]:
    return [(s, min(s + CHUNK_REPLICATES, m)) for s in range(0, m, CHUNK_REPLICATES)]


def _default_workers() -> int:
    return os.cpu_count() or 1


def _reduce_replicates(model, points, g, m, threads) -> np.ndarray:
    chunks = _chunks(m)
    workers = max(1, int(threads if threads is not None else _default_workers()))
    if workers == 1 or len(chunks) == 1:
        parts = [_replicate_chunk(model, points, g, s, e) for s, e in chunks]
    else:
        with cf.ProcessPoolExecutor(max_workers=min(workers, len(chunks))) as ex:
            futures = [ex.submit(_replicate_chunk, model, points, g, s, e) for s, e in chunks]
            parts = [f.result() for f in futures]
    total = np.zeros_like(parts[0])
    for part in parts:
        total += part
    return total


def estimate_correlation(
    model: FieldModel,
    design: PairDesign,
    m: int,
    g: KeyedGenerator,
    rho: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    threads: Optional[int] = 1,
) -> List[EstimateRow]:
    """Sample correlation of Z(anchor) and Z(probe_k) over m replicates.

    The standard error is the Fisher-z delta-method value (1 - rho_hat^2) / sqrt(m - 3).
    ``rho`` maps distances to the analytic correlation; by default it comes
    from the model's hit probabilities.
    """
    if m < 100:
        raise DomainError(f"estimate_correlation needs m >= 100 replicates, got {m}")
    sums = _reduce_replicates(model, design.points, g, int(m), threads)
    mean0, meank = sums[0] / m, sums[1] / m
    var0 = sums[2] / m - mean0 ** 2
    vark = sums[3] / m - meank ** 2
    cov = sums[4] / m - mean0 * meank

    if rho is not None:
        analytic = np.asarray(rho(design.distances), dtype=float)
    else:
        analytic = np.array([model_correlation(model, design.anchor, y) for y in design.probes])

    rows = []
    for k, dist in enumerate(design.distances):
        scale = var0[k] * vark[k]
        if not scale > 0:
            logger.warning("zero sample variance at d=%g; correlation undefined", dist)
            rows.append(EstimateRow(float(dist), math.nan, math.nan, float(analytic[k]), math.nan))
            continue
        rho_hat = float(np.clip(cov[k] / math.sqrt(scale), -1.0, 1.0))
        se = max((1.0 - rho_hat ** 2) / math.sqrt(m - 3), SE_FLOOR)
        rows.append(EstimateRow(float(dist), rho_hat, se, float(analytic[k]), (rho_hat - analytic[k]) / se))
    return rows


def estimate_hit_probs(family: SetFamily, pairs: Sequence[Tuple[np.ndarray, np.ndarray]], m: int, g: KeyedGenerator) -> List[HitEstimate]:
    """Membership frequencies of x, y and both over m sampled sets, with binomial s.e."""
    if m < 1000:
        raise DomainError(f"estimate_hit_probs needs m >= 1000 sets, got {m}")
    xs = family.space.check(np.vstack([np.asarray(x, dtype=float) for x, _ in pairs]))
    ys = family.space.check(np.vstack([np.asarray(y, dtype=float) for _, y in pairs]))
    points = np.vstack([xs, ys])
    k = xs.shape[0]
    hits_x = np.zeros(k)
    hits_y = np.zeros(k)
    hits_xy = np.zeros(k)
    for chunk, start in enumerate(range(0, m, HIT_CHUNK)):
        size = min(HIT_CHUNK, m - start)
        member = family.sample(g.derive("hit-chunk", chunk).rng(), size).membership(points)
        in_x, in_y = member[:, :k], member[:, k:]
        hits_x += in_x.sum(axis=0)
        hits_y += in_y.sum(axis=0)
        hits_xy += (in_x & in_y).sum(axis=0)

    def se(p):
        return np.sqrt(p * (1.0 - p) / m)

    px, py, pxy = hits_x / m, hits_y / m, hits_xy / m
    return [
        HitEstimate(float(px[i]), float(py[i]), float(pxy[i]), float(se(px[i])), float(se(py[i])), float(se(pxy[i])))
        for i in range(k)
    ]


def compare_report(rows: Sequence[EstimateRow]) -> str:
    frame = pd.DataFrame(
        [[r.d, r.rho_hat, r.se, r.rho_analytic, r.z] for r in rows],
        columns=REPORT_COLUMNS,
        dtype=float,
    )
    return frame.to_csv(index=False, float_format="%.17g", na_rep="nan", lineterminator="\n")


def calibration_status(rows: Sequence[EstimateRow], threshold: float = Z_THRESHOLD) -> str:
    """``pass`` with no |z| > threshold, ``flagged`` with exactly one, ``fail`` otherwise."""
    outliers = sum(1 for r in rows if math.isfinite(r.z) and abs(r.z) > threshold)
    if outliers == 0:
        return "pass"
    return "flagged" if outliers == 1 else "fail"


def normality_summary(sums: np.ndarray) -> pd.DataFrame:
    """Per-point sample mean, variance and Kolmogorov-Smirnov p-value of normalised sums (rows = draws)."""
    sums = np.atleast_2d(np.asarray(sums, dtype=float))
    if sums.shape[0] < 2:
        raise DegenerateModelError("normality summary needs at least two sums per point")
    records = []
    for k in range(sums.shape[1]):
        column = sums[:, k]
        ks = stats.kstest(column, "norm")
        records.append({
            "point": k,
            "mean": float(column.mean()),
            "variance": float(column.var(ddof=1)),
            "ks_pvalue": float(ks.pvalue),
        })
    return pd.DataFrame.from_records(records)
