import concurrent.futures as cf
import logging

import numpy as np

from components.correlate import parse_pairs
from components.output import write_text
from models.estimation import PairDesign, normality_summary
from models.exceptions import ConfigurationError
from models.fields import normalized_sum
from utils.audit import log_run
from utils.randomness import make_root_generator

logger = logging.getLogger(__name__)

DEFAULT_M = 200
DEFAULT_SUMS = 1000
SUMS_PER_CHUNK = 50


def _sum_chunk(model, m, points, g, start, stop):
    return np.vstack([normalized_sum(model, m, points, g.derive("sum", k)) for k in range(start, stop)])


def draw_sums(model, m, points, count, g, threads=1):
    """``count`` independent normalised sums of ``m`` realizations, one row per sum."""
    chunks = [(s, min(s + SUMS_PER_CHUNK, count)) for s in range(0, count, SUMS_PER_CHUNK)]
    if threads <= 1 or len(chunks) == 1:
        parts = [_sum_chunk(model, m, points, g, s, e) for s, e in chunks]
    else:
        with cf.ProcessPoolExecutor(max_workers=min(threads, len(chunks))) as ex:
            futures = [ex.submit(_sum_chunk, model, m, points, g, s, e) for s, e in chunks]
            parts = [f.result() for f in futures]
    return np.vstack(parts)


def render_sum(config, m=None, points=None, replicates=None, out=None, audit_log=None):
    m = int(m if m is not None else config.options.get("m", DEFAULT_M))
    count = int(replicates if replicates is not None else config.options.get("sums", DEFAULT_SUMS))
    if count < 2:
        raise ConfigurationError(f"replicates: the sum command needs at least 2 sums, got {count}")
    # points are given as distances from the design anchor
    distances = parse_pairs(points or config.options.get("points") or "0", 0.0)
    design = PairDesign.along_axis(config.model.space, distances)

    g = make_root_generator(config.seed).derive("sum")
    sums = draw_sums(config.model, m, design.probes, count, g, threads=config.threads)
    summary = normality_summary(sums)
    summary.insert(1, "d", design.distances)
    write_text(summary.to_csv(index=False, float_format="%.17g", na_rep="nan", lineterminator="\n"), out)

    low = float(summary["ks_pvalue"].min())
    if low < 1e-3:
        logger.warning("normalised sums at some point fail the KS test at 0.001 (p=%.3g)", low)
    log_run(
        "sum",
        {"m": m, "sums": count, "points": int(len(distances)), "min_ks_pvalue": low},
        seed=config.seed,
        config=config.raw,
        path=audit_log,
    )
    return 0
