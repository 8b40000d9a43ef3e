import logging

import numpy as np

from components.output import write_text
from models.catalog import CatalogManager
from models.estimation import PairDesign, calibration_status, compare_report, estimate_correlation
from models.exceptions import ConfigurationError
from utils.audit import log_run
from utils.randomness import make_root_generator

logger = logging.getLogger(__name__)

DEFAULT_POINTS = 10
DEFAULT_REPLICATES = 10_000
EXIT_CALIBRATION_FAILED = 2


def parse_pairs(text, upper):
    """Distances from ``start:stop:count`` or a comma separated list; default 10 points on [0, upper]."""
    if text is None or (isinstance(text, str) and not text.strip()):
        return np.linspace(0.0, upper, DEFAULT_POINTS)
    if isinstance(text, (list, tuple)):
        try:
            return np.array([float(v) for v in text])
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"pairs: expected a list of distances, got {text!r}: {str(e)}")
    text = str(text)
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            return np.linspace(float(start), float(stop), int(count))
        return np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError as e:
        raise ConfigurationError(f"pairs: expected start:stop:count or a list of distances, got {text!r}: {str(e)}")


def upper_distance(config):
    if config.catalog_entry is not None:
        return float(CatalogManager.distance_grid(config.catalog_entry, 2)[-1])
    space = config.model.space
    return float(min(space.diameter, np.pi)) if space.kind in ("cylinder", "torus") else float(space.diameter)


def render_correlate(config, pairs=None, replicates=None, out=None, audit_log=None):
    m = int(replicates or config.options.get("replicates", DEFAULT_REPLICATES))
    distances = parse_pairs(pairs or config.options.get("pairs"), upper_distance(config))
    design = PairDesign.along_axis(config.model.space, distances)
    rho = config.catalog_entry if config.catalog_entry is not None else None

    g = make_root_generator(config.seed).derive("correlate")
    rows = estimate_correlation(config.model, design, m, g, rho=rho, threads=config.threads)
    write_text(compare_report(rows), out)

    status = calibration_status(rows)
    if status == "flagged":
        logger.warning("calibration flagged: one design point with |z| > 4")
    elif status == "fail":
        logger.error("calibration failed: %d design points with |z| > 4",
                     sum(1 for r in rows if abs(r.z) > 4))
    else:
        logger.info("calibration passed over %d design points", len(rows))
    log_run(
        "correlate",
        {"replicates": m, "points": int(len(distances)), "status": status},
        seed=config.seed,
        config=config.raw,
        path=audit_log,
    )
    return EXIT_CALIBRATION_FAILED if status == "fail" else 0
