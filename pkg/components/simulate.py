import io
import logging

import numpy as np

from components.output import write_text
from models.exceptions import ConfigurationError
from models.fields import GridSpec, raster
from utils.audit import log_run
from utils.randomness import make_root_generator

logger = logging.getLogger(__name__)

PGM_MAXVAL = 65535
FORMATS = ("pgm", "csv")


def to_pgm(values):
    """Plain (P2) greyscale image, values min-max scaled to 0..65535."""
    values = np.asarray(values, dtype=float)
    rows, cols = values.shape
    low, high = float(values.min()), float(values.max())
    if high > low:
        pixels = np.rint((values - low) / (high - low) * PGM_MAXVAL).astype(np.int64)
    else:
        pixels = np.zeros(values.shape, dtype=np.int64)
    buffer = io.StringIO()
    np.savetxt(buffer, pixels, fmt="%d", delimiter=" ", header=f"P2\n{cols} {rows}\n{PGM_MAXVAL}", comments="")
    return buffer.getvalue()


def to_csv(values):
    """Raw values row-major under a ``# rows,cols`` header."""
    values = np.asarray(values, dtype=float)
    rows, cols = values.shape
    buffer = io.StringIO()
    np.savetxt(buffer, values, fmt="%.17g", delimiter=",", header=f"{rows},{cols}", comments="# ")
    return buffer.getvalue()


def render_simulate(config, grid="256x256", fmt="pgm", out=None, audit_log=None):
    if fmt not in FORMATS:
        raise ConfigurationError(f"format: expected one of {', '.join(FORMATS)}, got {fmt!r}")
    spec = GridSpec.parse(grid)
    g = make_root_generator(config.seed).derive("simulate")
    values = raster(config.model, spec, g)
    text = to_pgm(values) if fmt == "pgm" else to_csv(values)
    write_text(text, out)
    log_run(
        "simulate",
        {"grid": grid, "format": fmt, "out": out, "min": float(values.min()), "max": float(values.max())},
        seed=config.seed,
        config=config.raw,
        path=audit_log,
    )
    return 0
