import logging

import numpy as np
import pandas as pd

from components.correlate import parse_pairs, upper_distance
from components.output import write_text
from models.analytics import LinearF, MomentReport, general_linear_raw, hit_probabilities, linear_form
from models.distributions import DeterministicCount
from models.exceptions import ConfigurationError
from models.fields import lemma1_family
from models.oracle import ORACLE_MAX_N, enumerate_raw
from models.spaces import points_at_distance
from utils.audit import log_run

logger = logging.getLogger(__name__)

DEFAULT_N = 6
COLUMNS = ["d", "p_x", "p_y", "p_xy", "mixed_closed", "mixed_oracle", "rho_closed", "rho_oracle", "abs_diff"]


def compare_at_n(model, n, x, y):
    """Closed-form and enumerated moments of ``model`` at (x, y) given N = n."""
    a, b, c_min, g_kind = linear_form(model.submodel)
    p_x, p_y, p_xy = hit_probabilities(model, x, y)
    closed = MomentReport.from_raw(
        general_linear_raw(a, b, c_min, g_kind, DeterministicCount(n), p_x, p_y, p_xy, model.value)
    )
    c = max(c_min, n * b)
    family = lemma1_family(n, a, b, c) if model.submodel.kind == "general" else None
    oracle = MomentReport.from_raw(
        enumerate_raw(n, LinearF(a, b, c), g_kind, p_x, p_y, p_xy, model.value, family)
    )
    return (p_x, p_y, p_xy), closed, oracle


def render_oracle(config, n=None, pairs=None, out=None, audit_log=None):
    n = int(n if n is not None else config.options.get("n", DEFAULT_N))
    if not 0 <= n <= ORACLE_MAX_N:
        raise ConfigurationError(f"n: expected an integer in [0, {ORACLE_MAX_N}], got {n}")
    distances = parse_pairs(pairs or config.options.get("pairs"), upper_distance(config))

    records = []
    for d in distances:
        x, y = points_at_distance(config.model.space, float(d))
        probs, closed, oracle = compare_at_n(config.model, n, x, y)
        records.append([
            float(d), *probs,
            closed.mixed_moment, oracle.mixed_moment,
            closed.correlation, oracle.correlation,
            abs(closed.mixed_moment - oracle.mixed_moment),
        ])
    frame = pd.DataFrame(records, columns=COLUMNS, dtype=float)
    write_text(frame.to_csv(index=False, float_format="%.17g", na_rep="nan", lineterminator="\n"), out)

    worst = float(np.nanmax(frame["abs_diff"])) if len(frame) else 0.0
    logger.info("oracle n=%d: largest closed/oracle gap %.3g", n, worst)
    log_run(
        "oracle",
        {"n": n, "points": int(len(distances)), "max_abs_diff": worst},
        seed=config.seed,
        config=config.raw,
        path=audit_log,
    )
    return 0
