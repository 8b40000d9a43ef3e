import io
import logging

import numpy as np
import pandas as pd

from components.output import write_text
from models.catalog import CatalogManager
from utils.audit import log_run

logger = logging.getLogger(__name__)

SHOW_POINTS = 20


def _describe_model(entry):
    model = entry.model
    lines = [
        f"space:    {model.space}",
        f"sets:     {model.sets}",
        f"count:    {model.count}",
        f"value:    {model.value}",
        f"submodel: {model.submodel.kind}",
    ]
    return "\n".join(lines)


def render_catalog_list(out=None, audit_log=None):
    rows = CatalogManager.list_rows()
    table_rows = rows[~rows["extra"]].drop(columns="extra")
    extras = rows[rows["extra"]].drop(columns="extra")

    buffer = io.StringIO()
    buffer.write(f"table rows ({len(table_rows)})\n")
    buffer.write(table_rows.to_string(index=False))
    buffer.write(f"\n\nextras ({len(extras)})\n")
    buffer.write(extras.to_string(index=False))
    buffer.write("\n")
    write_text(buffer.getvalue(), out)
    log_run("catalog list", {"rows": int(len(rows))}, path=audit_log)
    return 0


def render_catalog_show(row_id, params, out=None, audit_log=None):
    entry = CatalogManager.get_row(row_id, **params)
    grid = CatalogManager.distance_grid(entry, SHOW_POINTS)
    table = pd.DataFrame({"d": grid, "rho": np.asarray(entry(grid), dtype=float)})

    buffer = io.StringIO()
    buffer.write(f"{entry.row_id}: {entry.title}\n")
    buffer.write("parameters: " + ", ".join(f"{k}={v:g}" for k, v in entry.params.items()) + "\n")
    if entry.argument == "offset":
        buffer.write("rho is a function of the offset along the first axis\n")
    buffer.write(_describe_model(entry) + "\n\n")
    buffer.write(table.to_csv(index=False, float_format="%.17g", lineterminator="\n"))
    write_text(buffer.getvalue(), out)
    log_run("catalog show", {"row": row_id, "params": dict(entry.params)}, path=audit_log)
    return 0
