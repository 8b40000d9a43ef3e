import hashlib
import json
import logging
import os
from datetime import datetime, timezone

import pandas as pd

logger = logging.getLogger(__name__)

LEDGER_ENV = "MOSAIC_AUDIT_LOG"


def config_digest(mapping):
    """Stable digest of a configuration mapping (canonical JSON, blake2b-128)."""
    canonical = json.dumps(mapping, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.blake2b(canonical.encode("utf-8"), digest_size=16).hexdigest()


def ledger_path(path=None):
    return path or os.getenv(LEDGER_ENV) or None


def log_run(command, details=None, seed=None, config=None, path=None):
    """
    Append one run to the ledger as a JSON line.

    Args:
        command: CLI command name (e.g. 'simulate', 'correlate')
        details: Optional - extra information about the run (JSON serialisable if possible)
        seed: Optional - root seed of the run
        config: Optional - configuration mapping, stored as its digest
        path: Optional - ledger file; defaults to $MOSAIC_AUDIT_LOG

    Returns:
        True when the entry was written, False otherwise
    """
    if details is not None:
        try:
            json.dumps(details)
        except (TypeError, ValueError) as e:
            logger.warning("run details are not JSON serialisable (%s); storing their string form", e)
            details = str(details)

    entry = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "command": command,
        "seed": seed,
        "config_digest": config_digest(config) if config is not None else None,
        "details": details,
    }
    target = ledger_path(path)
    if not target:
        logger.info("run %s (no ledger configured): %s", command, entry)
        return False
    try:
        with open(target, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(entry, sort_keys=True) + "\n")
        logger.debug("ledger entry for %s written to %s", command, target)
        return True
    except OSError as e:
        logger.error("could not write run ledger %s: %s", target, str(e))
        return False


def get_run_logs(path=None, command=None):
    """
    Read the ledger back.

    Args:
        path: Optional - ledger file; defaults to $MOSAIC_AUDIT_LOG
        command: Optional - keep only runs of this command

    Returns:
        DataFrame with one row per run, newest first
    """
    columns = ["timestamp", "command", "seed", "config_digest", "details"]
    target = ledger_path(path)
    if not target or not os.path.exists(target):
        return pd.DataFrame(columns=columns)
    records = []
    with open(target, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as e:
                logger.warning("skipping malformed ledger line %d: %s", number, str(e))
    frame = pd.DataFrame.from_records(records, columns=columns)
    if command is not None:
        frame = frame[frame["command"] == command]
    return frame.sort_values("timestamp", ascending=False).reset_index(drop=True)


def get_run_summary(path=None):
    """Runs per command and the number of distinct seeds."""
    frame = get_run_logs(path)
    if frame.empty:
        return {"command_counts": {}, "distinct_seeds": 0, "total_runs": 0}
    return {
        "command_counts": {k: int(v) for k, v in frame["command"].value_counts().items()},
        "distinct_seeds": int(frame["seed"].dropna().nunique()),
        "total_runs": int(len(frame)),
    }
