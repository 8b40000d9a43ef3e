"""mosaic-fields command line.

    mosaic-fields catalog list
    mosaic-fields catalog show t2r5 --alpha 0.5
    mosaic-fields simulate --config field.toml --grid 256x256 --format pgm --out field.pgm
    mosaic-fields correlate --row t1r1 --replicates 200000 --pairs 0:2:10
    mosaic-fields oracle --config field.toml --n 6
    mosaic-fields sum --config field.toml --m 200 --points 0,0.5

Exit codes: 0 ok, 1 usage or configuration error, 2 failed calibration.
"""
import argparse
import logging
import os
import sys

from components.catalog import render_catalog_list, render_catalog_show
from components.correlate import render_correlate
from components.oracle import render_oracle
from components.simulate import FORMATS, render_simulate
from components.sums import render_sum
from models.exceptions import ConfigurationError, MosaicError
from utils.config import DEFAULT_LOG_LEVEL, LOG_LEVEL_ENV, load_config

logger = logging.getLogger("mosaic")

EXIT_ERROR = 1


class MosaicArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(f"usage: {message}")


def configure_logging(level_name=None):
    name = (level_name or os.getenv(LOG_LEVEL_ENV) or DEFAULT_LOG_LEVEL).upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ConfigurationError(f"log level: unknown level {name!r}")
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def parse_row_params(extra):
    """``--key value`` or ``--key=value`` pairs left over by argparse."""
    params = {}
    items = list(extra)
    while items:
        token = items.pop(0)
        if not token.startswith("--") or len(token) < 3:
            raise ConfigurationError(f"usage: unexpected argument {token!r}")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        elif items and not items[0].startswith("--"):
            value = items.pop(0)
        else:
            raise ConfigurationError(f"usage: parameter --{key} needs a value")
        params[key.replace("-", "_")] = value
    return params


def build_parser():
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--out", help="write the result to this file instead of stdout")
    common.add_argument("--log-level", help=f"logging level (default ${LOG_LEVEL_ENV} or {DEFAULT_LOG_LEVEL})")
    common.add_argument("--audit-log", help="append a run record to this JSON-lines file")

    model = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    model.add_argument("--config", help="TOML run configuration")
    model.add_argument("--row", help="use a catalog row as the model; row parameters follow as --name value")
    model.add_argument("--seed", type=int, help="root seed (default $MOSAIC_SEED or 0)")
    model.add_argument("--threads", type=int, help="worker processes (default $MOSAIC_THREADS or all cores)")

    parser = MosaicArgumentParser(prog="mosaic-fields", allow_abbrev=False, description="Simulate and validate mosaic random fields.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=MosaicArgumentParser)

    catalog = sub.add_parser("catalog", allow_abbrev=False, parents=[common], help="browse the correlation catalog")
    catalog.add_argument("action", choices=["list", "show"])
    catalog.add_argument("row_id", nargs="?")

    simulate = sub.add_parser("simulate", allow_abbrev=False, parents=[common, model], help="rasterise one realization")
    simulate.add_argument("--grid", default=None, help="WxH (default 256x256)")
    simulate.add_argument("--format", dest="fmt", choices=FORMATS, default=None)

    correlate = sub.add_parser("correlate", allow_abbrev=False, parents=[common, model], help="Monte Carlo correlation check")
    correlate.add_argument("--pairs", help="distances as start:stop:count or a comma list")
    correlate.add_argument("--replicates", type=int)

    oracle = sub.add_parser("oracle", allow_abbrev=False, parents=[common, model], help="closed forms against exact enumeration")
    oracle.add_argument("--n", type=int)
    oracle.add_argument("--pairs", help="distances as start:stop:count or a comma list")

    sums = sub.add_parser("sum", allow_abbrev=False, parents=[common, model], help="normalised sums of independent realizations")
    sums.add_argument("--m", type=int)
    sums.add_argument("--points", help="distances from the anchor point, start:stop:count or a comma list; 0 (the default) is the anchor itself")
    sums.add_argument("--replicates", type=int, help="number of sums (default 1000)")
    return parser


def _run_config(args, extra):
    overrides = {"seed": args.seed, "threads": args.threads}
    if args.row:
        overrides["catalog"] = {"row": args.row, **parse_row_params(extra)}
    elif extra:
        raise ConfigurationError(f"usage: unrecognized arguments: {' '.join(extra)}")
    return load_config(args.config, overrides)


def dispatch(args, extra):
    if args.command == "catalog":
        if args.action == "list":
            if extra or args.row_id:
                raise ConfigurationError("usage: catalog list takes no further arguments")
            return render_catalog_list(args.out, args.audit_log)
        if not args.row_id:
            raise ConfigurationError("usage: catalog show needs a row id")
        return render_catalog_show(args.row_id, parse_row_params(extra), args.out, args.audit_log)

    config = _run_config(args, extra)
    if args.command == "simulate":
        grid = args.grid or config.options.get("grid", "256x256")
        fmt = args.fmt or config.options.get("format", "pgm")
        return render_simulate(config, grid, fmt, args.out, args.audit_log)
    if args.command == "correlate":
        return render_correlate(config, args.pairs, args.replicates, args.out, args.audit_log)
    if args.command == "oracle":
        return render_oracle(config, args.n, args.pairs, args.out, args.audit_log)
    return render_sum(config, args.m, args.points, args.replicates, args.out, args.audit_log)


def main(argv=None):
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        configure_logging(args.log_level)
        return dispatch(args, extra)
    except MosaicError as e:
        logger.debug("command failed", exc_info=True)
        print(f"error: {str(e)}", file=sys.stderr)
        return EXIT_ERROR


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
