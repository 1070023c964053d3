"""Command-line entry points.

Exit codes: 0 ok, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .analytics import overall_sub_area, sub_area_cutoff
from .config import load_config, validate_config
from .errors import (ConfigParseError, InvalidConfig, MissingDocument,
                     NoQualifyingYear, NoReferenceData, RtiMonError,
                     SourceUnavailable)
from .service import REF_PARAM, build_state, create_app, run_ingest
from .store import ExportFormat, ObservationStore

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtimon",
        description="Research/technology/innovation monitoring backend")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--config", required=True, metavar="DIR")
    serve.add_argument("--store", required=True, metavar="DIR")
    serve.add_argument("--bind", default="127.0.0.1:8000",
                       metavar="HOST:PORT")

    validate = sub.add_parser("validate-config",
                              help="check the config documents")
    validate.add_argument("--config", required=True, metavar="DIR")

    ingest = sub.add_parser("ingest", help="fetch and integrate one source")
    ingest.add_argument("--config", required=True, metavar="DIR")
    ingest.add_argument("--store", required=True, metavar="DIR")
    ingest.add_argument("--source", required=True, metavar="ID")
    ingest.add_argument("--file", metavar="PATH",
                        help="use this file instead of fetching")

    compute = sub.add_parser("compute",
                             help="print all sub-area overall scores")
    compute.add_argument("--config", required=True, metavar="DIR")
    compute.add_argument("--store", required=True, metavar="DIR")
    compute.add_argument("--ref", choices=sorted(REF_PARAM),
                         default="leaders")
    compute.add_argument("--year", type=int)

    export = sub.add_parser("export", help="export the store as CSV")
    export.add_argument("--store", required=True, metavar="DIR")
    export.add_argument("--out", required=True, metavar="PATH")

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (MissingDocument, ConfigParseError, InvalidConfig) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SourceUnavailable, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RtiMonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def _dispatch(args) -> int:
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "validate-config":
        return _cmd_validate(args)
    if args.command == "ingest":
        return _cmd_ingest(args)
    if args.command == "compute":
        return _cmd_compute(args)
    if args.command == "export":
        return _cmd_export(args)
    raise AssertionError(f"unhandled command {args.command}")


def _cmd_serve(args) -> int:
    import uvicorn

    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        print(f"error: --bind expects HOST:PORT, got {args.bind!r}",
              file=sys.stderr)
        return EXIT_VALIDATION
    state = build_state(args.config, args.store)
    app = create_app(state)
    try:
        uvicorn.run(app, host=host, port=int(port), log_level="info")
    except OSError as exc:  # address in use, permission denied
        print(f"error: cannot bind {args.bind}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        config = load_config(args.config)
    except InvalidConfig as exc:
        for error in exc.errors:
            print(error, file=sys.stderr)
        return EXIT_VALIDATION
    errors = validate_config(config)
    for error in errors:
        print(error, file=sys.stderr)
    if errors:
        return EXIT_VALIDATION
    print(f"ok: {len(config.indicators)} indicators, "
          f"{len(config.graph.areas)} areas, "
          f"{len(config.graph.sub_areas)} sub-areas, "
          f"{len(config.goals)} goals")
    return EXIT_OK


def _cmd_ingest(args) -> int:
    state = build_state(args.config, args.store)
    inline = None
    if args.file:
        inline = Path(args.file).read_bytes()
    result = run_ingest(state, args.source, inline=inline)
    print(json.dumps(result["report"], indent=2))
    return EXIT_OK


def _cmd_compute(args) -> int:
    state = build_state(args.config, args.store)
    config, store = state.config, state.store
    snap = store.snapshot()
    ref = REF_PARAM[args.ref]
    target = config.references.target_region
    for sa in config.graph.sub_areas:
        year = args.year
        if year is None:
            try:
                year = sub_area_cutoff(sa.id, snap, config)
            except NoQualifyingYear:
                print(f"{sa.id}\t-\tInsufficientData\tno data")
                continue
        try:
            score = overall_sub_area(sa.id, target, year, ref, snap, config)
        except NoReferenceData:
            print(f"{sa.id}\t{year}\tInsufficientData\tno reference data")
            continue
        percent = "-" if score.percent is None else f"{score.percent:.2f}"
        print(f"{sa.id}\t{year}\t{score.band.value}\t{percent}")
    return EXIT_OK


def _cmd_export(args) -> int:
    store = ObservationStore(args.store)
    snap = store.snapshot()
    count = store.export(snap, ExportFormat.CSV, args.out)
    print(f"exported {count} observations to {args.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
