"""Command-line front end.

Subcommands: `simulate` (one alpha/scheme cell), `sweep` (alpha grid x
schemes plus the PT-alone baseline), `validate` (reduced-scale self
checks), `serve` (run the HTTP service). All simulation parameters come
from defaults, then an optional `key = value` config file, then `--<key>
<value>` flags, in increasing precedence. CSV goes to --output, with `-`
meaning standard output.

With --server URL the first three subcommands call a running service
instead of computing in-process; results are identical.

Exit codes: 0 success, 1 validation failure, 2 I/O error, 3 numerical
failure.
"""

import argparse
import sys

from . import __version__
from .config import (
    DEFAULT_ALPHA_GRID,
    FIELD_TYPES,
    SCHEME_NAMES,
    SimConfig,
    build_config,
    parse_config_text,
)
from .engine import ReportRow, ThroughputReport, run_simulation, sweep
from .errors import ConfigError, NumericalError
from .report import emit_csv
from .validate import run_validate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="key = value config file")
    for name in FIELD_TYPES:
        parser.add_argument(
            f"--{name.replace('_', '-')}",
            dest=f"cfg_{name}",
            metavar="VALUE",
            help=f"override config field {name}",
        )


def _add_output_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-o", "--output", default="-", metavar="PATH", help="CSV sink; '-' for stdout"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coopswipt",
        description="Cooperative SWIPT cognitive-radio Monte-Carlo simulator",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one (alpha, scheme) cell")
    _add_config_flags(p_sim)
    _add_output_flag(p_sim)
    p_sim.add_argument("--server", metavar="URL", help="delegate to a running service")

    p_sweep = sub.add_parser("sweep", help="run an alpha grid for several schemes")
    _add_config_flags(p_sweep)
    _add_output_flag(p_sweep)
    p_sweep.add_argument(
        "--alpha-grid", metavar="A:B:STEP", help="inclusive grid, e.g. 0.05:0.95:0.1"
    )
    p_sweep.add_argument(
        "--schemes", metavar="LIST", help=f"comma-separated subset of {','.join(SCHEME_NAMES)}"
    )
    p_sweep.add_argument("--workers", type=int, default=1, help="parallel sweep cells")
    p_sweep.add_argument("--server", metavar="URL", help="delegate to a running service")

    p_val = sub.add_parser("validate", help="run the reduced-scale check suite")
    _add_config_flags(p_val)
    p_val.add_argument("--server", metavar="URL", help="delegate to a running service")

    p_serve = sub.add_parser("serve", help="serve the HTTP API")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    return parser


def parse_alpha_grid(spec: str) -> list[float]:
    """Parse 'a:b:step' into an inclusive, float-drift-safe grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"alpha-grid: expected A:B:STEP, got {spec!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"alpha-grid: non-numeric value in {spec!r}") from None
    if step <= 0 or stop < start:
        raise ConfigError(f"alpha-grid: need step > 0 and B >= A, got {spec!r}")
    count = int((stop - start) / step + 1e-9) + 1
    grid = [round(start + k * step, 12) for k in range(count)]
    for a in grid:
        if not 0.0 <= a < 1.0:
            raise ConfigError(f"alpha-grid: values must be in [0, 1), got {a}")
    return grid


def parse_schemes(spec: str) -> list[str]:
    names = [s.strip().lower() for s in spec.split(",") if s.strip()]
    if not names:
        raise ConfigError("schemes: empty list")
    for name in names:
        if name not in SCHEME_NAMES:
            raise ConfigError(f"schemes: unknown scheme {name!r}")
    return names


def _load_config(args: argparse.Namespace) -> SimConfig:
    file_values: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            file_values = parse_config_text(fh.read())
    overrides: dict = {}
    for name, target_type in FIELD_TYPES.items():
        raw = getattr(args, f"cfg_{name}", None)
        if raw is None:
            continue
        from .config import _convert  # same coercion rules as the config file

        overrides[name] = _convert(name, raw, target_type)
    return build_config(file_values, overrides)


def _write_csv(report: ThroughputReport, output: str) -> None:
    if output == "-":
        emit_csv(report, sys.stdout)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            emit_csv(report, fh)


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    if args.server:
        from .client import remote_simulate

        row = remote_simulate(args.server, cfg)
    else:
        row = run_simulation(cfg).to_row()
    _write_csv(ThroughputReport([row]), args.output)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    grid = parse_alpha_grid(args.alpha_grid) if args.alpha_grid else list(DEFAULT_ALPHA_GRID)
    schemes = parse_schemes(args.schemes) if args.schemes else list(SCHEME_NAMES)
    if args.server:
        from .client import remote_sweep

        report = remote_sweep(args.server, cfg, grid, schemes, args.workers)
    else:
        report = sweep(cfg, grid, schemes, workers=args.workers)
    _write_csv(report, args.output)
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg = _load_config(args)
    if args.server:
        from .client import remote_validate

        result = remote_validate(args.server, cfg)
    else:
        result = run_validate(cfg)
    for line in result.summary_lines():
        print(line)
    return EXIT_OK if result.passed else EXIT_NUMERICAL


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("coopswipt.service:app", host=args.host, port=args.port)
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
