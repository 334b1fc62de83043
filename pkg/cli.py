"""
Command-line runner for sweeps, optimizations, oracle checks and photo-statistics.

Run from the repository root:
    python cli.py sweep --config runs/fig2d.cfg --out fig2d.csv
    python cli.py optimize --variant BS --s-db -5 --resource-db 9
    python cli.py oracle-check --grid-size 1000 --seed 1
    python cli.py photostat --variant BS --state single_photon --s-db -5
    python cli.py threshold --variant BS --eta-s 0.8 --eta-h 0.9

Settings come from a flat ``key = value`` file (--config) and are
overridden by flags. Exit codes: 0 success, 2 infeasible parameters,
3 tolerance violation, 4 configuration error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

try:
    from . import config
    from .fock import FockTruncationError
    from .noise_model import DegenerateCircuitError, InfeasibleParametersError, SingularGainError, scale_from_decibels
    from .optimize import find_breaking_threshold, optimize_fidelity
    from .phase_space import QuadratureAccuracyError
    from . import sweep as sw
except ImportError:
    # Flat layout: modules sit next to this script
    sys.path.insert(0, str(Path(__file__).parent))
    import config
    from fock import FockTruncationError
    from noise_model import DegenerateCircuitError, InfeasibleParametersError, SingularGainError, scale_from_decibels
    from optimize import find_breaking_threshold, optimize_fidelity
    from phase_space import QuadratureAccuracyError
    import sweep as sw

logger = logging.getLogger(__name__)


class ToleranceViolation(RuntimeError):
    """A check finished but exceeded its tolerance; the full report is still written."""

    def __init__(self, message: str, text: str, worst_config=None):
        super().__init__(message)
        self.text = text
        self.worst_config = worst_config


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the configuration-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(config.EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        description="Teleportation-based squeezing gate toolkit.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python cli.py sweep --variant PS,BS --state single_photon --eta-s 0.8 --eta-h 0.9
  python cli.py sweep --config runs/lossless.cfg --format json --out lossless.json
  python cli.py optimize --variant BSPS --s-db -7 --resource-db 9 --seed 42
  python cli.py oracle-check --grid-size 1000 --seed 1
  python cli.py photostat --variant BS --s-db -9 --fock-dim 40 --quad-order 60
  python cli.py threshold --variant BS --resource-db 9 --eta-s 0.8 --eta-h 0.9

Environment:
  TSQZ_THREADS   worker processes for sweeps (default 1)
        """,
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Warnings and errors only")

    common = _Parser(add_help=False)
    common.add_argument("--config", help="Flat key = value run configuration file")
    common.add_argument("--out", help="Output file (default: stdout)")
    common.add_argument("--seed", type=int, help=f"Optimizer seed (default {config.DEFAULT_SEED})")
    common.add_argument("--format", choices=["csv", "json"], help="Output format")
    common.add_argument("--variant", help="PS, BS, BSPS or BAS (comma-separated for sweeps)")
    common.add_argument("--resource-db", help="Resource squeezing in dB (comma-separated for sweeps)")
    common.add_argument("--eta-s", type=float, help="Source transmissivity")
    common.add_argument("--eta-h", type=float, help="Homodyne efficiency")
    common.add_argument("--state", help="vacuum or single_photon")
    common.add_argument("--s-db", type=float, help="Target squeezing 10 log10(s^2)")
    common.add_argument("--fock-dim", type=int, help=f"Fock truncation (default {config.FOCK_DIM})")
    common.add_argument("--quad-order", type=int, help=f"Fock quadrature order (default {config.FOCK_QUAD_ORDER})")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sweep_p = sub.add_parser("sweep", parents=[common], help="Tabulate metrics along the s axis")
    sweep_p.add_argument("--metrics", help=f"Comma-separated subset of {','.join(config.METRICS)}")
    sweep_p.add_argument("--s-db-min", type=float)
    sweep_p.add_argument("--s-db-max", type=float)
    sweep_p.add_argument("--s-db-step", type=float)
    sub.add_parser("optimize", parents=[common], help="Fidelity-optimal parameters at one s")
    oracle_p = sub.add_parser("oracle-check", parents=[common], help="Closed form vs circuit oracle")
    oracle_p.add_argument("--grid-size", type=int)
    sub.add_parser("photostat", parents=[common], help="Photon-number distribution of the output")
    sub.add_parser("threshold", parents=[common], help="Entanglement-breaking threshold in dB")
    return parser


def _settings(args) -> dict:
    """File values overridden by flags, as raw strings or numbers."""
    values = sw.load_run_config(args.config) if args.config else {}
    for key in sw.RUN_CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            values[key] = value
    if "variant" in values:
        values["variants"] = values.pop("variant")
    if values.get("format", "csv") not in ("csv", "json"):
        raise sw.ConfigError(f"format must be csv or json, got {values['format']!r}")
    return values


def _first_variant(values: dict):
    raw = values.get("variants", "BS")
    items = sw.split_list(str(raw))
    if len(items) != 1:
        raise sw.ConfigError(f"exactly one variant expected, got {raw!r}")
    return sw.parse_variant(items[0])


def _single_resource(values: dict) -> float:
    items = sw.split_list(str(values.get("resource_db", config.DEFAULT_RESOURCE_DB)))
    if len(items) != 1:
        raise sw.ConfigError(f"exactly one resource_db expected, got {values.get('resource_db')!r}")
    return sw.parse_float("resource_db", items[0])


def _fields(values: dict) -> dict:
    return {
        "resource_db": _single_resource(values),
        "eta_s": sw.parse_float("eta_s", values.get("eta_s", config.DEFAULT_ETA_S)),
        "eta_h": sw.parse_float("eta_h", values.get("eta_h", config.DEFAULT_ETA_H)),
    }


def _seed(values: dict) -> int:
    return sw.parse_int("seed", values.get("seed", config.DEFAULT_SEED))


def _state(values: dict):
    return sw.parse_state(values.get("state", "single_photon"))


def _s_db(values: dict) -> float:
    if "s_db" not in values:
        raise sw.ConfigError("s_db is required")
    s_db = sw.parse_float("s_db", values["s_db"])
    if not config.S_DB_FLOOR < s_db <= 0.0:
        raise sw.ConfigError(f"s_db must lie in ({config.S_DB_FLOOR:g}, 0], got {s_db}")
    return s_db


def cmd_sweep(values: dict):
    spec = sw.SweepSpec(
        variants=tuple(sw.parse_variant(v) for v in sw.split_list(str(values.get("variants", "PS,BS")))),
        input_state=_state(values),
        resource_db=tuple(
            sw.parse_float("resource_db", r)
            for r in sw.split_list(str(values.get("resource_db", ",".join(map(str, config.RESOURCE_LEVELS_DB)))))
        ),
        eta_s=sw.parse_float("eta_s", values.get("eta_s", config.DEFAULT_ETA_S)),
        eta_h=sw.parse_float("eta_h", values.get("eta_h", config.DEFAULT_ETA_H)),
        s_db_min=sw.parse_float("s_db_min", values.get("s_db_min", config.S_DB_MIN)),
        s_db_max=sw.parse_float("s_db_max", values.get("s_db_max", config.S_DB_MAX)),
        s_db_step=sw.parse_float("s_db_step", values.get("s_db_step", config.S_DB_STEP)),
        metrics=tuple(sw.split_list(str(values.get("metrics", ",".join(config.METRICS))))),
        seed=_seed(values),
    )
    rows = sw.run_sweep(spec)
    if values.get("format", "csv") == "json":
        text = sw.to_json({"schema": config.SWEEP_SCHEMA_VERSION, "columns": spec.columns, "rows": rows})
    else:
        text = sw.rows_to_csv(rows, spec.columns)
    return text, config.EXIT_OK


def cmd_optimize(values: dict):
    result = optimize_fidelity(
        scale_from_decibels(_s_db(values)), _first_variant(values), _state(values), _seed(values), **_fields(values)
    )
    return sw.to_json(result.to_dict()), config.EXIT_OK


def cmd_oracle_check(values: dict):
    report = sw.run_oracle_check(
        sw.parse_int("grid_size", values.get("grid_size", config.ORACLE_GRID_SIZE)),
        sw.parse_int("seed", values.get("seed", config.ORACLE_SEED)),
    )
    text = sw.to_json(report)
    if not report["ok"]:
        raise ToleranceViolation(
            f"oracle deviation {report['max_deviation']:.3e} exceeds {report['tolerance']:.0e}",
            text,
            report["worst_config"],
        )
    return text, config.EXIT_OK


def cmd_photostat(values: dict):
    fields = _fields(values)
    report = sw.run_photostat(
        _first_variant(values), _state(values), _s_db(values),
        fields["resource_db"], fields["eta_s"], fields["eta_h"],
        sw.parse_int("fock_dim", values.get("fock_dim", config.FOCK_DIM)),
        sw.parse_int("quad_order", values.get("quad_order", config.FOCK_QUAD_ORDER)),
        _seed(values),
    )
    if values.get("format", "csv") == "json":
        return sw.to_json(report), config.EXIT_OK
    rows = [{"n": n, "p_n": p} for n, p in enumerate(report["p_n"])]
    return sw.rows_to_csv(rows, ["n", "p_n"]), config.EXIT_OK


def cmd_threshold(values: dict):
    fields = _fields(values)
    variant = _first_variant(values)
    threshold = find_breaking_threshold(
        variant, fields["resource_db"], fields["eta_s"], fields["eta_h"], _state(values), seed=_seed(values)
    )
    return sw.to_json({"variant": variant.value, **fields, "threshold_db": threshold}), config.EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
    "oracle-check": cmd_oracle_check,
    "photostat": cmd_photostat,
    "threshold": cmd_threshold,
}


def _fail(code: int, error: Exception, **extra) -> int:
    report = {"error": type(error).__name__, "message": str(error), "exit_code": code, **extra}
    print(json.dumps(report), file=sys.stderr)
    return code


def _write(out, text: str) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    """Main entry point with CLI argument parsing."""
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        text, code = COMMANDS[args.command](_settings(args))
    except (InfeasibleParametersError, DegenerateCircuitError, SingularGainError) as e:
        return _fail(config.EXIT_INFEASIBLE, e)
    except (QuadratureAccuracyError, FockTruncationError) as e:
        return _fail(config.EXIT_TOLERANCE, e)
    except ToleranceViolation as e:
        _write(args.out, e.text)
        return _fail(config.EXIT_TOLERANCE, e, worst_config=e.worst_config)
    except (sw.ConfigError, ValueError) as e:
        return _fail(config.EXIT_CONFIG, e)

    _write(args.out, text)
    return code


if __name__ == "__main__":
    sys.exit(main())
