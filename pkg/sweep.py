"""
Sweeps, run configuration and output formatting behind the command line.

A sweep walks the 10 log10(s^2) axis for every (variant, resource) pair,
optimizes the free parameters for fidelity where there are any, and
tabulates the requested metrics. Points run in parallel when the thread
environment variable asks for it; rows are sorted before writing so the
output never depends on scheduling.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

try:
    from . import config
    from .circuit_oracle import max_oracle_deviation, random_configs
    from .fock import fock_fidelity, photostatistics, reconstruct_rho
    from .noise_model import (
        DegenerateCircuitError, InfeasibleParametersError, SingularGainError, Variant,
        entanglement_breaking, noise_matrix, noise_product, scale_from_decibels, total_noise,
    )
    from .optimize import optimal_config
    from .phase_space import PhotonState, QuadratureAccuracyError, TransformedState, fidelity, wigner_origin
except ImportError:
    import config
    from circuit_oracle import max_oracle_deviation, random_configs
    from fock import fock_fidelity, photostatistics, reconstruct_rho
    from noise_model import (
        DegenerateCircuitError, InfeasibleParametersError, SingularGainError, Variant,
        entanglement_breaking, noise_matrix, noise_product, scale_from_decibels, total_noise,
    )
    from optimize import optimal_config
    from phase_space import PhotonState, QuadratureAccuracyError, TransformedState, fidelity, wigner_origin

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid run configuration."""


def _env(name: str, default: Optional[str] = None) -> Optional[str]:
    """Read a setting from the environment."""
    return os.environ.get(name, default)


def thread_count() -> int:
    raw = _env(config.THREADS_ENV, "1")
    try:
        count = int(raw)
    except ValueError:
        raise ConfigError(f"{config.THREADS_ENV} must be an integer, got {raw!r}") from None
    if count < 1:
        raise ConfigError(f"{config.THREADS_ENV} must be at least 1, got {count}")
    return count


# Metric name -> output column
METRIC_COLUMNS = {
    "fidelity": "fidelity",
    "w00": "w00",
    "total_noise": "N_T",
    "noise_product": "N_P",
    "breaking": "breaking",
    "covariance": "covar",
}
BASE_COLUMNS = [
    "schema", "variant", "state", "resource_db", "eta_s", "eta_h",
    "s_db", "t1_sq", "t2_sq", "phi", "t0_sq",
]


@dataclass(frozen=True)
class SweepSpec:
    variants: tuple = (Variant.PS, Variant.BS)
    input_state: PhotonState = PhotonState.SINGLE_PHOTON
    resource_db: tuple = field(default_factory=lambda: config.RESOURCE_LEVELS_DB)
    eta_s: float = field(default_factory=lambda: config.DEFAULT_ETA_S)
    eta_h: float = field(default_factory=lambda: config.DEFAULT_ETA_H)
    s_db_min: float = field(default_factory=lambda: config.S_DB_MIN)
    s_db_max: float = field(default_factory=lambda: config.S_DB_MAX)
    s_db_step: float = field(default_factory=lambda: config.S_DB_STEP)
    metrics: tuple = field(default_factory=lambda: config.METRICS)
    seed: int = field(default_factory=lambda: config.DEFAULT_SEED)

    def __post_init__(self):
        errors = []
        try:
            object.__setattr__(self, "variants", tuple(Variant(v) for v in self.variants))
        except ValueError as e:
            errors.append(f"variants: {e}")
        try:
            object.__setattr__(self, "input_state", PhotonState(self.input_state))
        except ValueError as e:
            errors.append(f"state: {e}")
        object.__setattr__(self, "resource_db", tuple(float(r) for r in self.resource_db))
        object.__setattr__(self, "metrics", tuple(self.metrics))

        if not self.variants:
            errors.append("variants must not be empty")
        if not self.resource_db or any(r < 0 or not math.isfinite(r) for r in self.resource_db):
            errors.append("resource_db must be a non-empty list of finite values >= 0")
        for name in ("eta_s", "eta_h"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                errors.append(f"{name} must lie in (0, 1], got {value}")
        if not config.S_DB_FLOOR < self.s_db_min <= self.s_db_max <= 0.0:
            errors.append(
                f"s axis must satisfy {config.S_DB_FLOOR:g} < s_db_min <= s_db_max <= 0, "
                f"got [{self.s_db_min}, {self.s_db_max}]"
            )
        if not self.s_db_step > 0.0:
            errors.append(f"s_db_step must be positive, got {self.s_db_step}")
        unknown = [m for m in self.metrics if m not in METRIC_COLUMNS]
        if not self.metrics or unknown:
            errors.append(f"metrics must be a non-empty subset of {list(METRIC_COLUMNS)}, got {list(self.metrics)}")
        if errors:
            raise ConfigError(" | ".join(errors))

    @property
    def s_axis(self) -> List[float]:
        n = int(math.floor((self.s_db_max - self.s_db_min) / self.s_db_step + 1e-9))
        return [round(self.s_db_min + i * self.s_db_step, 10) for i in range(n + 1)]

    @property
    def columns(self) -> List[str]:
        return BASE_COLUMNS + [METRIC_COLUMNS[m] for m in self.metrics] + ["status"]


def evaluate_point(spec: SweepSpec, variant: Variant, resource_db: float, s_db: float) -> Dict[str, Any]:
    """One sweep row: fidelity-optimal parameters and the requested metrics."""
    row: Dict[str, Any] = {
        "schema": config.SWEEP_SCHEMA_VERSION,
        "variant": variant.value,
        "state": spec.input_state.value,
        "resource_db": resource_db,
        "eta_s": spec.eta_s,
        "eta_h": spec.eta_h,
        "s_db": s_db,
    }
    s = scale_from_decibels(s_db)
    fields = {"resource_db": resource_db, "eta_s": spec.eta_s, "eta_h": spec.eta_h}
    try:
        cfg = optimal_config(s, variant, spec.input_state, spec.seed, **fields)
        model = noise_matrix(cfg)
        ts = TransformedState(spec.input_state, s, model.sigma)
        row.update({"t1_sq": cfg.t1 ** 2, "t2_sq": cfg.t2 ** 2, "phi": cfg.phi, "t0_sq": cfg.t0 ** 2})
        values = {
            "fidelity": lambda: fidelity(ts),
            "w00": lambda: wigner_origin(ts),
            "total_noise": lambda: total_noise(model),
            "noise_product": lambda: noise_product(model),
            "breaking": lambda: entanglement_breaking(model),
            "covariance": lambda: model.covariance,
        }
        for metric in spec.metrics:
            row[METRIC_COLUMNS[metric]] = values[metric]()
        row["status"] = "ok"
    except (InfeasibleParametersError, DegenerateCircuitError, SingularGainError, QuadratureAccuracyError) as e:
        logger.warning("sweep point %s %.3g dB at %.4g dB failed: %s", variant.value, resource_db, s_db, e)
        row["status"] = f"{type(e).__name__}: {e}"
    return row


def _evaluate_task(args) -> Dict[str, Any]:
    return evaluate_point(*args)


def run_sweep(spec: SweepSpec, threads: Optional[int] = None) -> List[Dict[str, Any]]:
    """All sweep rows, sorted by (variant, resource, s_db)."""
    tasks = [(spec, v, r, s_db) for v in spec.variants for r in spec.resource_db for s_db in spec.s_axis]
    threads = thread_count() if threads is None else threads
    logger.info("sweep: %d points on %d worker(s)", len(tasks), threads)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_evaluate_task, tasks, chunksize=4))
    else:
        rows = [_evaluate_task(t) for t in tasks]
    order = {v.value: i for i, v in enumerate(Variant)}
    rows.sort(key=lambda r: (order[r["variant"]], r["resource_db"], r["s_db"]))
    logger.info("sweep finished: %d rows, %d not ok", len(rows), sum(r["status"] != "ok" for r in rows))
    return rows


def run_oracle_check(grid_size: int = config.ORACLE_GRID_SIZE, seed: int = config.ORACLE_SEED) -> Dict[str, Any]:
    """Closed-form vs circuit-oracle noise matrices over a randomized grid."""
    deviation, worst = max_oracle_deviation(random_configs(grid_size, seed))
    return {
        "configs": grid_size,
        "seed": seed,
        "max_deviation": deviation,
        "tolerance": config.ORACLE_TOL,
        "ok": deviation < config.ORACLE_TOL,
        "worst_config": None if worst is None else config_record(worst),
    }


def run_photostat(
    variant: Variant,
    state: PhotonState,
    s_db: float,
    resource_db: float,
    eta_s: float,
    eta_h: float,
    dim: int = config.FOCK_DIM,
    quad_order: int = config.FOCK_QUAD_ORDER,
    seed: int = config.DEFAULT_SEED,
) -> Dict[str, Any]:
    """Photon-number distribution of the fidelity-optimal output state."""
    state = PhotonState(state)
    s = scale_from_decibels(s_db)
    cfg = optimal_config(s, variant, state, seed, resource_db=resource_db, eta_s=eta_s, eta_h=eta_h)
    model = noise_matrix(cfg)
    rho = reconstruct_rho(state, s, model.sigma, dim, quad_order)
    probs = photostatistics(rho)
    return {
        "config": config_record(cfg),
        "s_db": s_db,
        "state": state.value,
        "dim": dim,
        "quad_order": quad_order,
        "trace": rho.trace(),
        "trace_deficit": rho.trace_deficit,
        "fock_fidelity": fock_fidelity(rho, state, s),
        "phase_space_fidelity": fidelity(TransformedState(state, s, model.sigma)),
        "p_n": [float(p) for p in probs],
    }


def config_record(cfg) -> Dict[str, Any]:
    return {
        "variant": cfg.variant.value,
        "t1_sq": cfg.t1 ** 2,
        "t2_sq": cfg.t2 ** 2,
        "phi": cfg.phi,
        "t0_sq": cfg.t0 ** 2,
        "resource_db": cfg.resource_db,
        "eta_s": cfg.eta_s,
        "eta_h": cfg.eta_h,
    }


# =============================================================================
# Run configuration files
# =============================================================================

RUN_CONFIG_KEYS = {
    "variants", "variant", "state", "resource_db", "eta_s", "eta_h",
    "s_db_min", "s_db_max", "s_db_step", "s_db", "metrics", "seed",
    "fock_dim", "quad_order", "grid_size", "format",
}


def load_run_config(path) -> Dict[str, str]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from None
    values: Dict[str, str] = {}
    errors = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected key = value")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in RUN_CONFIG_KEYS:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        values[key] = value
    if errors:
        raise ConfigError(f"{path}: " + " | ".join(errors))
    return values


def split_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def parse_float(key: str, value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a number, got {value!r}") from None


def parse_int(key: str, value) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None


def parse_variant(value) -> Variant:
    try:
        return Variant(str(value).strip().upper())
    except ValueError:
        raise ConfigError(f"variant must be one of {[v.value for v in Variant]}, got {value!r}") from None


def parse_state(value) -> PhotonState:
    aliases = {"vacuum": PhotonState.VACUUM, "single_photon": PhotonState.SINGLE_PHOTON,
               "singlephoton": PhotonState.SINGLE_PHOTON, "photon": PhotonState.SINGLE_PHOTON}
    key = str(value).strip().lower().replace("-", "_")
    if key not in aliases:
        raise ConfigError(f"state must be vacuum or single_photon, got {value!r}")
    return aliases[key]


# =============================================================================
# Output
# =============================================================================

def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{config.FLOAT_DIGITS}g}"
    return str(value)


def rows_to_csv(rows: List[Dict[str, Any]], columns: List[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    return buffer.getvalue()


def _rounded(obj):
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return float(f"{value:.{config.FLOAT_DIGITS}g}") if math.isfinite(value) else None
    return obj


def to_json(obj) -> str:
    """JSON with floats rounded to the configured significant digits."""
    return json.dumps(_rounded(obj), indent=2, sort_keys=True) + "\n"
