"""
Constrained optimization of the free circuit parameters at fixed target s.

BS has one free parameter once the constraint fixes t2 from t1, so it is
searched on a dense grid and refined with a bounded golden-section/Brent
step. BSPS has two (t1, t2) with phi solved from the constraint and is
searched with differential evolution. PS and BAS are fully determined by s.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import differential_evolution, minimize_scalar

try:
    from . import config
    from .noise_model import (
        InfeasibleParametersError, SqueezerConfig, Variant, bas_config, bs_config, bsps_config,
        bsps_feasible, decibels, entanglement_breaking, noise_matrix, ps_config,
        scale_from_decibels, total_noise,
    )
    from .phase_space import PhotonState, TransformedState, fidelity
except ImportError:
    import config
    from noise_model import (
        InfeasibleParametersError, SqueezerConfig, Variant, bas_config, bs_config, bsps_config,
        bsps_feasible, decibels, entanglement_breaking, noise_matrix, ps_config,
        scale_from_decibels, total_noise,
    )
    from phase_space import PhotonState, TransformedState, fidelity

logger = logging.getLogger(__name__)

FLAT_TOL = 1e-12  # objective differences below this count as ties


class ObjectiveKind(str, Enum):
    FIDELITY = "fidelity"
    TOTAL_NOISE = "total_noise"

    @property
    def maximize(self) -> bool:
        return self is ObjectiveKind.FIDELITY


@dataclass(frozen=True)
class OptResult:
    config: SqueezerConfig
    objective: float
    objective_kind: ObjectiveKind
    evaluations: int
    metadata: dict = field(default_factory=dict)
    delta_fidelity: float | None = None
    delta_noise: float | None = None

    @property
    def t1_sq(self) -> float:
        return self.config.t1 ** 2

    @property
    def t2_sq(self) -> float:
        return self.config.t2 ** 2

    def to_dict(self) -> dict:
        cfg = self.config
        s_target = self.metadata.get("s_target")
        return {
            "variant": cfg.variant.value,
            "s_db": None if s_target is None else decibels(s_target),
            "t1_sq": self.t1_sq,
            "t2_sq": self.t2_sq,
            "phi": cfg.phi,
            "t0_sq": cfg.t0 ** 2,
            "resource_db": cfg.resource_db,
            "eta_s": cfg.eta_s,
            "eta_h": cfg.eta_h,
            "objective": self.objective,
            "objective_kind": self.objective_kind.value,
            "evaluations": self.evaluations,
            "delta_fidelity": self.delta_fidelity,
            "delta_noise": self.delta_noise,
            "metadata": dict(self.metadata),
        }


def objective_value(
    cfg: SqueezerConfig, s: float, state: PhotonState, kind: ObjectiveKind, checked: bool = False
) -> float:
    """Fidelity with the target S(s)|n>, or total noise, of a config."""
    model = noise_matrix(cfg)
    if kind is ObjectiveKind.TOTAL_NOISE:
        return total_noise(model)
    check = config.GH_CHECK_ORDER if checked else None
    return fidelity(TransformedState(state, s, model.sigma), check_order=check)


def bs_t1_bounds(s: float) -> tuple[float, float]:
    """Range of t1 keeping both t1^2 and the solved t2^2 inside the search bounds."""
    lo_sq, hi_sq = config.T_SQ_MIN, config.T_SQ_MAX
    s2 = s * s
    # t2^2 = (1 - T1)/(1 - T1 + s^2 T1) decreases with T1
    t1_sq_lo = max(lo_sq, (1.0 - hi_sq) / (1.0 - hi_sq + hi_sq * s2))
    t1_sq_hi = min(hi_sq, (1.0 - lo_sq) / (1.0 - lo_sq + lo_sq * s2))
    if t1_sq_lo > t1_sq_hi:
        raise InfeasibleParametersError(f"no BS circuit realizes s={s:.6g} inside the search bounds")
    return math.sqrt(t1_sq_lo), math.sqrt(t1_sq_hi)


def _signed(kind: ObjectiveKind, value: float) -> float:
    """Value as a quantity to minimize."""
    return -value if kind.maximize else value


def _search_bs(s, state, kind, fields, method, seed):
    lo, hi = bs_t1_bounds(s)
    evaluations = 0

    def cost(t1: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return _signed(kind, objective_value(bs_config(s, t1, **fields), s, state, kind))

    if method == "global":
        result = differential_evolution(
            lambda x: cost(float(x[0])),
            bounds=[(lo, hi)],
            popsize=config.DE_POPULATION,
            maxiter=config.DE_GENERATIONS,
            tol=config.DE_TOL,
            seed=seed,
            polish=True,
        )
        meta = {"optimizer": "differential_evolution", "population": config.DE_POPULATION,
                "generations": config.DE_GENERATIONS, "tol": config.DE_TOL, "seed": seed}
        return float(result.x[0]), evaluations, meta

    grid = np.arange(lo, hi, config.GRID_STEP)
    grid = np.append(grid, hi)
    values = np.array([cost(float(t)) for t in grid])
    best_value = float(values.min())
    # smallest t1 among ties keeps flat objectives deterministic
    i = int(np.flatnonzero(values <= best_value + FLAT_TOL)[0])
    best_t1 = float(grid[i])

    a, b = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, len(grid) - 1)])
    if b > a:
        refined = minimize_scalar(cost, bounds=(a, b), method="bounded",
                                  options={"xatol": config.REFINE_TOL})
        if refined.fun < best_value - FLAT_TOL:
            best_t1 = float(refined.x)
    meta = {"optimizer": "grid+bounded", "grid_step": config.GRID_STEP, "refine_tol": config.REFINE_TOL}
    return best_t1, evaluations, meta


def _search_bsps(s, state, kind, fields, seed, warm_start):
    lo, hi = math.sqrt(config.T_SQ_MIN), math.sqrt(config.T_SQ_MAX)
    if warm_start is not None:
        warm_start = np.clip(warm_start, lo, hi)
    evaluations = 0

    def cost(x) -> float:
        nonlocal evaluations
        t1, t2 = float(x[0]), float(x[1])
        if not bsps_feasible(s, t1, t2):
            return config.INFEASIBLE_PENALTY
        try:
            cfg = bsps_config(s, t1, t2, **fields)
        except InfeasibleParametersError:
            return config.INFEASIBLE_PENALTY
        evaluations += 1
        return _signed(kind, objective_value(cfg, s, state, kind))

    result = differential_evolution(
        cost,
        bounds=[(lo, hi), (lo, hi)],
        popsize=max(config.DE_POPULATION // 2, 1),  # scipy multiplies by the dimension
        maxiter=config.DE_GENERATIONS,
        tol=config.DE_TOL,
        seed=seed,
        polish=True,
        x0=warm_start,
    )
    if result.fun >= config.INFEASIBLE_PENALTY:
        raise InfeasibleParametersError(f"no BSPS circuit realizes s={s:.6g} inside the search bounds")
    meta = {"optimizer": "differential_evolution", "population": config.DE_POPULATION,
            "generations": config.DE_GENERATIONS, "tol": config.DE_TOL, "seed": seed,
            "warm_start": None if warm_start is None else [float(v) for v in warm_start]}
    return (float(result.x[0]), float(result.x[1])), evaluations, meta


def _optimize(s_target, variant, kind, state, seed, method, fields) -> OptResult:
    variant = Variant(variant)
    state = PhotonState(state)
    if not 0.0 < s_target <= 1.0:
        raise InfeasibleParametersError(f"target squeeze scale must lie in (0, 1], got {s_target}")

    if variant is Variant.PS:
        cfg, evaluations, meta = ps_config(s_target, **fields), 1, {"optimizer": "closed_form"}
    elif variant is Variant.BAS:
        cfg, evaluations, meta = bas_config(s_target, **fields), 1, {"optimizer": "closed_form"}
    elif variant is Variant.BS:
        t1, evaluations, meta = _search_bs(s_target, state, kind, fields, method, seed)
        cfg = bs_config(s_target, t1, **fields)
    else:
        bs = _optimize(s_target, Variant.BS, kind, state, seed, "grid", fields)
        warm = np.array([bs.config.t1, bs.config.t2])
        (t1, t2), evaluations, meta = _search_bsps(s_target, state, kind, fields, seed, warm)
        evaluations += bs.evaluations
        cfg = bsps_config(s_target, t1, t2, **fields)

    objective = objective_value(cfg, s_target, state, kind, checked=True)
    meta = {**meta, "s_target": s_target, "state": state.value}
    logger.debug("optimized %s %s at s=%.6g: %.12g after %d evaluations",
                 variant.value, kind.value, s_target, objective, evaluations)
    return OptResult(cfg, objective, kind, evaluations, meta)


def optimize_fidelity(
    s_target: float,
    variant: Variant,
    state: PhotonState = PhotonState.SINGLE_PHOTON,
    seed: int = config.DEFAULT_SEED,
    method: str = "grid",
    **fields,
) -> OptResult:
    """Fidelity-optimal circuit realizing s_target.

    Args:
        s_target: Target squeeze scale in (0, 1].
        variant: Squeezer variant; PS and BAS have no free parameter.
        state: Input state that defines the fidelity.
        seed: Seed of the population search.
        method: "grid" or "global" for BS; BSPS always uses the global search.
        **fields: Fixed SqueezerConfig fields (resource_db, eta_s, eta_h).
    """
    return _optimize(s_target, variant, ObjectiveKind.FIDELITY, state, seed, method, fields)


def optimize_total_noise(
    s_target: float,
    variant: Variant,
    state: PhotonState = PhotonState.SINGLE_PHOTON,
    seed: int = config.DEFAULT_SEED,
    method: str = "grid",
    **fields,
) -> OptResult:
    """Total-noise-optimal circuit, compared against the fidelity optimum.

    delta_fidelity = F(N_T optimum) - F(F optimum) and delta_noise =
    N_T(N_T optimum) - N_T(F optimum); both are non-positive.
    """
    noise_opt = _optimize(s_target, variant, ObjectiveKind.TOTAL_NOISE, state, seed, method, fields)
    fid_opt = _optimize(s_target, variant, ObjectiveKind.FIDELITY, state, seed, method, fields)
    f_at_noise_opt = objective_value(noise_opt.config, s_target, state, ObjectiveKind.FIDELITY, checked=True)
    n_at_fid_opt = total_noise(noise_matrix(fid_opt.config))
    return OptResult(
        noise_opt.config,
        noise_opt.objective,
        ObjectiveKind.TOTAL_NOISE,
        noise_opt.evaluations + fid_opt.evaluations,
        noise_opt.metadata,
        delta_fidelity=f_at_noise_opt - fid_opt.objective,
        delta_noise=noise_opt.objective - n_at_fid_opt,
    )


def optimal_config(s_target, variant, state=PhotonState.SINGLE_PHOTON, seed=config.DEFAULT_SEED, **fields):
    """Fidelity-optimal config, or the unique config of PS and BAS."""
    return optimize_fidelity(s_target, variant, state, seed, **fields).config


def find_breaking_threshold(
    variant: Variant,
    resource_db: float,
    eta_s: float,
    eta_h: float,
    state: PhotonState = PhotonState.SINGLE_PHOTON,
    lo_db: float = config.S_DB_MIN,
    hi_db: float = config.S_DB_MAX,
    resolution: float = config.THRESHOLD_RESOLUTION_DB,
    seed: int = config.DEFAULT_SEED,
) -> float | None:
    """First 10 log10(s^2) below hi_db where fidelity-optimal circuits break entanglement.

    A coarse scan downward from hi_db brackets the first crossing of
    N_P >= 1/4; bisection then narrows it to ``resolution``. Returns None when
    no point in [lo_db, hi_db] breaks.
    """
    fields = {"resource_db": resource_db, "eta_s": eta_s, "eta_h": eta_h}

    def breaks(s_db: float) -> bool:
        cfg = optimal_config(scale_from_decibels(s_db), variant, state, seed, **fields)
        return entanglement_breaking(noise_matrix(cfg))

    if breaks(hi_db):
        return hi_db
    upper = hi_db
    lower = None
    for s_db in np.arange(hi_db - config.THRESHOLD_SCAN_STEP_DB, lo_db - 1e-9, -config.THRESHOLD_SCAN_STEP_DB):
        if breaks(float(s_db)):
            lower = float(s_db)
            break
        upper = float(s_db)
    if lower is None:
        if upper > lo_db and breaks(lo_db):
            lower = lo_db
        else:
            logger.info("no entanglement breaking for %s on [%g, %g] dB", Variant(variant).value, lo_db, hi_db)
            return None

    while upper - lower > resolution:
        mid = 0.5 * (lower + upper)
        if breaks(mid):
            lower = mid
        else:
            upper = mid
    logger.info("%s breaks entanglement from %.3f dB", Variant(variant).value, lower)
    return lower
