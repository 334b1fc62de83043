"""
Heisenberg-picture propagation of the squeezer circuits as exact linear forms.

Every mode quadrature is tracked as a linear combination of the independent
input symbols ("in.x", "s1.p", "A~.x", ...). Vacua carry a trailing "~".
The noise matrix then follows from symbol variances alone, which makes this
module an independent check of every closed form in noise_model.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

try:
    from . import config
    from .gaussian_core import GaussianGate, beam_splitter, rotation
    from .noise_model import (
        DegenerateCircuitError,
        SingularGainError,
        SqueezerConfig,
        Variant,
        noise_matrix,
        resource_variances,
    )
except ImportError:
    import config
    from gaussian_core import GaussianGate, beam_splitter, rotation
    from noise_model import (
        DegenerateCircuitError,
        SingularGainError,
        SqueezerConfig,
        Variant,
        noise_matrix,
        resource_variances,
    )

logger = logging.getLogger(__name__)

INPUT_SYMBOLS = ("in.x", "in.p")


@dataclass(frozen=True, eq=False)
class LinearForm:
    """Real linear combination of independent quadrature symbols."""

    coefficients: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", MappingProxyType(dict(self.coefficients)))

    @classmethod
    def symbol(cls, name: str) -> "LinearForm":
        return cls({name: 1.0})

    def coefficient(self, name: str) -> float:
        return self.coefficients.get(name, 0.0)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        merged = dict(self.coefficients)
        for name, c in other.coefficients.items():
            merged[name] = merged.get(name, 0.0) + c
        return LinearForm(merged)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "LinearForm":
        return LinearForm({name: scalar * c for name, c in self.coefficients.items()})

    __rmul__ = __mul__

    def without(self, names: Iterable[str]) -> "LinearForm":
        drop = set(names)
        return LinearForm({n: c for n, c in self.coefficients.items() if n not in drop})

    def covariance(self, other: "LinearForm", variances: Mapping[str, float]) -> float:
        """Bilinear covariance; symbols are independent with the given variances."""
        total = 0.0
        for name in sorted(self.coefficients.keys() & other.coefficients.keys()):
            total += self.coefficients[name] * other.coefficients[name] * variances[name]
        return total

    def variance(self, variances: Mapping[str, float]) -> float:
        return self.covariance(self, variances)


@dataclass(frozen=True)
class CircuitTrace:
    x_out: LinearForm
    p_out: LinearForm
    s_effective: float
    gains: tuple = (0.0, 0.0, 0.0)
    zeta: float = 0.0
    epsilon: float = 0.0


Modes = dict  # mode name -> [x form, p form]


def _mode(name: str) -> list:
    return [LinearForm.symbol(f"{name}.x"), LinearForm.symbol(f"{name}.p")]


def _apply_single(modes: Modes, name: str, gate: GaussianGate) -> None:
    x, p = modes[name]
    m = gate.matrix
    modes[name] = [m[0, 0] * x + m[0, 1] * p, m[1, 0] * x + m[1, 1] * p]


def _apply_two(modes: Modes, first: str, second: str, gate: GaussianGate) -> None:
    v = modes[first] + modes[second]
    m = gate.matrix
    out = []
    for i in range(4):
        acc = LinearForm({})
        for j in range(4):
            if m[i, j] != 0.0:
                acc = acc + m[i, j] * v[j]
        out.append(acc)
    modes[first], modes[second] = out[:2], out[2:]


def _lossy(modes: Modes, name: str, eta: float) -> None:
    """Loss as B(sqrt(eta)) with a fresh vacuum in the first port."""
    vac = f"{name}~"
    modes[vac] = _mode(vac)
    _apply_two(modes, vac, name, beam_splitter(math.sqrt(eta)))
    modes[name] = modes.pop(vac)


def _solve_unity_gains(x_c: LinearForm, p_c: LinearForm, q_a: LinearForm, q_b: LinearForm):
    """Gains (j1, j2, j3) that cancel the anti-squeezed source quadratures s1.p and s2.x."""
    qa_x = q_a.coefficient("s2.x")
    if qa_x == 0.0:
        raise DegenerateCircuitError("homodyne outcome q_A carries no resource correlation")
    j1 = -x_c.coefficient("s2.x") / qa_x
    lhs = np.array([
        [q_b.coefficient("s1.p"), q_a.coefficient("s1.p")],
        [q_b.coefficient("s2.x"), qa_x],
    ])
    if abs(np.linalg.det(lhs)) < 1e-15:
        raise SingularGainError("feed-forward gains diverge (cos phi = 0)")
    j2, j3 = np.linalg.solve(lhs, [-p_c.coefficient("s1.p"), -p_c.coefficient("s2.x")])
    return j1, float(j2), float(j3)


def _euler_angles(t: np.ndarray) -> tuple[float, float]:
    """(zeta, epsilon) with t = R(zeta) S(s) R(epsilon), s the smallest singular value."""
    u, sv, vt = np.linalg.svd(t)
    if sv[0] - sv[1] < 1e-12:
        return 0.0, math.atan2(t[1, 0], t[0, 0])
    # order the minor axis first; keep both factors proper rotations
    u, vt = u[:, ::-1].copy(), vt[::-1, :].copy()
    if np.linalg.det(u) < 0.0:
        u[:, 0] *= -1.0
        vt[0, :] *= -1.0
    return math.atan2(u[1, 0], u[0, 0]), math.atan2(vt[1, 0], vt[0, 0])


def _teleport(modes: Modes, signal: str, cfg: SqueezerConfig, t1, t2, phi, epsilon):
    """Generalized teleportation of ``signal``.

    Returns the output (x, p) forms before the final rotation and the gains.
    """
    modes["s1"] = _mode("s1")
    modes["s2"] = _mode("s2")
    _lossy(modes, "s1", cfg.eta_s)
    _lossy(modes, "s2", cfg.eta_s)

    # TMSV: (s1, s2) -> (E, C) = (t1 s2 + r1 s1, t1 s1 - r1 s2)
    _apply_two(modes, "s1", "s2", beam_splitter(t1))
    modes["E"], modes["C"] = modes.pop("s1"), modes.pop("s2")

    # (in, E) -> (A, B) = (t2 E + r2 in, t2 in - r2 E)
    _apply_single(modes, signal, rotation(-epsilon))
    _apply_two(modes, signal, "E", beam_splitter(t2))
    modes["A"], modes["B"] = modes.pop(signal), modes.pop("E")

    _apply_single(modes, "B", rotation(phi))
    _lossy(modes, "A", cfg.eta_h)
    _lossy(modes, "B", cfg.eta_h)
    unity = 1.0 / math.sqrt(cfg.eta_h)
    q_a = unity * modes["A"][0]
    q_b = unity * modes["B"][1]

    x_c, p_c = modes["C"]
    j1, j2, j3 = _solve_unity_gains(x_c, p_c, q_a, q_b)
    modes["C"] = [x_c + j1 * q_a, p_c + j2 * q_b + j3 * q_a]
    return modes["C"], (j1, j2, j3)


def _require_nondegenerate(cfg: SqueezerConfig) -> None:
    if cfg.variant == Variant.BAS:
        bad = ["t0"] if cfg.t0 == 0.0 else []
    else:
        bad = [n for n in ("t1", "t2") if getattr(cfg, n) in (0.0, 1.0)]
    if bad:
        raise DegenerateCircuitError(f"{', '.join(bad)} leaves the circuit without signal or correlation")


def _propagate(cfg: SqueezerConfig, epsilon: float):
    modes: Modes = {"in": _mode("in")}
    if cfg.variant == Variant.BAS:
        signal = _pre_squeeze(modes, cfg)
        return _teleport(modes, signal, cfg, config.BALANCED_T, config.BALANCED_T, 0.0, epsilon)
    return _teleport(modes, "in", cfg, cfg.t1, cfg.t2, cfg.phi, epsilon)


def build_and_propagate(cfg: SqueezerConfig) -> CircuitTrace:
    """Propagate the configured circuit and return the output linear forms.

    A first pass without input rotation yields the teleported map T; its
    singular value decomposition fixes the phase shifts zeta and epsilon of
    the second pass.
    """
    _require_nondegenerate(cfg)
    if cfg.variant == Variant.BAS:
        zeta, epsilon = 0.0, 0.0
    else:
        (x_c, p_c), _ = _propagate(cfg, 0.0)
        t = np.array([
            [x_c.coefficient("in.x"), x_c.coefficient("in.p")],
            [p_c.coefficient("in.x"), p_c.coefficient("in.p")],
        ])
        zeta, epsilon = _euler_angles(t)
    (x_out, p_out), ff_gains = _propagate(cfg, epsilon)
    m = rotation(-zeta).matrix
    x_out, p_out = m[0, 0] * x_out + m[0, 1] * p_out, m[1, 0] * x_out + m[1, 1] * p_out
    s_eff = x_out.coefficient("in.x")
    return CircuitTrace(x_out, p_out, s_eff, ff_gains, zeta, epsilon)


def _pre_squeeze(modes: Modes, cfg: SqueezerConfig) -> str:
    """Measurement-induced squeezing of the input with an x-squeezed ancilla."""
    modes["s0"] = _mode("s0")
    _lossy(modes, "s0", cfg.eta_s)
    # (s0, in) -> (O, M) = (t0 in + r0 s0, t0 s0 - r0 in); M is measured
    _apply_two(modes, "s0", "in", beam_splitter(cfg.t0))
    modes["O"], modes["M"] = modes.pop("s0"), modes.pop("in")
    _lossy(modes, "M", cfg.eta_h)
    q = modes.pop("M")[1] * (1.0 / math.sqrt(cfg.eta_h))
    x_o, p_o = modes["O"]
    # unity gain cancels the anti-squeezed ancilla quadrature
    gain = -p_o.coefficient("s0.p") / q.coefficient("s0.p")
    modes["O"] = [x_o, p_o + gain * q]
    return "O"


class _SymbolVariances(dict):
    """Source variances; any vacuum symbol ("...~.x") defaults to 1/2."""

    def __missing__(self, name):
        if name.endswith(("~.x", "~.p")):
            return config.VACUUM_VARIANCE
        raise KeyError(name)


def symbol_variances(cfg: SqueezerConfig) -> dict:
    """Variance of every noise symbol: sources squeezed in x (s1, s0) or p (s2)."""
    var_sq, var_anti = resource_variances(cfg.resource_db)
    return _SymbolVariances({
        "s1.x": var_sq, "s1.p": var_anti,
        "s2.x": var_anti, "s2.p": var_sq,
        "s0.x": var_sq, "s0.p": var_anti,
    })


def ideal_map(trace: CircuitTrace) -> np.ndarray:
    """Input-coefficient submatrix of the output quadratures."""
    return np.array([
        [trace.x_out.coefficient("in.x"), trace.x_out.coefficient("in.p")],
        [trace.p_out.coefficient("in.x"), trace.p_out.coefficient("in.p")],
    ])


def oracle_noise_matrix(trace: CircuitTrace, cfg: SqueezerConfig) -> np.ndarray:
    """Noise covariance from the propagated forms, excluding the input symbols."""
    variances = symbol_variances(cfg)
    nx = trace.x_out.without(INPUT_SYMBOLS)
    np_ = trace.p_out.without(INPUT_SYMBOLS)
    cov = nx.covariance(np_, variances)
    return np.array([[nx.variance(variances), cov], [cov, np_.variance(variances)]])


def random_configs(n: int, seed: int = config.ORACLE_SEED) -> list:
    """Deterministic randomized grid spanning all variants, resources and losses."""
    rng = np.random.default_rng(seed)
    variants = list(Variant)
    etas = (1.0, 0.9, 0.8)
    configs = []
    for i in range(n):
        t1, t2, t0 = rng.uniform(0.05, 0.95, size=3)
        configs.append(SqueezerConfig(
            variant=variants[i % len(variants)],
            t1=float(t1),
            t2=float(t2),
            t0=float(t0),
            phi=float(rng.uniform(-1.3, 1.3)),
            resource_db=float(rng.choice(config.RESOURCE_LEVELS_DB)),
            eta_s=float(rng.choice(etas)),
            eta_h=float(rng.choice(etas)),
        ))
    return configs


def max_oracle_deviation(configs) -> tuple[float, SqueezerConfig | None]:
    """Largest |Sigma_closed - Sigma_oracle| entry over the configs and its config."""
    worst, worst_cfg = 0.0, None
    for cfg in configs:
        closed = noise_matrix(cfg).sigma
        oracle = oracle_noise_matrix(build_and_propagate(cfg), cfg)
        dev = float(np.max(np.abs(closed - oracle)))
        if dev > worst or worst_cfg is None:
            worst, worst_cfg = dev, cfg
    logger.info("oracle check over %d configs: max deviation %.3e", len(configs), worst)
    return worst, worst_cfg
