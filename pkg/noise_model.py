"""
Closed-form noise model of teleportation-based squeezers.

Four variants share one circuit: a two-mode squeezed resource made from two
lossy squeezed sources on B(t1), a B(t2) coupling to the input, homodyne
detection of x_A and of p_B rotated by phi, and unity-gain feed-forward.

    PS    balanced beam splitters, squeezing from the homodyne phase phi
    BS    unbalanced beam splitters, phi = 0
    BSPS  both
    BAS   a measurement-induced pre-squeezer (t0) followed by plain teleportation

The realized map is S(g) P(k) = R(zeta) S(s) R(epsilon); the circuit's phase
shifters undo both rotations so the signal sees S(s) and the added noise is
rotated by -zeta into the noise matrix Sigma.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

try:
    from . import config
    from .gaussian_core import GaussianDecomposition, decompose_squeeze_shear, loss_channel
except ImportError:
    import config
    from gaussian_core import GaussianDecomposition, decompose_squeeze_shear, loss_channel

logger = logging.getLogger(__name__)


class DegenerateCircuitError(ValueError):
    """A beam splitter sits at t = 0 or t = 1 where the gate is undefined."""


class SingularGainError(ValueError):
    """The homodyne angle makes the feed-forward gains diverge."""


class InfeasibleParametersError(ValueError):
    """No physical circuit realizes the requested parameters."""


class Variant(str, Enum):
    PS = "PS"
    BS = "BS"
    BSPS = "BSPS"
    BAS = "BAS"


# (min, max) for every numeric SqueezerConfig field; endpoints inclusive.
CONFIG_FIELD_BOUNDS = {
    "t1": (0.0, 1.0),
    "t2": (0.0, 1.0),
    "t0": (0.0, 1.0),
    "phi": (-math.pi, math.pi),
    "resource_db": (0.0, None),
    "eta_s": (1e-12, 1.0),
    "eta_h": (1e-12, 1.0),
}


def _check_bounds(value, lo, hi):
    """Error message string, or None when the value is acceptable."""
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        return "value must be a finite number"
    if lo is not None and value < lo:
        return f"must be at least {lo:g}" if lo > 1e-9 else "must be positive"
    if hi is not None and value > hi:
        return f"must be at most {hi:g}"
    return None


@dataclass(frozen=True)
class SqueezerConfig:
    """Squeezer variant plus every circuit parameter.

    Transmissions are amplitudes; resource squeezing is quoted in dB below
    vacuum. Variant constraints are applied on construction: PS forces
    balanced beam splitters, BS forces phi = 0, BAS uses a balanced phi = 0
    teleporter behind its t0 pre-squeezer.
    """

    variant: Variant = Variant.BS
    t1: float = config.BALANCED_T
    t2: float = config.BALANCED_T
    phi: float = 0.0
    t0: float = 1.0
    resource_db: float = field(default_factory=lambda: config.DEFAULT_RESOURCE_DB)
    eta_s: float = field(default_factory=lambda: config.DEFAULT_ETA_S)
    eta_h: float = field(default_factory=lambda: config.DEFAULT_ETA_H)

    def __post_init__(self):
        errors = []
        try:
            object.__setattr__(self, "variant", Variant(self.variant))
        except ValueError:
            errors.append(f"variant must be one of {[v.value for v in Variant]}, got {self.variant!r}")

        for name, (lo, hi) in CONFIG_FIELD_BOUNDS.items():
            err = _check_bounds(getattr(self, name), lo, hi)
            if err:
                errors.append(f"{name}: {err}")
        if errors:
            raise ValueError(" | ".join(errors))

        if self.variant in (Variant.PS, Variant.BAS):
            object.__setattr__(self, "t1", config.BALANCED_T)
            object.__setattr__(self, "t2", config.BALANCED_T)
        if self.variant in (Variant.BS, Variant.BAS):
            object.__setattr__(self, "phi", 0.0)

    @property
    def r1(self) -> float:
        return math.sqrt(1.0 - self.t1 * self.t1)

    @property
    def r2(self) -> float:
        return math.sqrt(1.0 - self.t2 * self.t2)

    @property
    def r0(self) -> float:
        return math.sqrt(1.0 - self.t0 * self.t0)


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Derived gate quantities and the 2x2 noise matrix Sigma."""

    s: float
    g: float
    k: float
    zeta: float
    epsilon: float
    j1: float
    j2: float
    j3: float
    sigma: np.ndarray

    def __post_init__(self):
        sigma = np.array(self.sigma, dtype=float)
        if sigma.shape != (2, 2) or not np.allclose(sigma, sigma.T, rtol=0.0, atol=1e-14):
            raise InfeasibleParametersError(f"noise matrix must be symmetric 2x2, got {sigma!r}")
        if np.linalg.eigvalsh(sigma)[0] < -config.PSD_TOL * max(1.0, float(np.max(np.abs(sigma)))):
            raise InfeasibleParametersError(f"noise matrix is not positive semidefinite: {sigma!r}")
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)

    @property
    def var_x(self) -> float:
        return float(self.sigma[0, 0])

    @property
    def var_p(self) -> float:
        return float(self.sigma[1, 1])

    @property
    def covariance(self) -> float:
        return float(self.sigma[0, 1])


# =============================================================================
# Resources and unit conversions
# =============================================================================

def resource_variances(resource_db: float) -> tuple[float, float]:
    """(squeezed, anti-squeezed) quadrature variances of a pure source."""
    var_sq = config.VACUUM_VARIANCE * 10.0 ** (-resource_db / 10.0)
    return var_sq, 1.0 / (4.0 * var_sq)


def lossy_resource_variance(resource_db: float, eta_s: float) -> float:
    """Squeezed-quadrature variance after the source loss channel."""
    var_sq, var_anti = resource_variances(resource_db)
    return float(loss_channel(eta_s, np.diag([var_sq, var_anti]))[0, 0])


def decibels(s: float) -> float:
    """Target squeezing on the 10 log10(s^2) axis."""
    return 10.0 * math.log10(s * s)


def scale_from_decibels(s_db: float) -> float:
    return 10.0 ** (s_db / 20.0)


def detector_factor(eta_h: float) -> float:
    """(1 - eta_H) / eta_H, the relative homodyne noise."""
    return (1.0 - eta_h) / eta_h


# =============================================================================
# Gate parameters
# =============================================================================

def _require_nondegenerate(cfg: SqueezerConfig) -> None:
    if cfg.variant == Variant.BAS:
        if cfg.t0 <= 0.0:
            raise DegenerateCircuitError("t0 = 0 leaves no signal in the pre-squeezer output")
        return
    bad = [name for name in ("t1", "t2") if getattr(cfg, name) in (0.0, 1.0)]
    if bad:
        raise DegenerateCircuitError(f"{', '.join(bad)} must lie strictly inside (0, 1)")


def gate_parameters(cfg: SqueezerConfig) -> tuple[float, float]:
    """(g, k) of the realized map S(g) P(k); BAS reports its teleporter (1, 0)."""
    _require_nondegenerate(cfg)
    if cfg.variant == Variant.BAS:
        return 1.0, 0.0
    if abs(math.cos(cfg.phi)) < 1e-15:
        raise SingularGainError(f"phi = {cfg.phi} makes tan(phi) diverge")
    g = cfg.r1 * cfg.r2 / (cfg.t1 * cfg.t2)
    if abs(g - 1.0) <= config.UNIT_GAIN_ULPS * math.ulp(1.0):
        # balanced splitters round a few ulps off unity
        g = 1.0
    k = math.tan(cfg.phi) / (cfg.t2 * cfg.t2)
    return g, k


def decomposition(cfg: SqueezerConfig) -> GaussianDecomposition:
    g, k = gate_parameters(cfg)
    return decompose_squeeze_shear(-math.log(g), k)


def squeezing_parameter(cfg: SqueezerConfig) -> float:
    """Effective squeeze scale s of the configured circuit.

    PS, BS and BSPS all reduce to the smallest singular value of S(g) P(k),
    which is s_PS for g = 1, g (or 1/g above unity) for k = 0 and s_BSPS in
    general. BAS squeezes by its pre-squeezer transmission t0.
    """
    if cfg.variant == Variant.BAS:
        _require_nondegenerate(cfg)
        return cfg.t0
    return decomposition(cfg).scale


def gains(cfg: SqueezerConfig) -> tuple[float, float, float]:
    """Unity-gain feed-forward gains (j1, j2, j3)."""
    _require_nondegenerate(cfg)
    if cfg.variant == Variant.BAS:
        t1 = t2 = r1 = r2 = config.BALANCED_T
        phi = 0.0
    else:
        t1, t2, r1, r2, phi = cfg.t1, cfg.t2, cfg.r1, cfg.r2, cfg.phi
    cos_phi = math.cos(phi)
    if abs(cos_phi) < 1e-15:
        raise SingularGainError(f"phi = {phi} makes the p-gain diverge")
    j1 = r1 / (t1 * t2)
    j2 = t1 / (r1 * r2) / cos_phi
    j3 = t1 / (r1 * t2) * math.tan(phi)
    return j1, j2, j3


# =============================================================================
# Noise
# =============================================================================

def _teleporter(cfg: SqueezerConfig) -> SqueezerConfig:
    """The balanced phi = 0 teleporter behind a BAS pre-squeezer."""
    return replace(cfg, variant=Variant.PS, phi=0.0)


def rotated_noise_variances(cfg: SqueezerConfig) -> tuple[float, float]:
    """Noise variances before the final -zeta rotation."""
    if cfg.variant == Variant.BAS:
        return rotated_noise_variances(_teleporter(cfg))
    g, k = gate_parameters(cfg)
    w = lossy_resource_variance(cfg.resource_db, cfg.eta_s)
    a = detector_factor(cfg.eta_h)
    var_x = w / cfg.t1 ** 2 + a * g * g / cfg.r2 ** 2 * 0.5
    var_p = w / cfg.r1 ** 2 + a / (g * g) * 0.5 * (1.0 / cfg.t2 ** 2 + k * k)
    return var_x, var_p


def rotated_noise_covariance(cfg: SqueezerConfig) -> float:
    """Covariance of the unrotated noise operators (shared x_A detector vacuum)."""
    if cfg.variant == Variant.BAS:
        return 0.0
    _, k = gate_parameters(cfg)
    return detector_factor(cfg.eta_h) * k * 0.5


def _rotation_weights(cfg: SqueezerConfig, s: float, g: float, dec: GaussianDecomposition):
    """(cos^2 zeta, sin^2 zeta, sin zeta cos zeta) for the final noise rotation."""
    cross = math.sin(dec.zeta) * math.cos(dec.zeta)
    denom = 1.0 - s ** 4
    if dec.xi == 0.0:
        # s = 1: the limit along the variant's constraint curve
        if cfg.variant == Variant.PS:
            return 0.5, 0.5, cross
        return 1.0, 0.0, cross
    if denom < config.WEIGHT_LIMIT_TOL:
        return math.cos(dec.zeta) ** 2, math.sin(dec.zeta) ** 2, cross
    w_cos = (1.0 - g * g * s * s) / denom
    w_sin = (g * g * s * s - s ** 4) / denom
    if min(w_cos, w_sin) < -1e-12:
        raise InfeasibleParametersError(
            f"rotation weights ({w_cos:.3g}, {w_sin:.3g}) are negative for g={g:.6g}, s={s:.6g}"
        )
    return max(w_cos, 0.0), max(w_sin, 0.0), cross


def noise_matrix(cfg: SqueezerConfig) -> NoiseModel:
    """Closed-form noise matrix Sigma and the derived gate quantities."""
    if cfg.variant == Variant.BAS:
        return bas_noise(cfg)
    g, k = gate_parameters(cfg)
    dec = decompose_squeeze_shear(-math.log(g), k)
    s = dec.scale
    j1, j2, j3 = gains(cfg)
    var_x, var_p = rotated_noise_variances(cfg)
    cov = rotated_noise_covariance(cfg)
    w_cos, w_sin, cross = _rotation_weights(cfg, s, g, dec)

    sxx = w_cos * var_x + 2.0 * cross * cov + w_sin * var_p
    spp = w_sin * var_x - 2.0 * cross * cov + w_cos * var_p
    sxp = cross * (var_p - var_x) + (w_cos - w_sin) * cov
    sigma = np.array([[sxx, sxp], [sxp, spp]])
    logger.debug("noise_matrix %s s=%.6g g=%.6g k=%.6g sigma=%s", cfg.variant.value, s, g, k, sigma.tolist())
    return NoiseModel(s, g, k, dec.zeta, dec.epsilon, j1, j2, j3, sigma)


def bas_noise(cfg: SqueezerConfig) -> NoiseModel:
    """Noise of the pre-squeezer plus the balanced teleporter behind it."""
    if cfg.variant != Variant.BAS:
        raise ValueError(f"bas_noise needs a BAS config, got {cfg.variant.value}")
    _require_nondegenerate(cfg)
    t0, r0 = cfg.t0, cfg.r0
    w = lossy_resource_variance(cfg.resource_db, cfg.eta_s)
    var_x_bas = r0 * r0 * w
    var_p_bas = 0.5 * (r0 * r0) / (t0 * t0) * detector_factor(cfg.eta_h)
    tel = noise_matrix(_teleporter(cfg))
    sigma = tel.sigma + np.diag([var_x_bas, var_p_bas])
    return NoiseModel(t0, 1.0, 0.0, 0.0, 0.0, tel.j1, tel.j2, tel.j3, sigma)


# =============================================================================
# Metrics
# =============================================================================

def input_referred_noise(model: NoiseModel) -> np.ndarray:
    """Sigma' = Sigma (elementwise) M with M = [[1/s^2, 1], [1, s^2]]."""
    s2 = model.s * model.s
    return model.sigma * np.array([[1.0 / s2, 1.0], [1.0, s2]])


def noise_eigenvalues(model: NoiseModel) -> tuple[float, float]:
    lo, hi = np.linalg.eigvalsh(input_referred_noise(model))
    return float(lo), float(hi)


def total_noise(model: NoiseModel) -> float:
    """N_T, the trace of the input-referred noise matrix."""
    return float(np.trace(input_referred_noise(model)))


def noise_product(model: NoiseModel) -> float:
    return model.var_x * model.var_p


def entanglement_breaking(model: NoiseModel) -> bool:
    return noise_product(model) >= config.BREAKING_BOUND


# =============================================================================
# Constraint inversions: circuits realizing a requested s
# =============================================================================

def _verified(cfg: SqueezerConfig, s: float) -> SqueezerConfig:
    achieved = squeezing_parameter(cfg)
    if abs(achieved - s) > config.CONSTRAINT_TOL:
        raise InfeasibleParametersError(
            f"{cfg.variant.value} config realizes s={achieved:.12g}, requested {s:.12g}"
        )
    return cfg


def _require_scale(s: float) -> None:
    if not 0.0 < s <= 1.0:
        raise InfeasibleParametersError(f"target squeeze scale must lie in (0, 1], got {s}")


def ps_config(s: float, **fields) -> SqueezerConfig:
    """PS circuit for scale s: l = (1 - s^2)/s and phi = arctan(l/2)."""
    _require_scale(s)
    phi = math.atan((1.0 - s * s) / s / 2.0)
    return _verified(SqueezerConfig(variant=Variant.PS, phi=phi, **fields), s)


def bs_config(s: float, t1: float, **fields) -> SqueezerConfig:
    """BS circuit for scale s with t2 solved from g = s."""
    _require_scale(s)
    T1 = t1 * t1
    T2 = (1.0 - T1) / (1.0 - T1 + s * s * T1)
    return _verified(SqueezerConfig(variant=Variant.BS, t1=t1, t2=math.sqrt(T2), **fields), s)


def bsps_feasible(s: float, t1: float, t2: float) -> bool:
    """True when s <= g <= 1/s for the given beam splitters."""
    g = math.sqrt(1.0 - t1 * t1) * math.sqrt(1.0 - t2 * t2) / (t1 * t2)
    return s * (1.0 - 1e-12) <= g <= (1.0 + 1e-12) / s


def bsps_config(s: float, t1: float, t2: float, **fields) -> SqueezerConfig:
    """BSPS circuit for scale s with phi >= 0 solved from the beam splitters."""
    _require_scale(s)
    if not bsps_feasible(s, t1, t2):
        raise InfeasibleParametersError(f"no phi realizes s={s:.6g} with t1={t1:.6g}, t2={t2:.6g}")
    g = math.sqrt(1.0 - t1 * t1) * math.sqrt(1.0 - t2 * t2) / (t1 * t2)
    k_sq = max((g * g - s * s) * (1.0 - g * g * s * s) / (s * s), 0.0)
    phi = math.atan(math.sqrt(k_sq) * t2 * t2)
    return _verified(SqueezerConfig(variant=Variant.BSPS, t1=t1, t2=t2, phi=phi, **fields), s)


def bas_config(s: float, **fields) -> SqueezerConfig:
    _require_scale(s)
    return _verified(SqueezerConfig(variant=Variant.BAS, t0=s, **fields), s)
