"""
Symplectic algebra of single- and two-mode Gaussian unitaries.

Quadratures are ordered (x1, p1[, x2, p2]) and vacuum has variance 1/2.
Every gate is a linear map of the quadrature vector plus an optional
displacement; composition follows matrix product with affine displacement
accumulation. The two decompositions reduce a shear (optionally preceded by
a squeeze) to rotation-squeeze-rotation form.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

try:
    from . import config
except ImportError:
    import config

logger = logging.getLogger(__name__)


class GateDomainError(ValueError):
    """Gate parameter outside its physical range."""


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard antisymmetric form Omega for (x1, p1, x2, p2, ...) ordering."""
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), j)


@dataclass(frozen=True, eq=False)
class GaussianGate:
    """Linear quadrature map v -> matrix @ v + displacement."""

    matrix: np.ndarray
    displacement: np.ndarray = field(default=None)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        errors = []
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
            errors.append(f"matrix must be 2x2 or 4x4, got shape {m.shape}")
        d = np.zeros(m.shape[0]) if self.displacement is None else np.array(self.displacement, dtype=float)
        if d.shape != (m.shape[0],):
            errors.append(f"displacement must have length {m.shape[0]}, got {d.shape}")
        if errors:
            raise GateDomainError(" | ".join(errors))
        m.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "displacement", d)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def is_symplectic(self, tol: float = config.SYMPLECTIC_TOL) -> bool:
        omega = symplectic_form(self.n_modes)
        return bool(np.max(np.abs(self.matrix.T @ omega @ self.matrix - omega)) <= tol)

    def compose(self, other: "GaussianGate") -> "GaussianGate":
        """Gate equal to applying ``other`` first, then ``self``."""
        if other.n_modes != self.n_modes:
            raise GateDomainError("cannot compose gates acting on different mode counts")
        return GaussianGate(
            self.matrix @ other.matrix,
            self.matrix @ other.displacement + self.displacement,
        )

    def __matmul__(self, other: "GaussianGate") -> "GaussianGate":
        return self.compose(other)

    def apply(self, mean) -> np.ndarray:
        """Transform a quadrature mean vector."""
        return self.matrix @ np.asarray(mean, dtype=float) + self.displacement


@dataclass(frozen=True)
class GaussianDecomposition:
    """R(zeta) S(exp(-xi)) R(epsilon) factorization of a single-mode gate."""

    zeta: float
    xi: float
    epsilon: float

    @property
    def scale(self) -> float:
        return math.exp(-self.xi)

    def gate(self) -> GaussianGate:
        return rotation(self.zeta) @ squeeze(self.scale) @ rotation(self.epsilon)


# =============================================================================
# Elementary gates
# =============================================================================

def beam_splitter(t: float) -> GaussianGate:
    """Two-mode beam splitter: x1 -> t x2 + r x1, x2 -> t x1 - r x2 (same on p)."""
    if not 0.0 <= t <= 1.0:
        raise GateDomainError(f"beam splitter transmission must be in [0, 1], got {t}")
    r = math.sqrt(1.0 - t * t)
    mix = np.array([[r, t], [t, -r]])
    return GaussianGate(np.kron(mix, np.eye(2)))


def rotation(phi: float) -> GaussianGate:
    c, s = math.cos(phi), math.sin(phi)
    return GaussianGate(np.array([[c, -s], [s, c]]))


def squeeze(s: float) -> GaussianGate:
    """x -> s x, p -> p / s."""
    if not s > 0.0:
        raise GateDomainError(f"squeeze scale must be positive, got {s}")
    return GaussianGate(np.diag([s, 1.0 / s]))


def shear(k: float) -> GaussianGate:
    """Quadratic phase gate: x -> x, p -> p + k x."""
    return GaussianGate(np.array([[1.0, 0.0], [k, 1.0]]))


def displacement(x0: float, p0: float) -> GaussianGate:
    return GaussianGate(np.eye(2), np.array([x0, p0]))


def scale_from_exponent(r: float) -> float:
    """Squeeze scale s = exp(-r) for the exponent convention."""
    return math.exp(-r)


def exponent_from_scale(s: float) -> float:
    if not s > 0.0:
        raise GateDomainError(f"squeeze scale must be positive, got {s}")
    return -math.log(s)


def loss_channel(eta: float, cov) -> np.ndarray:
    """Pure-loss channel on a single-mode covariance: eta cov + (1 - eta)/2 I."""
    if not 0.0 <= eta <= 1.0:
        raise GateDomainError(f"loss transmissivity must be in [0, 1], got {eta}")
    cov = np.asarray(cov, dtype=float)
    return eta * cov + (1.0 - eta) * config.VACUUM_VARIANCE * np.eye(cov.shape[0])


# =============================================================================
# Decompositions
# =============================================================================

def _smallest_eigenvalue(g: float, k: float) -> float:
    """Smallest eigenvalue of T T^T for T = S(g) P(k), rationalized."""
    g2, g4, k2 = g * g, g ** 4, k * k
    root = math.sqrt((1.0 - g4) ** 2 + 2.0 * (1.0 + g4) * k2 + k2 * k2)
    return 2.0 * g2 / (1.0 + g4 + k2 + root)


def _decompose_matrix(t: np.ndarray, lam: float) -> GaussianDecomposition:
    a, b, c = t[0, 0] ** 2 + t[0, 1] ** 2, t[0, 0] * t[1, 0] + t[0, 1] * t[1, 1], t[1, 0] ** 2 + t[1, 1] ** 2
    s = math.sqrt(lam)
    xi = -math.log(s)
    if xi == 0.0 or (a - c) ** 2 + 4.0 * b * b == 0.0:
        # isotropic T T^T: T is itself a rotation
        return GaussianDecomposition(0.0, 0.0, math.atan2(t[1, 0], t[0, 0]))

    # minor eigenvector of T T^T, folded into (-pi/2, pi/2]
    zeta = 0.5 * math.atan2(2.0 * b, a - c) + 0.5 * math.pi
    if zeta > 0.5 * math.pi:
        zeta -= math.pi

    # the major row of R(-zeta) T is (sin eps, cos eps) / s without cancellation
    major = rotation(-zeta).matrix[1] @ t
    epsilon = math.atan2(major[0], major[1])
    return GaussianDecomposition(zeta, xi, epsilon)


def decompose_squeeze_shear(r: float, k: float) -> GaussianDecomposition:
    """Decompose S(exp(-r)) P(k) as R(zeta) S(exp(-xi)) R(epsilon).

    exp(-xi) is the smallest singular value of the composed map and zeta the
    angle of its minor principal axis; epsilon follows from the remaining
    rotation. The degenerate case r = k = 0 returns the identity.

    Args:
        r: Squeeze exponent of the gate applied after the shear.
        k: Shear strength.

    Returns:
        GaussianDecomposition reconstructing the gate exactly.
    """
    if r == 0.0 and k == 0.0:
        return GaussianDecomposition(0.0, 0.0, 0.0)
    g = math.exp(-r)
    t = np.array([[g, 0.0], [k / g, 1.0 / g]])
    return _decompose_matrix(t, _smallest_eigenvalue(g, k))


def decompose_shear(k: float) -> GaussianDecomposition:
    """Decompose P(k); epsilon = zeta - pi/2 for k < 0 and zeta + pi/2 for k > 0."""
    return decompose_squeeze_shear(0.0, k)
