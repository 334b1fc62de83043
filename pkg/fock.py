"""
Truncated Fock-basis reconstruction of the teleported state.

rho_out is the average of D(x, p) S |n><n| S^dag D(x, p)^dag over the
Gaussian noise distribution N(0, Sigma). Operators are built in a padded
space and truncated afterwards; displacements for all quadrature nodes come
from one eigendecomposition of i(a^dag - a) and a phase rotation per node.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh, expm

try:
    from . import config
    from .phase_space import PhotonState, TransformedState, gauss_hermite, mean_photon_number
except ImportError:
    import config
    from phase_space import PhotonState, TransformedState, gauss_hermite, mean_photon_number

logger = logging.getLogger(__name__)


class TruncationWarning(UserWarning):
    """A Fock vector lost norm to the truncation."""


class FockTruncationError(RuntimeError):
    """The reconstructed density matrix misses too much trace."""

    def __init__(self, message: str, suggested_dim: int):
        super().__init__(f"{message} (try dim={suggested_dim})")
        self.suggested_dim = suggested_dim


@dataclass(frozen=True, eq=False)
class FockDensityMatrix:
    dim: int
    elements: np.ndarray
    quad_order: int = 0
    trace_deficit: float = 0.0

    def __post_init__(self):
        rho = np.array(self.elements, dtype=complex)
        errors = []
        if rho.shape != (self.dim, self.dim):
            errors.append(f"elements must be {self.dim}x{self.dim}, got {rho.shape}")
        elif np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            errors.append("elements must be Hermitian")
        elif np.min(rho.diagonal().real) < -1e-12:
            errors.append("diagonal entries must be non-negative")
        if errors:
            raise ValueError(" | ".join(errors))
        rho.setflags(write=False)
        object.__setattr__(self, "elements", rho)

    def trace(self) -> float:
        return float(np.trace(self.elements).real)

    def mean_photon_number(self) -> float:
        return float(np.arange(self.dim) @ self.elements.diagonal().real)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.elements)[0])


@lru_cache(maxsize=8)
def _ladder(size: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, size, dtype=float)), 1)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=8)
def _displacement_basis(size: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of the Hermitian generator i(a^dag - a)."""
    a = _ladder(size)
    h, q = eigh(1j * (a.T - a))
    h.setflags(write=False)
    q.setflags(write=False)
    return h, q


def _squeezed_number_state(s: float, n: int, size: int) -> np.ndarray:
    """S(r)|n> with r = -log s, so that S maps x to s x."""
    a = _ladder(size)
    r = -math.log(s)
    generator = 0.5 * r * (a @ a - a.T @ a.T)
    return expm(generator)[:, n].astype(complex)


def _displace_many(v: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """Columns D(alpha_j) v for every alpha_j, via D = U(theta) exp(|alpha|(a^dag - a)) U(theta)^dag."""
    size = v.shape[0]
    h, q = _displacement_basis(size)
    n = np.arange(size)
    theta = np.angle(alphas)
    radius = np.abs(alphas)
    rotated = np.exp(-1j * np.outer(n, theta)) * v[:, None]
    evolved = q @ (np.exp(-1j * np.outer(h, radius)) * (q.conj().T @ rotated))
    return np.exp(1j * np.outer(n, theta)) * evolved


def _check_state(n_in: int, dim: int) -> None:
    errors = []
    if n_in not in (0, 1):
        errors.append(f"n_in must be 0 or 1, got {n_in}")
    if dim < 2:
        errors.append(f"dim must be at least 2, got {dim}")
    if errors:
        raise ValueError(" | ".join(errors))


def displaced_squeezed_column(x0: float, p0: float, s: float, n_in: int, dim: int) -> np.ndarray:
    """Fock coefficients of D(x0, p0) S |n_in> up to ``dim`` levels."""
    _check_state(n_in, dim)
    size = dim + config.FOCK_PADDING
    v = _squeezed_number_state(s, n_in, size)
    alpha = complex(x0, p0) / math.sqrt(2.0)
    column = _displace_many(v, np.array([alpha]))[:dim, 0]
    lost = 1.0 - float(np.vdot(column, column).real)
    if lost > config.FOCK_COLUMN_TOL:
        warnings.warn(
            f"dim={dim} keeps only {1.0 - lost:.3e} of the state norm", TruncationWarning, stacklevel=2
        )
    return column


def target_vector(state: PhotonState, s: float, dim: int) -> np.ndarray:
    """Truncated ideally squeezed target S|n>."""
    return displaced_squeezed_column(0.0, 0.0, s, PhotonState(state).n, dim)


def reconstruct_rho(
    state: PhotonState,
    s: float,
    sigma,
    dim: int = config.FOCK_DIM,
    quad_order: int = config.FOCK_QUAD_ORDER,
) -> FockDensityMatrix:
    """Density matrix of the teleported state in a truncated Fock basis.

    The noise average is a Gauss-Hermite sum along the principal axes of
    Sigma; the node sum is a single matrix product, so the result does not
    depend on evaluation order.
    """
    state = PhotonState(state)
    _check_state(state.n, dim)
    sigma = np.asarray(sigma, dtype=float)
    size = dim + config.FOCK_PADDING
    v = _squeezed_number_state(s, state.n, size)

    lam, axes = np.linalg.eigh(sigma)
    lam = np.clip(lam, 0.0, None)
    if lam[-1] <= 1e-300:
        columns = v[:dim, None]
        weights = np.ones(1)
    else:
        nodes, gh_weights = gauss_hermite(quad_order)
        z1, z2 = np.meshgrid(nodes, nodes, indexing="ij")
        principal = np.stack([z1.ravel() * math.sqrt(2.0 * lam[0]), z2.ravel() * math.sqrt(2.0 * lam[1])])
        shifts = axes @ principal
        alphas = (shifts[0] + 1j * shifts[1]) / math.sqrt(2.0)
        weights = np.outer(gh_weights, gh_weights).ravel() / math.pi
        columns = _displace_many(v, alphas)[:dim]

    rho = (columns * weights) @ columns.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    deficit = 1.0 - float(np.trace(rho).real)
    logger.debug("reconstruct_rho dim=%d order=%d deficit=%.3e", dim, quad_order, deficit)
    if deficit > config.FOCK_TRACE_TOL:
        n_mean = mean_photon_number(TransformedState(state, s, sigma))
        raise FockTruncationError(
            f"trace deficit {deficit:.3e} exceeds {config.FOCK_TRACE_TOL:g} at dim={dim}",
            max(2 * dim, int(math.ceil(20.0 + 8.0 * n_mean))),
        )
    return FockDensityMatrix(dim, rho, quad_order, max(deficit, 0.0))


def photostatistics(rho: FockDensityMatrix) -> np.ndarray:
    """Photon-number distribution p_n, clipped at zero and not renormalized."""
    return np.clip(rho.elements.diagonal().real, 0.0, None)


def fock_fidelity(rho: FockDensityMatrix, state: PhotonState, s: float) -> float:
    """<target| rho |target> for the ideally squeezed target."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        target = target_vector(state, s, rho.dim)
    return float(np.vdot(target, rho.elements @ target).real)
