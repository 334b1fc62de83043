"""
Phase-space description of squeezed vacuum and single-photon states after
a teleportation squeezer.

The ideal gate maps the input to S|n>; the circuit adds Gaussian noise with
covariance Sigma. In the Wigner picture that is a convolution with a
Gaussian kernel, in the characteristic-function picture a product. The
characteristic argument is paired with quadratures as eta = (Im xi, -Re xi),
so Sigma_xx always multiplies the variable dual to x.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

try:
    from . import config
except ImportError:
    import config

logger = logging.getLogger(__name__)


class QuadratureAccuracyError(RuntimeError):
    """Successive quadrature orders disagree beyond tolerance."""


class PhotonState(str, Enum):
    VACUUM = "vacuum"
    SINGLE_PHOTON = "single_photon"

    @property
    def n(self) -> int:
        return 0 if self is PhotonState.VACUUM else 1


@dataclass(frozen=True, eq=False)
class TransformedState:
    """Ideally squeezed input S(s)|n> plus additive Gaussian noise Sigma."""

    state: PhotonState
    s: float
    sigma: np.ndarray

    def __post_init__(self):
        errors = []
        try:
            object.__setattr__(self, "state", PhotonState(self.state))
        except ValueError:
            errors.append(f"state must be one of {[p.value for p in PhotonState]}, got {self.state!r}")
        if not 0.0 < self.s <= 1.0:
            errors.append(f"s must lie in (0, 1], got {self.s}")
        sigma = np.array(self.sigma, dtype=float)
        if sigma.shape != (2, 2):
            errors.append(f"sigma must be 2x2, got shape {sigma.shape}")
        elif not np.allclose(sigma, sigma.T, rtol=0.0, atol=1e-14):
            errors.append("sigma must be symmetric")
        elif np.linalg.eigvalsh(sigma)[0] < -config.PSD_TOL:
            errors.append("sigma must be positive semidefinite")
        if errors:
            raise ValueError(" | ".join(errors))
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)

    @property
    def input_covariance(self) -> np.ndarray:
        """Covariance of the Gaussian envelope of the squeezed input, diag(s^2, 1/s^2)/2."""
        return 0.5 * np.diag([self.s ** 2, self.s ** -2])

    @property
    def target_form(self) -> np.ndarray:
        """K with |alpha|^2 = eta^T K eta."""
        return np.diag([self.s ** 2, self.s ** -2])


@lru_cache(maxsize=None)
def gauss_hermite(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Read-only Gauss-Hermite nodes and weights for weight exp(-z^2)."""
    nodes, weights = np.polynomial.hermite.hermgauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _gaussian_density(u: np.ndarray, cov: np.ndarray) -> np.ndarray:
    """Bivariate normal density at points u of shape (..., 2)."""
    inv = np.linalg.inv(cov)
    quad = np.einsum("...i,ij,...j->...", u, inv, u)
    return np.exp(-0.5 * quad) / (2.0 * math.pi * math.sqrt(np.linalg.det(cov)))


def wigner(ts: TransformedState, x, p):
    """Output Wigner function, the input Wigner function convolved with N(0, Sigma).

    Uses the product rule N(v; V0) N(u - v; Sigma) = N(u; V0 + Sigma) N(v; m, C),
    which stays valid for singular Sigma (C = 0 when Sigma = 0).
    """
    u = np.stack(np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float)), axis=-1)
    v0 = ts.input_covariance
    total = v0 + ts.sigma
    envelope = _gaussian_density(u, total)
    if ts.state is PhotonState.VACUUM:
        return envelope if envelope.ndim else float(envelope)

    gain = v0 @ np.linalg.inv(total)
    cond_cov = v0 - gain @ v0
    v0_inv = np.linalg.inv(v0)
    m = u @ gain.T
    poly = np.einsum("...i,ij,...j->...", m, v0_inv, m) + np.trace(v0_inv @ cond_cov) - 1.0
    out = envelope * poly
    return out if out.ndim else float(out)


def wigner_origin(ts: TransformedState) -> float:
    """W(0, 0), negative only for a non-classical output."""
    return wigner(ts, 0.0, 0.0)


def characteristic(ts: TransformedState, xi: complex) -> complex:
    """chi_out(xi) = chi_in(xi) G(xi)."""
    xi = complex(xi)
    eta = np.array([xi.imag, -xi.real])
    alpha_sq = float(eta @ ts.target_form @ eta)
    chi_in = math.exp(-0.5 * alpha_sq)
    if ts.state is PhotonState.SINGLE_PHOTON:
        chi_in *= 1.0 - alpha_sq
    return complex(chi_in * math.exp(-float(eta @ ts.sigma @ eta)))


def _fidelity_at_order(ts: TransformedState, order: int) -> float:
    k = ts.target_form
    lam, vecs = np.linalg.eigh(k + ts.sigma)
    nodes, weights = gauss_hermite(order)
    z1, z2 = np.meshgrid(nodes, nodes, indexing="ij")
    w = np.outer(weights, weights)
    # eta = U diag(1/sqrt(lam)) z turns the exponent into -|z|^2
    scaled = np.stack([z1 / math.sqrt(lam[0]), z2 / math.sqrt(lam[1])], axis=-1)
    eta = scaled @ vecs.T
    if ts.state is PhotonState.VACUUM:
        integrand = np.ones_like(z1)
    else:
        q = np.einsum("...i,ij,...j->...", eta, k, eta)
        integrand = (1.0 - q) ** 2
    return float(np.sum(w * integrand) / (math.pi * math.sqrt(lam[0] * lam[1])))


def fidelity(
    ts: TransformedState,
    order: int = config.GH_ORDER,
    check_order: int | None = config.GH_CHECK_ORDER,
) -> float:
    """Overlap of the output with the pure target S(s)|n>.

    Evaluates (1/pi) int G(xi) |chi_in(xi)|^2 d^2 xi by Gauss-Hermite
    quadrature along the principal axes of K + Sigma. With ``check_order``
    set, a second order must agree within the quadrature tolerance.

    Args:
        ts: Output state description.
        order: Nodes per axis.
        check_order: Nodes per axis of the convergence check, or None to skip.

    Returns:
        Fidelity in [0, 1].
    """
    value = _fidelity_at_order(ts, order)
    if check_order is not None:
        other = _fidelity_at_order(ts, check_order)
        if abs(value - other) > config.QUADRATURE_TOL:
            raise QuadratureAccuracyError(
                f"fidelity changed by {abs(value - other):.3e} between orders {order} and {check_order}"
            )
    return min(max(value, 0.0), 1.0)


def fidelity_closed_form(ts: TransformedState) -> float:
    """Exact Gaussian-moment value of the fidelity integral."""
    k = ts.target_form
    a = k + ts.sigma
    base = 1.0 / math.sqrt(np.linalg.det(a))
    if ts.state is PhotonState.VACUUM:
        return base
    b = k @ np.linalg.inv(a)
    tr_b = float(np.trace(b))
    return base * (1.0 - tr_b + (tr_b ** 2 + 2.0 * float(np.trace(b @ b))) / 4.0)


def mean_photon_number(ts: TransformedState) -> float:
    """<n> of the output, (tr V_out - 1)/2 with V_out = (2n + 1) V0 + Sigma."""
    v_out = (2 * ts.state.n + 1) * ts.input_covariance + ts.sigma
    return 0.5 * (float(np.trace(v_out)) - 1.0)
