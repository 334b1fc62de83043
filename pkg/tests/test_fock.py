import math

import numpy as np
import pytest
from scipy.special import factorial

from fock import (
    FockDensityMatrix,
    FockTruncationError,
    TruncationWarning,
    displaced_squeezed_column,
    fock_fidelity,
    photostatistics,
    reconstruct_rho,
    target_vector,
)
from noise_model import Variant, bas_config, bs_config, noise_matrix, ps_config, scale_from_decibels
from optimize import optimize_fidelity
from phase_space import PhotonState, TransformedState, fidelity, mean_photon_number


def test_squeezed_vacuum_photon_statistics():
    s = 0.5
    r = -math.log(s)
    probs = photostatistics(reconstruct_rho(PhotonState.VACUUM, s, np.zeros((2, 2)), dim=60))
    assert probs[0] == pytest.approx(1.0 / math.cosh(r), abs=1e-10)
    np.testing.assert_allclose(probs[1::2], 0.0, atol=1e-14)
    assert probs @ np.arange(60) == pytest.approx(math.sinh(r) ** 2, abs=1e-9)


def test_squeezed_single_photon_has_only_odd_terms():
    probs = photostatistics(reconstruct_rho(PhotonState.SINGLE_PHOTON, 0.6, np.zeros((2, 2)), dim=40))
    np.testing.assert_allclose(probs[0::2], 0.0, atol=1e-14)
    assert probs.sum() == pytest.approx(1.0, abs=1e-10)


def test_noiseless_rho_is_pure_target():
    rho = reconstruct_rho(PhotonState.SINGLE_PHOTON, 0.7, np.zeros((2, 2)), dim=40)
    v = target_vector(PhotonState.SINGLE_PHOTON, 0.7, 40)
    np.testing.assert_allclose(rho.elements, np.outer(v, v.conj()), atol=1e-13)
    assert fock_fidelity(rho, PhotonState.SINGLE_PHOTON, 0.7) == pytest.approx(1.0, abs=1e-10)


def test_displacement_moves_the_mean():
    # coherent state |alpha> with alpha = (x0 + i p0)/sqrt(2)
    column = displaced_squeezed_column(1.0, 0.5, 1.0, 0, dim=30)
    alpha = complex(1.0, 0.5) / math.sqrt(2.0)
    n = np.arange(30)
    assert np.abs(column) ** 2 @ n == pytest.approx(abs(alpha) ** 2, abs=1e-10)
    expected_a = np.vdot(column[:-1], np.sqrt(n[1:]) * column[1:])
    assert expected_a == pytest.approx(alpha, abs=1e-10)


def test_truncation_warning():
    with pytest.warns(TruncationWarning):
        displaced_squeezed_column(5.0, 5.0, 1.0, 0, dim=4)


def test_invalid_photon_number():
    with pytest.raises(ValueError):
        displaced_squeezed_column(0.0, 0.0, 1.0, 2, dim=10)


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        FockDensityMatrix(2, np.array([[0.5, 0.1], [0.3, 0.5]]))
    with pytest.raises(ValueError):
        FockDensityMatrix(3, np.eye(2))
    rho = FockDensityMatrix(2, np.diag([0.75, 0.25]))
    assert rho.trace() == pytest.approx(1.0)
    assert rho.mean_photon_number() == pytest.approx(0.25)
    assert rho.min_eigenvalue() == pytest.approx(0.25)


def test_trace_deficit_raises_with_suggestion():
    with pytest.raises(FockTruncationError) as exc:
        reconstruct_rho(PhotonState.VACUUM, 1.0, np.diag([2.0, 2.0]), dim=4, quad_order=30)
    assert exc.value.suggested_dim >= 8


@pytest.mark.slow
@pytest.mark.parametrize("state", list(PhotonState))
def test_fock_and_phase_space_agree(state):
    s = scale_from_decibels(-3.0)
    sigma = noise_matrix(bs_config(s, 0.7, resource_db=9.0, eta_s=0.8, eta_h=0.9)).sigma
    rho = reconstruct_rho(state, s, sigma, dim=40, quad_order=60)
    ts = TransformedState(state, s, sigma)
    assert fock_fidelity(rho, state, s) == pytest.approx(fidelity(ts), abs=1e-5)
    assert rho.trace() == pytest.approx(1.0, abs=1e-3)
    assert rho.mean_photon_number() == pytest.approx(mean_photon_number(ts), abs=1e-3)
    assert rho.min_eigenvalue() > -1e-8


def test_anisotropic_noise_orientation():
    # x noise and p noise act differently on an x-squeezed state
    s = 0.6
    rho_x = reconstruct_rho(PhotonState.VACUUM, s, np.diag([0.2, 0.0]), dim=30, quad_order=40)
    rho_p = reconstruct_rho(PhotonState.VACUUM, s, np.diag([0.0, 0.2]), dim=30, quad_order=40)
    for rho, sigma in ((rho_x, np.diag([0.2, 0.0])), (rho_p, np.diag([0.0, 0.2]))):
        ts = TransformedState(PhotonState.VACUUM, s, sigma)
        assert fock_fidelity(rho, PhotonState.VACUUM, s) == pytest.approx(fidelity(ts), abs=1e-6)
    assert not np.allclose(rho_x.elements, rho_p.elements)


def test_identity_columns_are_number_states():
    np.testing.assert_allclose(displaced_squeezed_column(0.0, 0.0, 1.0, 0, dim=8), np.eye(8)[0], atol=1e-14)
    np.testing.assert_allclose(displaced_squeezed_column(0.0, 0.0, 1.0, 1, dim=8), np.eye(8)[1], atol=1e-14)


def test_coherent_state_coefficients():
    alpha = 1.0 / math.sqrt(2.0)
    n = np.arange(25)
    expected = np.exp(-alpha ** 2 / 2) * alpha ** n / np.sqrt(factorial(n))
    np.testing.assert_allclose(displaced_squeezed_column(1.0, 0.0, 1.0, 0, dim=25), expected, atol=1e-12)


def test_noisy_vacuum_mean_photon_number():
    sigma = 0.15
    rho = reconstruct_rho(PhotonState.VACUUM, 1.0, np.diag([sigma, sigma]), dim=40, quad_order=60)
    assert rho.mean_photon_number() == pytest.approx(sigma, abs=1e-7)
    probs = photostatistics(rho)
    assert probs.sum() == pytest.approx(rho.trace().real, abs=1e-12)
    assert np.all(np.diff(probs[:10]) < 0)


def fock_panel():
    realistic = {"resource_db": 9.0, "eta_s": 0.8, "eta_h": 0.9}
    panel = []
    for s_db in (-1.0, -3.0, -5.0):
        s = scale_from_decibels(s_db)
        panel.append(ps_config(s, resource_db=9.0))
        panel.append(ps_config(s, **realistic))
        panel.append(bs_config(s, 0.8, **realistic))
    panel.append(bas_config(scale_from_decibels(-2.0), **realistic))
    return [(state, cfg) for state in PhotonState for cfg in panel]


@pytest.mark.slow
def test_fock_panel_matches_phase_space():
    panel = fock_panel()
    assert len(panel) == 20
    for state, cfg in panel:
        model = noise_matrix(cfg)
        rho = reconstruct_rho(state, model.s, model.sigma, dim=40, quad_order=60)
        assert 1.0 - rho.trace() < 1e-3
        ts = TransformedState(state, model.s, model.sigma)
        assert fock_fidelity(rho, state, model.s) == pytest.approx(fidelity(ts), abs=1e-4)


@pytest.mark.slow
@pytest.mark.parametrize("s_db", [-5.0, -9.0])
def test_bs_output_carries_more_vacuum_than_ps(s_db):
    s = scale_from_decibels(s_db)
    lossless = {"resource_db": 9.0, "eta_s": 1.0, "eta_h": 1.0}
    p0 = {}
    for variant in (Variant.BS, Variant.PS):
        cfg = optimize_fidelity(s, variant, PhotonState.SINGLE_PHOTON, **lossless).config
        rho = reconstruct_rho(PhotonState.SINGLE_PHOTON, s, noise_matrix(cfg).sigma, dim=80, quad_order=40)
        p0[variant] = photostatistics(rho)[0]
    assert p0[Variant.BS] > p0[Variant.PS]
