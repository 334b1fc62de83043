import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import config
from gaussian_core import (
    GateDomainError,
    GaussianGate,
    beam_splitter,
    decompose_shear,
    decompose_squeeze_shear,
    displacement,
    exponent_from_scale,
    loss_channel,
    rotation,
    scale_from_exponent,
    shear,
    squeeze,
    symplectic_form,
)


def test_elementary_gates_are_symplectic():
    for gate in (beam_splitter(0.3), beam_splitter(0.0), beam_splitter(1.0),
                 rotation(0.7), squeeze(0.2), shear(-3.0), displacement(1.0, -2.0)):
        assert gate.is_symplectic()


def test_beam_splitter_convention():
    t = 0.6
    r = 0.8
    out = beam_splitter(t).apply([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_allclose(out, [r * 1.0 + t * 3.0, r * 2.0 + t * 4.0, t * 1.0 - r * 3.0, t * 2.0 - r * 4.0])


def test_gate_domain_errors():
    with pytest.raises(GateDomainError):
        beam_splitter(1.2)
    with pytest.raises(GateDomainError):
        squeeze(0.0)
    with pytest.raises(GateDomainError):
        loss_channel(-0.1, np.eye(2))
    with pytest.raises(GateDomainError):
        GaussianGate(np.eye(3))


def test_compose_applies_right_operand_first():
    gate = squeeze(0.5) @ displacement(1.0, 1.0)
    np.testing.assert_allclose(gate.apply([0.0, 0.0]), [0.5, 2.0])
    with pytest.raises(GateDomainError):
        squeeze(0.5) @ beam_splitter(0.5)


def test_gate_arrays_are_read_only():
    gate = shear(1.0)
    with pytest.raises(ValueError):
        gate.matrix[0, 0] = 2.0


def test_symplectic_form_two_modes():
    omega = symplectic_form(2)
    assert omega.shape == (4, 4)
    np.testing.assert_array_equal(omega @ omega, -np.eye(4))


def test_loss_channel_on_vacuum_is_identity():
    np.testing.assert_allclose(loss_channel(0.3, 0.5 * np.eye(2)), 0.5 * np.eye(2))
    np.testing.assert_allclose(loss_channel(0.0, np.diag([0.01, 25.0])), 0.5 * np.eye(2))


def test_scale_exponent_conversions():
    assert scale_from_exponent(0.0) == 1.0
    assert exponent_from_scale(math.exp(-0.7)) == pytest.approx(0.7)


@settings(max_examples=200, deadline=None)
@given(r=st.floats(-2.0, 2.0), k=st.floats(-5.0, 5.0))
def test_decomposition_reconstructs_squeeze_shear(r, k):
    target = (squeeze(math.exp(-r)) @ shear(k)).matrix
    dec = decompose_squeeze_shear(r, k)
    # entries grow like 1/s, so the bound scales with the largest one
    bound = config.DECOMPOSITION_TOL * max(1.0, float(np.abs(target).max()))
    assert np.abs(dec.gate().matrix - target).max() <= bound
    assert -math.pi / 2 < dec.zeta <= math.pi / 2
    assert dec.xi >= 0.0
    # exp(-xi) is the smallest singular value
    assert dec.scale == pytest.approx(np.linalg.svd(target, compute_uv=False)[-1], rel=1e-12)


def test_identity_decomposition():
    dec = decompose_squeeze_shear(0.0, 0.0)
    assert (dec.zeta, dec.xi, dec.epsilon) == (0.0, 0.0, 0.0)


def test_pure_squeeze_has_no_rotation():
    dec = decompose_squeeze_shear(0.5, 0.0)
    assert dec.zeta == pytest.approx(0.0, abs=1e-12)
    assert dec.epsilon == pytest.approx(0.0, abs=1e-12)
    assert dec.scale == pytest.approx(math.exp(-0.5))


def test_antisqueeze_reports_minor_axis_on_p():
    dec = decompose_squeeze_shear(-0.5, 0.0)
    assert abs(dec.zeta) == pytest.approx(math.pi / 2)
    assert dec.scale == pytest.approx(math.exp(-0.5))


@pytest.mark.parametrize("k", [-4.0, -0.3, 0.3, 4.0])
def test_shear_rotation_angles_differ_by_quarter_turn(k):
    dec = decompose_shear(k)
    offset = -math.pi / 2 if k < 0 else math.pi / 2
    assert math.cos(dec.epsilon - dec.zeta - offset) == pytest.approx(1.0, abs=1e-12)
    # s + 1/s = sqrt(k^2 + 4) for a pure shear
    assert dec.scale + 1.0 / dec.scale == pytest.approx(math.sqrt(k * k + 4.0))


def test_beam_splitter_swap_and_balanced_split():
    np.testing.assert_allclose(beam_splitter(1.0).apply([1.0, 0.0, 0.0, 0.0]), [0.0, 0.0, 1.0, 0.0])
    t = 1.0 / math.sqrt(2.0)
    np.testing.assert_allclose(beam_splitter(t).apply([1.0, 0.0, 0.0, 0.0]), [t, 0.0, t, 0.0])


def test_rotation_and_shear_compose_additively():
    np.testing.assert_allclose((rotation(0.4) @ rotation(1.1)).matrix, rotation(1.5).matrix, atol=1e-14)
    np.testing.assert_allclose((shear(0.7) @ shear(-2.0)).matrix, shear(-1.3).matrix, atol=1e-14)
    np.testing.assert_allclose(rotation(math.pi / 2).apply([1.0, 0.0]), [0.0, 1.0], atol=1e-14)


def test_shear_example_scale():
    dec = decompose_shear(2.0)
    assert dec.scale == pytest.approx(math.sqrt(2.0) - 1.0, rel=1e-12)
    np.testing.assert_allclose(dec.gate().matrix, shear(2.0).matrix, atol=1e-12)
    assert decompose_shear(2.0).xi == decompose_squeeze_shear(0.0, 2.0).xi


def test_composition_is_associative():
    a, b, c = squeeze(0.3), shear(1.7), rotation(-0.8) @ displacement(0.2, -0.4)
    np.testing.assert_allclose(((a @ b) @ c).matrix, (a @ (b @ c)).matrix, atol=1e-13)
    np.testing.assert_allclose(((a @ b) @ c).displacement, (a @ (b @ c)).displacement, atol=1e-13)


def test_random_gate_products_stay_symplectic(rng):
    for _ in range(50):
        t, theta, s, k = rng.uniform(0.0, 1.0), rng.uniform(-math.pi, math.pi), rng.uniform(0.3, 1.0), rng.uniform(-2.0, 2.0)
        single = rotation(theta) @ squeeze(s) @ shear(k)
        assert single.is_symplectic()
        assert beam_splitter(t).is_symplectic()
        assert np.linalg.det(single.matrix) == pytest.approx(1.0, abs=1e-9)
