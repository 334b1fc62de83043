import math

import numpy as np
import pytest

import config
from circuit_oracle import (
    LinearForm,
    build_and_propagate,
    ideal_map,
    max_oracle_deviation,
    oracle_noise_matrix,
    random_configs,
)
from noise_model import (
    SqueezerConfig,
    Variant,
    bas_config,
    bs_config,
    bsps_config,
    decomposition,
    gains,
    noise_matrix,
    ps_config,
    scale_from_decibels,
    squeezing_parameter,
)


def test_linear_form_algebra():
    f = LinearForm.symbol("a") + 2.0 * LinearForm.symbol("b")
    g = LinearForm.symbol("b") - LinearForm.symbol("c")
    variances = {"a": 1.0, "b": 0.5, "c": 3.0}
    assert f.coefficient("b") == 2.0
    assert f.coefficient("z") == 0.0
    assert f.covariance(g, variances) == pytest.approx(1.0)
    assert g.variance(variances) == pytest.approx(3.5)
    assert f.without(["a"]).variance(variances) == pytest.approx(2.0)


def test_linear_form_is_immutable():
    f = LinearForm.symbol("a")
    with pytest.raises(TypeError):
        f.coefficients["a"] = 2.0


@pytest.mark.parametrize("build", [
    lambda s: ps_config(s, eta_s=0.8, eta_h=0.9),
    lambda s: bs_config(s, 0.7, eta_s=0.8, eta_h=0.9),
    lambda s: bsps_config(s, 0.6, 0.7, eta_s=0.8, eta_h=0.9),
    lambda s: bas_config(s, eta_s=0.8, eta_h=0.9),
])
def test_circuit_realizes_ideal_squeeze(build):
    s = scale_from_decibels(-6.0)
    cfg = build(s)
    trace = build_and_propagate(cfg)
    np.testing.assert_allclose(ideal_map(trace), np.diag([s, 1.0 / s]), atol=1e-10)
    assert trace.s_effective == pytest.approx(squeezing_parameter(cfg), abs=1e-10)


@pytest.mark.parametrize("variant", list(Variant))
def test_oracle_matches_closed_form_per_variant(variant):
    cfg = SqueezerConfig(variant=variant, t1=0.45, t2=0.8, phi=0.4, t0=0.7,
                         resource_db=6.0, eta_s=0.8, eta_h=0.9)
    oracle = oracle_noise_matrix(build_and_propagate(cfg), cfg)
    np.testing.assert_allclose(noise_matrix(cfg).sigma, oracle, atol=config.ORACLE_TOL)


def test_lossless_teleporter_noise_comes_from_sources_only():
    cfg = SqueezerConfig(variant=Variant.PS, phi=0.0)
    trace = build_and_propagate(cfg)
    symbols = set(trace.x_out.coefficients) | set(trace.p_out.coefficients)
    noisy = {name for name in symbols if not name.startswith("in.")}
    assert noisy and all(name.startswith(("s1.", "s2.")) for name in noisy)


def test_random_configs_are_deterministic():
    a = random_configs(12, seed=3)
    b = random_configs(12, seed=3)
    assert a == b
    assert {cfg.variant for cfg in a} == set(Variant)


def test_oracle_check_over_randomized_grid():
    deviation, worst = max_oracle_deviation(random_configs(config.ORACLE_GRID_SIZE, seed=config.ORACLE_SEED))
    assert worst is not None
    assert deviation < config.ORACLE_TOL


def test_ideal_detectors_leave_no_detector_vacuum():
    cfg = bs_config(scale_from_decibels(-4.0), 0.6, resource_db=6.0, eta_s=0.8, eta_h=1.0)
    trace = build_and_propagate(cfg)
    for name in ("A~.x", "A~.p", "B~.x", "B~.p"):
        assert trace.x_out.coefficient(name) == 0.0
        assert trace.p_out.coefficient(name) == 0.0


def test_balanced_teleporter_oracle_variances():
    cfg = SqueezerConfig(variant=Variant.PS, phi=0.0, resource_db=3.0)
    oracle = oracle_noise_matrix(build_and_propagate(cfg), cfg)
    np.testing.assert_allclose(oracle, np.diag([10 ** -0.3, 10 ** -0.3]), atol=1e-12)


def test_input_map_has_unit_determinant():
    for cfg in random_configs(40, seed=11):
        m = ideal_map(build_and_propagate(cfg))
        assert np.linalg.det(m) == pytest.approx(1.0, abs=1e-10)


def test_feed_forward_gains_match_closed_form():
    for cfg in random_configs(40, seed=5):
        trace = build_and_propagate(cfg)
        np.testing.assert_allclose(trace.gains, gains(cfg), rtol=1e-12, atol=1e-12)


def test_anti_squeezed_source_quadratures_cancel():
    for cfg in random_configs(40, seed=6):
        trace = build_and_propagate(cfg)
        for name in ("s1.p", "s2.x", "s0.p"):
            assert abs(trace.x_out.coefficient(name)) < 1e-12
            assert abs(trace.p_out.coefficient(name)) < 1e-12


@pytest.mark.parametrize("variant", [Variant.PS, Variant.BS, Variant.BSPS])
def test_phase_shifts_agree_with_decomposition(variant):
    for cfg in [c for c in random_configs(60, seed=9) if c.variant is variant][:8]:
        trace = build_and_propagate(cfg)
        dec = decomposition(cfg)
        # angles are fixed up to a common half turn
        assert math.cos(2.0 * (trace.zeta - dec.zeta)) == pytest.approx(1.0, abs=1e-10)
        assert math.sin(trace.zeta - dec.zeta + trace.epsilon - dec.epsilon) == pytest.approx(0.0, abs=1e-9)
