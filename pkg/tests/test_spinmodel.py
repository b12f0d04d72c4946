"""Spin-state Boltzmann model: forward probabilities and coefficient fits."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpokit.constants import KHZ, MHZ
from kpokit.spinmodel import (
    SPIN_STATES,
    EffectiveEnergyModel,
    InteractionSet,
    OscillationConfig,
    beta_for_even_parity,
    boltzmann_probabilities,
    effective_coefficients,
    estimate_h4,
    fit_energy_model,
    model_from_coefficients,
    parity,
    parity_curve,
    parity_split,
    state_energy,
)

ALPHA = np.array([5.9, 4.5, 1.3, 5.3])


def _config(theta_p1=0.0, theta_d=None, eps_d=None):
    return OscillationConfig(
        alpha=ALPHA,
        epsilon_d=np.zeros(4) if eps_d is None else np.asarray(eps_d, dtype=float),
        theta_d=np.full(4, math.pi / 2) if theta_d is None else np.asarray(theta_d, dtype=float),
        theta_p=np.array([theta_p1, 0.0, 0.0, 0.0]),
    )


def _random_model(rng, scale=1.0):
    return EffectiveEnergyModel(
        eta=scale * rng.normal(),
        lam={k: scale * rng.normal() for k in ("234", "134", "124", "123")},
        mu={k: scale * rng.normal() for k in ("12", "13", "14", "23", "24", "34")},
        nu=tuple(scale * rng.normal() for _ in range(4)),
    )


# --------------------------------------------------------------------------
# forward model
# --------------------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ValueError, match="four entries"):
        OscillationConfig(
            alpha=np.ones(3), epsilon_d=np.zeros(4),
            theta_d=np.zeros(4), theta_p=np.zeros(4),
        )
    with pytest.raises(ValueError, match="non-negative"):
        _config_bad = OscillationConfig(
            alpha=np.array([1.0, -1.0, 1.0, 1.0]), epsilon_d=np.zeros(4),
            theta_d=np.zeros(4), theta_p=np.zeros(4),
        )


def test_probabilities_sum_to_one():
    rng = np.random.default_rng(7)
    for _ in range(20):
        probs = boltzmann_probabilities(_random_model(rng, scale=3.0))
        assert abs(sum(probs.values()) - 1.0) < 1e-12
        assert all(p >= 0 for p in probs.values())


@given(eta=st.floats(-50, 50, allow_nan=False), nu1=st.floats(-50, 50, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_probabilities_normalized_under_extreme_coefficients(eta, nu1):
    model = EffectiveEnergyModel(eta=eta, nu=(nu1, 0.0, 0.0, 0.0))
    probs = boltzmann_probabilities(model)
    assert abs(sum(probs.values()) - 1.0) < 1e-12


def test_null_model_is_uniform():
    probs = boltzmann_probabilities(EffectiveEnergyModel())
    assert all(p == pytest.approx(1 / 16, rel=1e-14) for p in probs.values())


def test_strong_four_body_freezes_even_sector():
    probs = boltzmann_probabilities(EffectiveEnergyModel(eta=-30.0))
    even, odd = parity_split(probs)
    assert even == pytest.approx(1.0, abs=1e-12)
    even_states = [s for s in SPIN_STATES if parity(s) == 1]
    for s in even_states:
        assert probs[s] == pytest.approx(1 / 8, rel=1e-12)


def test_state_energy_components():
    model = EffectiveEnergyModel(eta=-1.0, nu=(0.0, 0.0, 0.0, -2.0))
    e = state_energy(model, (1, 1, 1, 1), theta_d4=math.pi / 2)
    assert e == pytest.approx(-3.0)
    e_flip = state_energy(model, (1, 1, 1, -1), theta_d4=math.pi / 2)
    assert e_flip == pytest.approx(1.0 + 2.0)
    assert state_energy(model, (1, 1, 1, 1), theta_d4=0.0) == pytest.approx(-1.0)


def test_four_body_coefficient_vanishes_at_pump_phase_pi():
    ints = InteractionSet(h4=0.1 * MHZ)
    coeffs = effective_coefficients(_config(theta_p1=math.pi), ints)
    assert abs(coeffs["h4"]) < 1e-10 * MHZ


def test_drive_fields_vanish_at_zero_drive_phase():
    cfg = _config(theta_d=np.zeros(4), eps_d=np.full(4, 50 * KHZ))
    coeffs = effective_coefficients(cfg, InteractionSet(h4=0.1 * MHZ))
    assert coeffs["eps"] == (0.0, 0.0, 0.0, 0.0)
    assert coeffs["nu4_base"] == pytest.approx(2 * 50 * KHZ * ALPHA[3])


def test_residual_terms_bias_spin_pairs():
    ints = InteractionSet(g1=10 * KHZ, g3=5 * KHZ)
    coeffs = effective_coefficients(_config(), ints)
    model = model_from_coefficients(coeffs, beta=1.0 / MHZ)
    assert model.mu["14"] != 0.0
    assert model.mu["23"] == 0.0
    ints2 = InteractionSet(g2=10 * KHZ)
    model2 = model_from_coefficients(effective_coefficients(_config(), ints2), 1.0 / MHZ)
    assert model2.mu["23"] != 0.0
    assert model2.mu["14"] == 0.0


# --------------------------------------------------------------------------
# parity curve
# --------------------------------------------------------------------------

def test_parity_curve_shape():
    ints = InteractionSet(h4=0.1 * MHZ)
    cfg = _config(eps_d=np.full(4, 1 * KHZ))
    beta = beta_for_even_parity(cfg, ints, target_even=0.641)
    grid = np.linspace(0.0, 4 * math.pi, 81)
    even, odd = parity_curve(cfg, ints, grid, beta)

    assert np.allclose(even + odd, 1.0, atol=1e-12)
    # period 4*pi in the aggregate pump phase
    assert even[0] == pytest.approx(even[-1], abs=1e-9)
    # even and odd meet where the four-body coefficient vanishes
    i_pi = np.argmin(np.abs(grid - math.pi))
    assert even[i_pi] == pytest.approx(0.5, abs=1e-9)
    # maximum at theta_p = 0 hits the calibration target, and the
    # minimum at theta_p = 2*pi mirrors it
    assert even[0] == pytest.approx(0.641, abs=1e-9)
    i_2pi = np.argmin(np.abs(grid - 2 * math.pi))
    assert even[i_2pi] == pytest.approx(0.359, abs=0.003)
    # monotone decrease from the maximum to the minimum
    assert np.all(np.diff(even[: i_2pi + 1]) < 1e-12)


def test_beta_calibration_errors():
    ints = InteractionSet(h4=0.1 * MHZ)
    with pytest.raises(ValueError, match=r"\(0.5, 1\)"):
        beta_for_even_parity(_config(), ints, target_even=0.4)
    with pytest.raises(ValueError, match="vanishes"):
        beta_for_even_parity(_config(), InteractionSet(h4=0.0), target_even=0.641)


def test_parity_split_complementarity():
    rng = np.random.default_rng(3)
    even, odd = parity_split(boltzmann_probabilities(_random_model(rng)))
    assert even + odd == pytest.approx(1.0, abs=1e-12)


# --------------------------------------------------------------------------
# fitting
# --------------------------------------------------------------------------

def _synthetic_dataset(model, n_points=25, seed=None):
    theta = np.linspace(0.05, 2 * math.pi - 0.05, n_points)
    probs = np.array(
        [
            [boltzmann_probabilities(model, theta_d4=t)[s] for s in SPIN_STATES]
            for t in theta
        ]
    )
    return theta, probs


def test_fit_round_trip():
    rng = np.random.default_rng(11)
    model = _random_model(rng, scale=0.4)
    theta, probs = _synthetic_dataset(model)
    fit = fit_energy_model(theta, probs)
    assert fit.model.eta == pytest.approx(model.eta, abs=1e-6)
    for k, v in model.lam.items():
        assert fit.model.lam[k] == pytest.approx(v, abs=1e-6)
    for k, v in model.mu.items():
        assert fit.model.mu[k] == pytest.approx(v, abs=1e-6)
    for got, want in zip(fit.model.nu, model.nu):
        assert got == pytest.approx(want, abs=1e-6)
    assert fit.residual_norm < 1e-8


def test_fit_reference_curve_slope():
    rng = np.random.default_rng(13)
    model = _random_model(rng, scale=0.3)
    theta, probs = _synthetic_dataset(model)
    fit = fit_energy_model(theta, probs)
    # p_ref carries exp(+nu4 sin(theta)) for the all-down reference state
    # (s4 = -1 flips the sign of the field energy)
    assert fit.reference["B"] == pytest.approx(model.nu[3], abs=0.15)
    assert fit.reference["C"] == 0.0


def test_fit_zero_couplings():
    theta, probs = _synthetic_dataset(EffectiveEnergyModel())
    fit = fit_energy_model(theta, probs)
    assert abs(fit.model.eta) < 1e-10
    assert all(abs(v) < 1e-10 for v in fit.model.mu.values())


def test_fit_input_validation():
    theta = np.linspace(0, 2 * math.pi, 20)
    with pytest.raises(ValueError, match=r"\(n_points, 16\)"):
        fit_energy_model(theta, np.ones((20, 15)))
    with pytest.raises(ValueError, match="at least 16"):
        fit_energy_model(theta[:10], np.full((10, 16), 1 / 16))
    bad = np.full((20, 16), 1 / 16)
    bad[0, 0] = -0.01
    with pytest.raises(ValueError, match="negative"):
        fit_energy_model(theta, bad)


def test_fit_ill_conditioned_grid_rejected():
    # constant theta gives no leverage on nu4 vs the other fields
    theta = np.zeros(20)
    probs = np.full((20, 16), 1 / 16)
    with pytest.raises(ValueError, match="ill-conditioned"):
        fit_energy_model(theta, probs)


def test_fit_floors_tiny_probabilities():
    model = EffectiveEnergyModel(eta=-20.0)
    theta, probs = _synthetic_dataset(model)
    with pytest.warns(UserWarning, match="floored"):
        fit = fit_energy_model(theta, probs)
    assert fit.model.eta < 0


# --------------------------------------------------------------------------
# interaction-strength estimation
# --------------------------------------------------------------------------

def test_estimate_h4_round_trip():
    h4 = 0.1 * MHZ
    eps4 = 20 * KHZ
    cfg = OscillationConfig(
        alpha=ALPHA,
        epsilon_d=np.array([0.0, 0.0, 0.0, eps4]),
        theta_d=np.full(4, math.pi / 2),
        theta_p=np.zeros(4),
    )
    coeffs = effective_coefficients(cfg, InteractionSet(h4=h4))
    beta = 2.0 / MHZ
    model = model_from_coefficients(coeffs, beta)
    estimate = estimate_h4(model.eta, model.nu[3], eps4, ALPHA, theta_p=0.0)
    assert estimate == pytest.approx(h4, rel=1e-6)


def test_estimate_h4_errors():
    with pytest.raises(ValueError, match="nonzero"):
        estimate_h4(1.0, 0.0, 1.0, ALPHA)
    with pytest.raises(ValueError, match="vanishes"):
        estimate_h4(1.0, 1.0, 1.0, np.array([1.0, 0.0, 1.0, 1.0]))


def test_estimate_h4_zero_eta_gives_zero():
    assert estimate_h4(0.0, 1.0, 1.0, ALPHA) == 0.0
