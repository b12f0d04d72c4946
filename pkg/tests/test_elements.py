"""Junction-resonator frequencies, Kerr nonlinearities, and SNAIL expansion."""

import math

import numpy as np
import pytest

from kpokit.constants import (
    E_CHARGE,
    GHZ,
    H_PLANCK,
    HBAR,
    MHZ,
    PHI0_REDUCED,
)
from kpokit.elements import (
    SeriesStack,
    SingleJunction,
    Snail,
    Squid,
    junction_inductances,
    kpo_mode_params,
    snail_current,
    snail_equilibrium_phase,
    snail_expansion,
    snail_flux_sweep,
    snail_kerr_frequency_fit,
    snail_mode_params,
    squid_inductance_for_frequency,
)


def test_physical_constants_exact():
    assert E_CHARGE == 1.602176634e-19
    assert H_PLANCK == 6.62607015e-34
    assert PHI0_REDUCED == pytest.approx(HBAR / (2.0 * E_CHARGE), rel=1e-15)


# --------------------------------------------------------------------------
# SQUID / junction resonators
# --------------------------------------------------------------------------

def test_coupler_kerr_kpo_like_set():
    l_j = squid_inductance_for_frequency(10 * GHZ, 500e-15, 100e-12)
    mode = kpo_mode_params(500e-15, 100e-12, SingleJunction(i0=PHI0_REDUCED / l_j))
    assert mode.omega == pytest.approx(10 * GHZ, rel=1e-12)
    assert mode.kerr / MHZ == pytest.approx(20.0297287, rel=1e-6)
    assert PHI0_REDUCED / l_j / 1e-9 == pytest.approx(809.3979053, rel=1e-6)


def test_coupler_kerr_transmon_like_set():
    l_j = squid_inductance_for_frequency(10 * GHZ, 100e-15, 100e-12)
    mode = kpo_mode_params(100e-15, 100e-12, SingleJunction(i0=PHI0_REDUCED / l_j))
    assert mode.kerr / MHZ == pytest.approx(171.6548764, rel=1e-6)
    assert PHI0_REDUCED / l_j / 1e-9 == pytest.approx(135.2659169, rel=1e-6)


def test_squid_inductance_values():
    l_jsr = PHI0_REDUCED / 1500e-9
    assert squid_inductance_for_frequency(10 * GHZ, 500e-15, 100e-12, l_jsr) / 1e-12 \
        == pytest.approx(187.2019326, rel=1e-6)
    assert squid_inductance_for_frequency(10 * GHZ, 500e-15, 100e-12) / 1e-12 \
        == pytest.approx(406.6059182, rel=1e-6)


def test_series_stack_kerr_values():
    l_jsr = PHI0_REDUCED / 1500e-9
    l_sq = squid_inductance_for_frequency(10 * GHZ, 500e-15, 100e-12, l_jsr)
    stack = SeriesStack((Squid(l_sq), SingleJunction(1500e-9)))
    mode = kpo_mode_params(500e-15, 100e-12, stack)
    assert mode.kerr / MHZ == pytest.approx(5.101655, rel=1e-5)
    squid_only = kpo_mode_params(
        500e-15, 100e-12, Squid(squid_inductance_for_frequency(10 * GHZ, 500e-15, 100e-12))
    )
    assert squid_only.kerr / MHZ == pytest.approx(20.0297287, rel=1e-6)


def test_frequency_inductance_round_trip():
    for c, l_geom, target in [(500e-15, 100e-12, 10 * GHZ), (120e-15, 50e-12, 7 * GHZ)]:
        l_j = squid_inductance_for_frequency(target, c, l_geom)
        mode = kpo_mode_params(c, l_geom, Squid(l_j))
        assert mode.omega == pytest.approx(target, rel=1e-12)


def test_unreachable_frequency_rejected():
    with pytest.raises(ValueError, match="unreachable"):
        squid_inductance_for_frequency(30 * GHZ, 500e-15, 100e-12)


def test_single_junction_stack_reduces_to_coupler_formula():
    # a one-junction series stack with no extra junction inductance must give
    # exactly the single-junction result
    junction = SingleJunction(i0=800e-9)
    direct = kpo_mode_params(500e-15, 100e-12, junction)
    stacked = kpo_mode_params(500e-15, 100e-12, SeriesStack((junction,)))
    assert stacked.omega == direct.omega
    assert stacked.kerr == direct.kerr


def test_junction_inductances_flatten():
    stack = SeriesStack((Squid(1e-10), SingleJunction(1e-6), SeriesStack((Squid(2e-10),))))
    assert junction_inductances(stack) == [1e-10, PHI0_REDUCED / 1e-6, 2e-10]


def test_invalid_inputs_rejected():
    with pytest.raises(ValueError):
        Squid(l_j=-1e-12)
    with pytest.raises(ValueError):
        SingleJunction(i0=0.0)
    with pytest.raises(ValueError):
        SeriesStack(())
    with pytest.raises(ValueError):
        kpo_mode_params(-1e-15, 100e-12, SingleJunction(1e-6))
    with pytest.raises(TypeError):
        kpo_mode_params(500e-15, 100e-12, Snail(i0=1e-6, gamma=0.3))


# --------------------------------------------------------------------------
# SNAIL
# --------------------------------------------------------------------------

DESIGN_SNAIL = dict(i0=1250e-9, gamma=0.3, n=2)


def test_equilibrium_phase_zero_flux():
    assert snail_equilibrium_phase(Snail(**DESIGN_SNAIL, phi_x=0.0)) == 0.0


def test_equilibrium_phase_antisymmetry():
    flux = 2 * math.pi * 0.31
    plus = snail_equilibrium_phase(Snail(**DESIGN_SNAIL, phi_x=flux))
    minus = snail_equilibrium_phase(Snail(**DESIGN_SNAIL, phi_x=-flux))
    assert minus == pytest.approx(-plus, rel=1e-9)


def test_equilibrium_residual_small():
    for turns in np.linspace(0.0, 0.5, 11):
        element = Snail(**DESIGN_SNAIL, phi_x=2 * math.pi * turns)
        phi_bar = snail_equilibrium_phase(element)
        assert abs(snail_current(phi_bar, element)) < 1e-10


def test_operating_point_values():
    element = Snail(**DESIGN_SNAIL, phi_x=2 * math.pi * 0.47)
    phi_bar = snail_equilibrium_phase(element)
    exp = snail_expansion(element, phi_bar, 100e-12)
    assert phi_bar == pytest.approx(2.6911065, rel=1e-6)
    assert exp.c2 == pytest.approx(0.22564553, rel=1e-6)
    assert exp.c3 == pytest.approx(-0.09796572, rel=1e-6)
    assert exp.c4 == pytest.approx(0.14614162, rel=1e-6)
    assert exp.participation == pytest.approx(0.92106138, rel=1e-6)
    mode = snail_mode_params(200e-15, 100e-12, element)
    assert mode.omega / GHZ == pytest.approx(9.9988466, rel=1e-6)
    assert mode.kerr / MHZ == pytest.approx(-23.737682, rel=1e-6)


def test_expansion_zero_flux():
    exp = snail_expansion(Snail(**DESIGN_SNAIL, phi_x=0.0), 0.0)
    assert exp.c2 == pytest.approx(0.8)
    assert exp.c3 == 0.0
    assert exp.c4 == pytest.approx(-(0.3 + 1.0 / 8.0))


def _potential(phi, element):
    # two-branch potential U/(phi0*I0): the small gamma junction plus the
    # n-junction arm threaded by the external flux
    return -element.gamma * np.cos(phi) \
        - element.n * np.cos((element.phi_x - phi) / element.n)


def test_expansion_matches_finite_differences():
    element = Snail(**DESIGN_SNAIL, phi_x=2 * math.pi * 0.47)
    phi_bar = snail_equilibrium_phase(element)
    exp = snail_expansion(element, phi_bar)
    h = 1e-2
    u = _potential(np.arange(-3, 4) * h + phi_bar, element)
    # fourth-order central stencils
    d2 = (-u[1] + 16 * u[2] - 30 * u[3] + 16 * u[4] - u[5]) / (12 * h**2)
    d3 = (u[0] - 8 * u[1] + 13 * u[2] - 13 * u[4] + 8 * u[5] - u[6]) / (8 * h**3)
    d4 = (-u[0] + 12 * u[1] - 39 * u[2] + 56 * u[3] - 39 * u[4] + 12 * u[5] - u[6]) / (6 * h**4)
    assert d2 == pytest.approx(exp.c2, rel=1e-6)
    assert d3 == pytest.approx(exp.c3, rel=1e-6)
    assert d4 == pytest.approx(exp.c4, rel=1e-6)


def test_expansion_requires_equilibrium():
    element = Snail(**DESIGN_SNAIL, phi_x=2 * math.pi * 0.47)
    with pytest.raises(ValueError, match="not an equilibrium"):
        snail_expansion(element, 0.3)


def test_kerr_sign_flips_with_flux():
    positive = snail_mode_params(200e-15, 100e-12, Snail(**DESIGN_SNAIL, phi_x=0.0))
    negative = snail_mode_params(200e-15, 100e-12, Snail(**DESIGN_SNAIL, phi_x=2 * math.pi * 0.47))
    assert positive.kerr > 0
    assert negative.kerr < 0


def test_participation_one_limit():
    element = Snail(**DESIGN_SNAIL, phi_x=2 * math.pi * 0.47)
    phi_bar = snail_equilibrium_phase(element)
    exp = snail_expansion(element, phi_bar, 0.0)
    assert exp.participation == 1.0
    mode = snail_mode_params(200e-15, 0.0, element)
    c32 = exp.c3**2 / exp.c2
    expected = -(1.0 / exp.c2) * (exp.c4 - (5.0 / 3.0) * c32) * E_CHARGE**2 / (2 * 200e-15) / HBAR
    assert mode.kerr == pytest.approx(expected, rel=1e-12)


def test_branch_continuity_over_sweep():
    flux = 2 * math.pi * np.linspace(0.0, 0.5, 51)
    phases = [snail_equilibrium_phase(Snail(**DESIGN_SNAIL, phi_x=f)) for f in flux]
    jumps = np.abs(np.diff(phases))
    assert jumps.max() < 0.5


def test_flux_sweep_kerr_negative_near_operating_point():
    flux = 2 * math.pi * np.linspace(0.46, 0.49, 7)
    sweep = snail_flux_sweep(200e-15, 100e-12, Snail(**DESIGN_SNAIL), flux)
    assert all(m.kerr < 0 for m in sweep)


def test_linear_fit_recovers_exact_line():
    slope, intercept = -3.5e-3, 2 * math.pi * 11.0e6
    from kpokit.elements import ModeParams

    omegas = np.linspace(9.0, 10.0, 5) * GHZ
    sweep = [ModeParams(omega=w, kerr=slope * w + intercept) for w in omegas]
    fit = snail_kerr_frequency_fit(sweep)
    assert fit.slope == pytest.approx(slope, rel=1e-10)
    assert fit.intercept == pytest.approx(intercept, rel=1e-10)
    assert fit.residual_norm < 1e-3
    assert fit.kerr_at(omegas[0]) == pytest.approx(sweep[0].kerr, rel=1e-10)


def test_degenerate_fit_inputs_rejected():
    from kpokit.elements import ModeParams

    same = [ModeParams(omega=9 * GHZ, kerr=1.0)] * 3
    with pytest.raises(ValueError, match="degenerate"):
        snail_kerr_frequency_fit(same)
    with pytest.raises(ValueError, match="at least 3"):
        snail_kerr_frequency_fit(same[:2])


def test_snail_invariants_enforced():
    with pytest.raises(ValueError):
        Snail(i0=1e-6, gamma=1.2)
    with pytest.raises(ValueError):
        Snail(i0=-1e-6, gamma=0.3)
    with pytest.raises(ValueError):
        Snail(i0=1e-6, gamma=0.3, n=0)
