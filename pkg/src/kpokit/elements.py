"""Resonance frequencies and Kerr nonlinearities of junction-based resonators.

Covers SQUID KPOs, KPOs with extra series junctions, single-junction
couplers, and SNAILs. All frequencies are angular (rad/s) internally;
conversion to/from GHz and MHz happens only at I/O boundaries.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .constants import E_CHARGE, HBAR, PHI0_REDUCED


# --------------------------------------------------------------------------
# element variants
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Squid:
    """Flux-tunable SQUID, modeled by its effective Josephson inductance."""

    l_j: float  # henries

    def __post_init__(self):
        if self.l_j <= 0:
            raise ValueError("SQUID inductance must be positive")


@dataclass(frozen=True)
class SingleJunction:
    i0: float  # critical current, amperes

    def __post_init__(self):
        if self.i0 <= 0:
            raise ValueError("critical current must be positive")

    @property
    def l_j(self) -> float:
        return PHI0_REDUCED / self.i0


@dataclass(frozen=True)
class SeriesStack:
    elements: tuple

    def __post_init__(self):
        if not self.elements:
            raise ValueError("series stack needs at least one element")


@dataclass(frozen=True)
class Snail:
    """n junctions (critical current i0) in a loop with one gamma*i0 junction."""

    i0: float           # amperes
    gamma: float        # critical-current ratio, 0 < gamma < 1
    n: int = 2          # junction count on the large branch
    phi_x: float = 0.0  # external flux phase, radians

    def __post_init__(self):
        if self.i0 <= 0:
            raise ValueError("critical current must be positive")
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must satisfy 0 < gamma < 1")
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError("n must be a positive integer")


JunctionElement = Squid | SingleJunction | SeriesStack | Snail


def junction_inductances(element: JunctionElement) -> list[float]:
    """Flatten an element into its list of junction inductances [H]."""
    if isinstance(element, Squid):
        return [element.l_j]
    if isinstance(element, SingleJunction):
        return [element.l_j]
    if isinstance(element, SeriesStack):
        out: list[float] = []
        for sub in element.elements:
            out.extend(junction_inductances(sub))
        return out
    raise TypeError(f"element {element!r} has no simple inductance list")


# --------------------------------------------------------------------------
# results
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeParams:
    omega: float  # rad/s
    kerr: float   # rad/s, signed

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("resonance frequency must be positive")


@dataclass(frozen=True)
class SnailExpansion:
    phi_bar: float  # equilibrium phase, radians
    c2: float
    c3: float
    c4: float
    participation: float  # inductive participation p


@dataclass(frozen=True)
class LinearFit:
    slope: float       # d kerr / d omega, dimensionless
    intercept: float   # rad/s
    residual_norm: float  # rad/s

    def kerr_at(self, omega: float) -> float:
        return self.slope * omega + self.intercept


# --------------------------------------------------------------------------
# SQUID / junction resonators
# --------------------------------------------------------------------------

def kpo_mode_params(c_eff: float, l_geom: float, element: JunctionElement) -> ModeParams:
    """Frequency and Kerr of a junction resonator.

    omega = 1/sqrt(C (L + sum L_J)); hbar*K = (sum L_J^3)/(L_total^3) * e^2/(2C),
    i.e. each junction's inductance enters cubed in the numerator.
    SNAILs are handled by `snail_mode_params` instead.
    """
    if c_eff <= 0:
        raise ValueError("effective capacitance must be positive")
    if isinstance(element, Snail):
        raise TypeError("use snail_mode_params for SNAIL elements")
    l_js = junction_inductances(element)
    l_total = l_geom + sum(l_js)
    if l_total <= 0:
        raise ValueError("total inductance must be positive")
    omega = 1.0 / math.sqrt(c_eff * l_total)
    kerr = sum(lj**3 for lj in l_js) / l_total**3 * E_CHARGE**2 / (2.0 * c_eff) / HBAR
    return ModeParams(omega=omega, kerr=kerr)


def squid_inductance_for_frequency(
    omega_target: float, c_eff: float, l_geom: float, l_jsr: float = 0.0
) -> float:
    """SQUID inductance that puts the resonator at `omega_target`.

    Inverts omega = 1/sqrt(C (L + L_Jsr + L_Jsq)); raises if the target lies
    above the cutoff set by the fixed inductances.
    """
    if omega_target <= 0 or c_eff <= 0:
        raise ValueError("frequency and capacitance must be positive")
    l_jsq = 1.0 / (omega_target**2 * c_eff) - l_geom - l_jsr
    if l_jsq <= 0:
        cutoff = 1.0 / math.sqrt(c_eff * (l_geom + l_jsr))
        raise ValueError(
            f"target frequency unreachable: needs L_Jsq <= 0 "
            f"(cutoff omega/2pi = {cutoff / (2 * math.pi) / 1e9:.3f} GHz)"
        )
    return l_jsq


# --------------------------------------------------------------------------
# SNAIL
# --------------------------------------------------------------------------

def snail_current(phi: np.ndarray | float, element: Snail) -> np.ndarray | float:
    """Circulating current I(phi, phi_X)/I0 at phase `phi` (equilibrium when 0).

    This is dU/dphi of the two-branch potential. The condition is
    gamma*sin(phi) - sin((phi_X - phi)/n) = 0.
    """
    return element.gamma * np.sin(phi) - np.sin((element.phi_x - phi) / element.n)


def snail_equilibrium_phase(element: Snail, grid_step: float = 1e-3) -> float:
    """Equilibrium phase, on the branch continuously connected to 0 at phi_X = 0.

    The flux is swept from 0 to phi_X; at each step the root nearest the
    previous one is bracketed on a dense grid and refined by bisection.
    """
    target = element.phi_x
    if target == 0.0:
        return 0.0
    n_steps = max(8, int(abs(target) / 0.05))
    phi_bar = 0.0
    for flux in np.linspace(0.0, target, n_steps + 1)[1:]:
        snapshot = Snail(element.i0, element.gamma, element.n, flux)
        phi_bar = _nearest_root(snapshot, phi_bar, grid_step)
    residual = abs(snail_current(phi_bar, element))
    if residual >= 1e-10:
        raise RuntimeError(f"equilibrium residual {residual:.3e} exceeds 1e-10")
    return phi_bar


def _nearest_root(element: Snail, guess: float, grid_step: float) -> float:
    half_window = 1.5
    grid = np.arange(guess - half_window, guess + half_window + grid_step, grid_step)
    vals = snail_current(grid, element)
    sign_flips = np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]
    if len(sign_flips) == 0:
        raise RuntimeError(
            f"no root bracket found in [{grid[0]:.3f}, {grid[-1]:.3f}] rad "
            f"around previous solution {guess:.3f}"
        )
    roots = [
        brentq(lambda p: snail_current(p, element), grid[i], grid[i + 1], xtol=1e-13)
        for i in sign_flips
    ]
    return min(roots, key=lambda r: abs(r - guess))


def snail_expansion(element: Snail, phi_bar: float, l_geom: float = 0.0) -> SnailExpansion:
    """Taylor coefficients c2..c4 of the SNAIL potential at the equilibrium.

    c_k = (1/phi0*I0) d^k U / dphi^k |_{phi_bar}; participation
    p = phi0/(phi0 + c2*L*I0).
    """
    residual = abs(snail_current(phi_bar, element))
    if residual >= 1e-10:
        raise ValueError(f"phi_bar is not an equilibrium (residual {residual:.3e})")
    gamma, n, phi_x = element.gamma, element.n, element.phi_x
    arg = (phi_x - phi_bar) / n
    c2 = gamma * math.cos(phi_bar) + math.cos(arg) / n
    c3 = -gamma * math.sin(phi_bar) + math.sin(arg) / n**2
    c4 = -gamma * math.cos(phi_bar) - math.cos(arg) / n**3
    if c2 <= 0:
        raise ValueError(f"c2 = {c2:.4f} <= 0: not a stable potential minimum")
    p = PHI0_REDUCED / (PHI0_REDUCED + c2 * l_geom * element.i0)
    return SnailExpansion(phi_bar=phi_bar, c2=c2, c3=c3, c4=c4, participation=p)


def snail_mode_params(c: float, l_geom: float, element: Snail) -> ModeParams:
    """Frequency and (signed) Kerr of a SNAIL resonator at its operating flux."""
    if c <= 0:
        raise ValueError("capacitance must be positive")
    phi_bar = snail_equilibrium_phase(element)
    exp = snail_expansion(element, phi_bar, l_geom)
    p = exp.participation
    c32 = exp.c3**2 / exp.c2
    bracket = exp.c4 - 3.0 * c32 * (1.0 - p) - (5.0 / 3.0) * c32 * p
    kerr = -(p**3 / exp.c2) * bracket * E_CHARGE**2 / (2.0 * c) / HBAR
    omega = 1.0 / math.sqrt(c * (l_geom + PHI0_REDUCED / (exp.c2 * element.i0)))
    return ModeParams(omega=omega, kerr=kerr)


def snail_flux_sweep(
    c: float, l_geom: float, element: Snail, flux_values: np.ndarray
) -> list[ModeParams]:
    """Mode parameters over a grid of external flux phases (radians)."""
    return [
        snail_mode_params(c, l_geom, Snail(element.i0, element.gamma, element.n, flux))
        for flux in flux_values
    ]


def snail_kerr_frequency_fit(sweep: list[ModeParams]) -> LinearFit:
    """Least-squares line K(omega) through a flux sweep."""
    if len(sweep) < 3:
        raise ValueError("need at least 3 sweep points")
    omegas = np.array([m.omega for m in sweep])
    kerrs = np.array([m.kerr for m in sweep])
    if np.ptp(omegas) == 0.0:
        raise ValueError("degenerate sweep: all frequencies equal")
    slope, intercept = np.polyfit(omegas, kerrs, 1)
    residual = np.linalg.norm(kerrs - (slope * omegas + intercept))
    return LinearFit(slope=float(slope), intercept=float(intercept), residual_norm=float(residual))
