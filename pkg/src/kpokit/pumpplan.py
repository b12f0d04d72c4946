"""Pump-frequency planning for four-body mixing.

Classifies pump-frequency sets against the four-body mixing condition and
residual resonance collisions, and generates nine-frequency assignments
for parity-encoded lattices where every plaquette satisfies a four-body
condition by construction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

RESONANCE_TOL = 2.0 * np.pi * 1e3  # rad/s, matches the RWA tolerance

# periodic 3x3 pump-index pattern; row y, column x
LHZ_PATTERN = ((1, 3, 7), (9, 2, 8), (5, 4, 6))


@dataclass(frozen=True)
class PumpAssignment:
    """Pump frequencies and phases, one per KPO."""

    omega_p: tuple[float, ...]           # rad/s
    theta_p: tuple[float, ...] = None    # radians

    def __post_init__(self):
        omega = tuple(float(w) for w in self.omega_p)
        object.__setattr__(self, "omega_p", omega)
        if any(w <= 0 for w in omega):
            raise ValueError("pump frequencies must be positive")
        theta = self.theta_p
        if theta is None:
            theta = (0.0,) * len(omega)
        else:
            theta = tuple(float(t) for t in theta)
            if len(theta) != len(omega):
                raise ValueError("theta_p length must match omega_p")
        object.__setattr__(self, "theta_p", theta)

    @property
    def theta_p_aggregate(self) -> float:
        """Plaquette pump phase theta_p1 + theta_p2 - theta_p3 - theta_p4."""
        t = self.theta_p
        if len(t) != 4:
            raise ValueError("aggregate phase defined for 4 KPOs")
        return t[0] + t[1] - t[2] - t[3]


@dataclass(frozen=True)
class ResonanceCondition:
    """Primitive integer relation sum_j n_j omega_pj = 0."""

    coefficients: tuple[int, ...]
    residual: float  # rad/s, |sum n_j omega_pj|
    classification: str

    @property
    def order(self) -> int:
        return sum(abs(n) for n in self.coefficients)


@dataclass(frozen=True)
class LhzPlan:
    sites: dict          # (x, y) -> pump index 1..9
    frequencies: dict    # pump index -> rad/s
    plaquettes: list     # dicts with corners, indices, condition, residual
    spurious: list = field(default_factory=list)

    def violations(self, tol: float = RESONANCE_TOL) -> list:
        return [p for p in self.plaquettes if p["residual"] >= tol]


# --------------------------------------------------------------------------
# classification helpers
# --------------------------------------------------------------------------

def classify_relation(coefficients: tuple[int, ...]) -> str:
    """Bucket an integer pump-frequency relation by its coefficient pattern."""
    nonzero = sorted(abs(n) for n in coefficients if n != 0)
    pos = sorted(n for n in coefficients if n > 0)
    neg = sorted(-n for n in coefficients if n < 0)
    if nonzero == [1, 1, 1, 1] and pos == [1, 1] and neg == [1, 1]:
        return "four-body"
    if nonzero == [1, 1, 2] and sum(coefficients) == 0:
        return "residual-1"
    if nonzero == [1, 2, 3] and sum(coefficients) == 0:
        return "residual-2"
    return "other"


def check_mixing(pump: PumpAssignment, tol: float = RESONANCE_TOL) -> list[str]:
    """Which pairings of four pumps satisfy w_a + w_b = w_c + w_d.

    Returns a subset of {"12|34", "13|24", "14|23"}. The first pairing
    makes the a1+ a2+ a3 a4 term stationary; the others make different
    four-body terms stationary instead.
    """
    w = pump.omega_p
    if len(w) != 4:
        raise ValueError("mixing check needs exactly four pump frequencies")
    out = []
    for label, (a, b, c, d) in (
        ("12|34", (0, 1, 2, 3)),
        ("13|24", (0, 2, 1, 3)),
        ("14|23", (0, 3, 1, 2)),
    ):
        if abs(w[a] + w[b] - w[c] - w[d]) < tol:
            out.append(label)
    return out


# --------------------------------------------------------------------------
# integer-relation enumeration
# --------------------------------------------------------------------------

def _exact_rescale(omega: tuple[float, ...], tol: float) -> list | None:
    """Map frequencies on a common grid to exact integers via Fractions.

    Returns integers whose ratios match omega to well below tol, or None
    when no modest-denominator grid exists (generic irrational inputs).
    """
    scale = max(omega)
    fracs = []
    for w in omega:
        f = Fraction(w / scale).limit_denominator(10**6)
        if abs(float(f) - w / scale) * scale > tol * 1e-3:
            return None
        fracs.append(f)
    denom = math.lcm(*(f.denominator for f in fracs))
    return [int(f * denom) for f in fracs]


def detect_residual(
    pump: PumpAssignment, max_order: int = 8, tol: float = RESONANCE_TOL
) -> list[ResonanceCondition]:
    """All primitive integer relations among the pump frequencies.

    Exhaustive over coefficient vectors with sum |n_j| <= max_order,
    deduplicated up to overall sign (the representative has its first
    nonzero coefficient positive). When the frequencies sit on a common
    grid the check is exact integer arithmetic, immune to float rounding.
    """
    if max_order > 8:
        raise ValueError("max_order capped at 8 (exhaustive enumeration bound)")
    omega = pump.omega_p
    n = len(omega)
    ints = _exact_rescale(omega, tol)
    found = []
    seen = set()
    for coeffs in itertools.product(range(-max_order, max_order + 1), repeat=n):
        if sum(abs(c) for c in coeffs) == 0 or sum(abs(c) for c in coeffs) > max_order:
            continue
        g = math.gcd(*(abs(c) for c in coeffs))
        if g != 1:
            continue  # not primitive
        first = next(c for c in coeffs if c != 0)
        if first < 0:
            continue  # sign-flipped duplicate
        if ints is not None:
            if sum(c * k for c, k in zip(coeffs, ints)) != 0:
                continue
            residual = 0.0
        else:
            residual = abs(sum(c * w for c, w in zip(coeffs, omega)))
            if residual >= tol:
                continue
        if coeffs in seen:
            continue
        seen.add(coeffs)
        found.append(
            ResonanceCondition(
                coefficients=coeffs,
                residual=residual,
                classification=classify_relation(coeffs),
            )
        )
    found.sort(key=lambda r: (r.order, r.coefficients))
    return found


# --------------------------------------------------------------------------
# LHZ lattice plan
# --------------------------------------------------------------------------

# spacing multipliers solving the four-constraint system with the five
# free frequencies (1, 3, 5, 7, 9) at multiples (0, 1, 2, 4, 8); the
# dependent ones follow as 2 = 3+9-1, 8 = 7+9-1, 4 = 3+5-1, 6 = 7+5-1
LHZ_MULTIPLIERS = {1: 0, 3: 1, 5: 2, 7: 4, 9: 8, 2: 9, 8: 12, 4: 3, 6: 6}


def lhz_frequencies(base: float, spacing: float) -> dict[int, float]:
    """A concrete nine-frequency assignment satisfying the plaquette system.

    The four constraints
        w1 + w2 = w3 + w9,   w1 + w8 = w7 + w9,
        w1 + w4 = w3 + w5,   w1 + w6 = w7 + w5
    leave five free frequencies; the chosen spacing multipliers make all
    nine distinct.
    """
    if spacing <= 0 or base <= 0:
        raise ValueError("base and spacing must be positive")
    return {i: base + k * spacing for i, k in LHZ_MULTIPLIERS.items()}


def lhz_plan(
    rows: int,
    base: float = 2.0 * np.pi * 9.0e9,
    spacing: float = 2.0 * np.pi * 20.0e6,
    frequencies: dict[int, float] | None = None,
    tol: float = RESONANCE_TOL,
) -> LhzPlan:
    """Tile a rows x rows plaquette lattice with the nine-frequency pattern.

    Sites live on an (rows+1) x (rows+1) grid; each unit square is a
    plaquette whose four pump frequencies satisfy one pairing condition
    derived from the four-constraint system. The validator recomputes
    every plaquette residual, so injected violations are reported rather
    than assumed away.
    """
    if rows < 2:
        raise ValueError("need at least a 2x2 plaquette lattice")
    if frequencies is not None:
        freqs = frequencies
        # user-supplied table: residuals come from float sums
        resid, scale = dict(frequencies), 1.0
    else:
        freqs = lhz_frequencies(base, spacing)
        # generated table: the common base cancels in every pairing sum, so
        # residuals reduce to exact integer multiplier combinations times
        # the spacing and valid plaquettes come out exactly zero
        resid, scale = dict(LHZ_MULTIPLIERS), spacing
    if sorted(freqs) != list(range(1, 10)):
        raise ValueError("frequency table must assign pump indices 1..9")

    sites = {
        (x, y): LHZ_PATTERN[y % 3][x % 3]
        for y in range(rows + 1)
        for x in range(rows + 1)
    }
    plaquettes = []
    for y in range(rows):
        for x in range(rows):
            corners = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)]
            idx = [sites[c] for c in corners]
            w = [resid[i] for i in idx]
            condition, residual = _best_pairing(idx, w)
            residual *= scale
            plaquettes.append(
                {
                    "corners": corners,
                    "indices": tuple(idx),
                    "condition": condition,
                    "residual": residual,
                }
            )
    spurious = _spurious_report(sites, freqs, rows, tol)
    return LhzPlan(sites=sites, frequencies=freqs, plaquettes=plaquettes, spurious=spurious)


def _best_pairing(idx: list[int], w: list) -> tuple[str, float]:
    """The pairing (a,b | c,d) of four corners with the smallest residual.

    The values may be frequencies in rad/s or exact integer grid offsets;
    integer input gives exact residuals.
    """
    best = None
    for (a, b), (c, d) in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        residual = abs(w[a] + w[b] - w[c] - w[d])
        label = f"w{idx[a]}+w{idx[b]}=w{idx[c]}+w{idx[d]}"
        if best is None or residual < best[1]:
            best = (label, residual)
    return best


def _spurious_report(sites: dict, freqs: dict, rows: int, tol: float) -> list:
    """Extra mixing conditions met by non-plaquette KPO quadruples.

    Checks the diamond of lattice neighbors around each interior site for
    accidental third-order conditions, and reports the always-present
    fourth-order quadruples of same-frequency KPOs (the 3-periodic tiling
    repeats each pump index on a square sublattice, and four equal pump
    frequencies trivially satisfy the mixing condition).
    """
    out = []
    for (x, y), center in sites.items():
        neigh = [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]
        if not all(c in sites for c in neigh):
            continue
        idx = [sites[c] for c in neigh]
        w = [freqs[i] for i in idx]
        label, residual = _best_pairing(idx, w)
        if residual < tol:
            out.append(
                {
                    "kind": "third-order diamond",
                    "center": (x, y),
                    "condition": label,
                    "negligible": False,
                }
            )
    if rows >= 3:
        for i in sorted(freqs):
            out.append(
                {
                    "kind": "fourth-order same-frequency quadruple",
                    "center": None,
                    "condition": f"2w{i}=2w{i} (KPOs with pump {i} on the period-3 sublattice)",
                    "negligible": True,
                }
            )
    return out
