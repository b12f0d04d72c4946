"""First-order Schrieffer-Wolff engine and closed-form coupling constants.

The engine substitutes the first-order transformed annihilation operators

    a_j -> a_j + sum_k htilde_kj a_k - s_j gtilde_j a_g,
    a_g -> a_g - sum_j s_j gtilde_j a_j,

into every self-Kerr term and expands in normal order. The closed forms
(four-body, residual, cross-Kerr, dressed spectrum) are independent
evaluations of specific monomial coefficients of that expansion, so the
two routes can be cross-checked to machine precision.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .operators import BosonicPolynomial, Monomial
from .pumpplan import PumpAssignment

MIXING_WARN = 0.2   # perturbative-validity warning threshold on |htilde|, |gtilde|
MIXING_LIMIT = 0.5  # hard validity limit
RWA_TOL_DEFAULT = 2.0 * np.pi * 1e3  # rad/s


class DegenerateModesError(ValueError):
    """Two coupled modes share a frequency, so the mixing ratio diverges."""


# --------------------------------------------------------------------------
# domain types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeSpectrum:
    """Per-KPO frequency/Kerr, plus an optional coupler mode."""

    omega: np.ndarray  # rad/s
    kerr: np.ndarray   # rad/s, signed
    coupler_omega: float | None = None
    coupler_kerr: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=float))
        object.__setattr__(self, "kerr", np.asarray(self.kerr, dtype=float))
        if self.omega.shape != self.kerr.shape:
            raise ValueError("omega and kerr must have matching shapes")
        if np.any(self.omega <= 0):
            raise ValueError("mode frequencies must be positive")

    @property
    def n_kpo(self) -> int:
        return len(self.omega)

    @property
    def has_coupler(self) -> bool:
        return self.coupler_omega is not None


@dataclass(frozen=True)
class CouplingGraph:
    """Two-body couplings: KPO-KPO matrix h and optional KPO-coupler vector g."""

    h: np.ndarray                 # (n, n) symmetric, rad/s, zero diagonal
    g: np.ndarray | None = None   # (n,) rad/s
    s: np.ndarray | None = None   # sign factors; default (+1, +1, -1, -1)

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        object.__setattr__(self, "h", h)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("h must be square")
        if not np.allclose(h, h.T):
            raise ValueError("h must be symmetric")
        if self.g is not None:
            object.__setattr__(self, "g", np.asarray(self.g, dtype=float))
            s = self.s
            if s is None:
                if h.shape[0] != 4:
                    raise ValueError("default sign factors need exactly 4 KPOs")
                s = np.array([1.0, 1.0, -1.0, -1.0])
            object.__setattr__(self, "s", np.asarray(s, dtype=float))


@dataclass(frozen=True)
class MixingCoefficients:
    """Dimensionless first-order mixing ratios htilde_jk = h_jk/(w_j - w_k)."""

    h_tilde: np.ndarray            # (n, n) antisymmetric
    g_tilde: np.ndarray | None = None  # (n,)
    s: np.ndarray | None = None


@dataclass(frozen=True)
class DressedSpectrum:
    omega_dressed: np.ndarray    # rad/s
    kerr_dressed: np.ndarray     # rad/s
    lamb_shift: np.ndarray       # rad/s (the -K_j term)
    coupling_shift: np.ndarray   # rad/s (Omega_j)


@dataclass(frozen=True)
class ReportEntry:
    creation: tuple[int, ...]
    annihilation: tuple[int, ...]
    coefficient: complex          # rad/s
    classification: str
    rotation_residual: float      # rad/s


@dataclass(frozen=True)
class FourBodyReport:
    entries: list[ReportEntry] = field(default_factory=list)

    def by_class(self, name: str) -> list[ReportEntry]:
        return [e for e in self.entries if e.classification == name]

    def coefficient(self, creation, annihilation) -> complex:
        for e in self.entries:
            if e.creation == tuple(creation) and e.annihilation == tuple(annihilation):
                return e.coefficient
        return 0.0

    def to_rows(self) -> list[dict]:
        """Serialize entries (coefficients quoted as value/2pi in MHz)."""
        rows = []
        for e in self.entries:
            mono = "".join(f"+{m}^{c}" for m, c in enumerate(e.creation, 1) if c) + \
                   "".join(f"-{m}^{a}" for m, a in enumerate(e.annihilation, 1) if a)
            rows.append(
                {
                    "monomial": mono or "1",
                    "class": e.classification,
                    "coefficient_MHz": e.coefficient / (2 * np.pi * 1e6),
                    "rotation_residual_Hz": e.rotation_residual / (2 * np.pi),
                }
            )
        return rows


# --------------------------------------------------------------------------
# mixing coefficients
# --------------------------------------------------------------------------

def sw_mixing(spectrum: ModeSpectrum, couplings: CouplingGraph) -> MixingCoefficients:
    """First-order mixing ratios for every nonzero coupling.

    Raises DegenerateModesError when a coupled pair is exactly degenerate.
    Warns when any ratio exceeds the perturbative-validity threshold.
    """
    n = spectrum.n_kpo
    h_tilde = np.zeros((n, n))
    for j in range(n):
        for k in range(n):
            if j == k or couplings.h[j, k] == 0.0:
                continue
            delta = spectrum.omega[j] - spectrum.omega[k]
            if delta == 0.0:
                raise DegenerateModesError(
                    f"KPOs {j + 1} and {k + 1} are degenerate with h != 0"
                )
            h_tilde[j, k] = couplings.h[j, k] / delta
    g_tilde = None
    if couplings.g is not None:
        if not spectrum.has_coupler:
            raise ValueError("coupler couplings given but spectrum has no coupler mode")
        g_tilde = np.zeros(n)
        for j in range(n):
            if couplings.g[j] == 0.0:
                continue
            delta = spectrum.omega[j] - spectrum.coupler_omega
            if delta == 0.0:
                raise DegenerateModesError(f"KPO {j + 1} degenerate with the coupler")
            g_tilde[j] = couplings.g[j] / delta

    worst = max(
        np.max(np.abs(h_tilde), initial=0.0),
        np.max(np.abs(g_tilde), initial=0.0) if g_tilde is not None else 0.0,
    )
    if worst >= MIXING_LIMIT:
        raise ValueError(f"mixing ratio {worst:.3f} >= {MIXING_LIMIT}: not perturbative")
    if worst > MIXING_WARN:
        warnings.warn(
            f"mixing ratio {worst:.3f} exceeds {MIXING_WARN}; first-order results degrade",
            stacklevel=2,
        )
    return MixingCoefficients(h_tilde=h_tilde, g_tilde=g_tilde, s=couplings.s)


# --------------------------------------------------------------------------
# operator engine
# --------------------------------------------------------------------------

def transform_kerr(spectrum: ModeSpectrum, mixing: MixingCoefficients) -> BosonicPolynomial:
    """All self-Kerr terms with first-order transformed operators substituted.

    Modes 0..n-1 are the KPOs; when the spectrum has a coupler it is mode n.
    The result is exact (all orders in the mixing ratios of the substituted
    quartic), Hermitian, and normal-ordered.
    """
    n = spectrum.n_kpo
    m = n + 1 if spectrum.has_coupler else n
    s = mixing.s if mixing.s is not None else np.array([1.0, 1.0, -1.0, -1.0])[:n]
    g_tilde = mixing.g_tilde

    total = BosonicPolynomial.zero(m)
    for j in range(n):
        a_new = BosonicPolynomial.annihilation(m, j)
        for k in range(n):
            if k != j and mixing.h_tilde[k, j] != 0.0:
                a_new = a_new + BosonicPolynomial.annihilation(m, k, mixing.h_tilde[k, j])
        if g_tilde is not None and g_tilde[j] != 0.0:
            a_new = a_new + BosonicPolynomial.annihilation(m, n, -s[j] * g_tilde[j])
        total = total + _kerr_quartic(a_new, spectrum.kerr[j])

    if spectrum.has_coupler and spectrum.coupler_kerr:
        a_new = BosonicPolynomial.annihilation(m, n)
        if g_tilde is not None:
            for j in range(n):
                if g_tilde[j] != 0.0:
                    a_new = a_new + BosonicPolynomial.annihilation(m, j, -s[j] * g_tilde[j])
        total = total + _kerr_quartic(a_new, spectrum.coupler_kerr)
    return total.pruned()


def _kerr_quartic(a_new: BosonicPolynomial, kerr: float) -> BosonicPolynomial:
    adag = a_new.conjugate()
    return (adag * adag * a_new * a_new) * (-kerr / 2.0)


def classify_monomial(creation, annihilation, coupler_mode: int | None = None) -> str:
    """Bucket a monomial by its net per-mode excitation pattern."""
    net = [c - a for c, a in zip(creation, annihilation)]
    if coupler_mode is not None:
        del net[coupler_mode]
    nonzero = sorted(abs(x) for x in net if x != 0)
    if sum(net) == 0:
        if nonzero == [1, 1, 1, 1]:
            return "four-body"
        if nonzero == [1, 1, 2]:
            return "residual-1"
        if nonzero == [1, 2, 3]:
            return "residual-2"
    if not nonzero:
        degrees = [c + a for c, a in zip(creation, annihilation)]
        if sorted(d for d in degrees if d) == [2, 2]:
            return "cross-kerr"
    return "other"


def rwa_filter(
    poly: BosonicPolynomial,
    pump: PumpAssignment,
    tol: float = RWA_TOL_DEFAULT,
    coupler_mode: int | None = None,
) -> FourBodyReport:
    """Keep monomials that are stationary in the frame rotating at omega_p/2.

    Each KPO mode rotates at half its pump frequency. The coupler (if any)
    is not pumped: monomials with unpaired coupler operators rotate at
    omega_g and are dropped outright.
    """
    omega_p = np.asarray(pump.omega_p, dtype=float)
    entries = []
    for (c, a), v in poly.pruned().terms.items():
        if coupler_mode is not None and c[coupler_mode] != a[coupler_mode]:
            continue
        rotation = 0.0
        for mode in range(poly.n_modes):
            if mode == coupler_mode:
                continue
            rotation += (c[mode] - a[mode]) * omega_p[mode] / 2.0
        if abs(rotation) < tol:
            entries.append(
                ReportEntry(
                    creation=c,
                    annihilation=a,
                    coefficient=v,
                    classification=classify_monomial(c, a, coupler_mode),
                    rotation_residual=abs(rotation),
                )
            )
    entries.sort(key=lambda e: -abs(e.coefficient))
    return FourBodyReport(entries=entries)


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------

def g4_closed_form(kerr_g: float, g_tilde: np.ndarray) -> float:
    """Coupler-mediated four-body coupling 2*prod(gtilde_j)*K_g."""
    g_tilde = np.asarray(g_tilde, dtype=float)
    if len(g_tilde) != 4:
        raise ValueError("need exactly four mixing ratios")
    return 2.0 * float(np.prod(g_tilde)) * kerr_g


def g4_symmetric(g_g: float, epsilon: float, kerr_g: float) -> float:
    """g4 on the symmetric detuning ladder (Delta_j = +-2eps, +-eps)."""
    if epsilon <= 0:
        raise ValueError("unit detuning must be positive")
    return g_g**4 / (2.0 * epsilon**4) * kerr_g


def h4_general(kerr: np.ndarray, h_tilde: np.ndarray) -> float:
    """KPO-nonlinearity four-body coupling, the four-term mixing-ratio sum.

    h4 = sum_j 2 K_j * prod_{k != j} htilde_kj over the four KPOs.
    """
    kerr = np.asarray(kerr, dtype=float)
    h_tilde = np.asarray(h_tilde, dtype=float)
    if kerr.shape != (4,) or h_tilde.shape != (4, 4):
        raise ValueError("h4_general expects 4 KPOs")
    total = 0.0
    for j in range(4):
        prod = 1.0
        for k in range(4):
            if k != j:
                prod *= h_tilde[k, j]
        total += 2.0 * kerr[j] * prod
    return total


def mixing_from_frequencies(h: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """htilde matrix from a coupling matrix and frequencies (no guards)."""
    n = len(omega)
    h_tilde = np.zeros((n, n))
    for j in range(n):
        for k in range(n):
            if j != k and h[j, k] != 0.0:
                delta = omega[j] - omega[k]
                if delta == 0.0:
                    raise DegenerateModesError(f"modes {j + 1}, {k + 1} degenerate")
                h_tilde[j, k] = h[j, k] / delta
    return h_tilde


def h4_symmetric(h12: float, h13: float, kerr: np.ndarray, deltas: dict) -> float:
    """Symmetric-circuit closed form (h12 = h34, h13 = h14 = h23 = h24).

    h4 = 2 h12 h13^2 [(K2-K1) D34 + (K3-K4) D12] / (D12 D13 D14 D34),
    valid under the frequency condition w1 + w2 = w3 + w4.
    """
    k1, k2, k3, k4 = np.asarray(kerr, dtype=float)
    d12, d13, d14, d34 = deltas["d12"], deltas["d13"], deltas["d14"], deltas["d34"]
    for name, d in (("d12", d12), ("d13", d13), ("d14", d14), ("d34", d34)):
        if d == 0.0:
            raise DegenerateModesError(f"{name} vanishes")
    return 2.0 * h12 * h13**2 * ((k2 - k1) * d34 + (k3 - k4) * d12) / (d12 * d13 * d14 * d34)


def ladder_deltas(epsilon: float) -> dict:
    """Frequency differences on the ladder w2 = w1-3e, w3 = w1-e, w4 = w1-2e."""
    if epsilon <= 0:
        raise ValueError("unit detuning must be positive")
    return {"d12": 3 * epsilon, "d13": epsilon, "d14": 2 * epsilon, "d34": epsilon}


def h4_detuning(h_q: float, epsilon: float, kerr: np.ndarray) -> float:
    """Detuning-ladder form: h_q^3 [(K2-K1) + 3(K3-K4)] / (3 eps^3)."""
    if epsilon <= 0:
        raise ValueError("unit detuning must be positive")
    k1, k2, k3, k4 = np.asarray(kerr, dtype=float)
    return h_q**3 * ((k2 - k1) + 3.0 * (k3 - k4)) / (3.0 * epsilon**3)


def h4_snail(h_qn: float, h_nn: float, h_qq: float, kerr: np.ndarray, epsilon: float) -> float:
    """SNAIL/SQUID mixed circuit on the detuning ladder.

    h4 = h_QN^2 [-h_NN (K1 + 3 K4) + h_QQ (K2 + 3 K3)] / (3 eps^3);
    KPOs 1 and 4 are the SNAILs, 2 and 3 the SQUIDs.
    """
    if epsilon <= 0:
        raise ValueError("unit detuning must be positive")
    k1, k2, k3, k4 = np.asarray(kerr, dtype=float)
    return h_qn**2 * (-h_nn * (k1 + 3.0 * k4) + h_qq * (k2 + 3.0 * k3)) / (3.0 * epsilon**3)


def h4_tilde(h_prime: float, kerr4: float, epsilon: float | None = None, deltas: dict | None = None) -> float:
    """Single-nonlinearity circuit: only K4 couples (KPO 4 mediates).

    With explicit deltas: -2 h'^3 K4 / (D13 D14 D34); on the default
    ladder this reduces to -h'^3 K4 / eps^3.
    """
    if deltas is None:
        if epsilon is None or epsilon <= 0:
            raise ValueError("need epsilon > 0 or explicit deltas")
        deltas = ladder_deltas(epsilon)
    d13, d14, d34 = deltas["d13"], deltas["d14"], deltas["d34"]
    return -2.0 * h_prime**3 * kerr4 / (d13 * d14 * d34)


def h4_double_tilde(h_pp: float, kerr1: float, kerr4: float, deltas: dict) -> float:
    """Two-nonlinearity circuit (h23 suppressed): K1 and K4 both couple.

    -2 h''^3 (K1 D34 + K4 D12) / (D12 D13 D14 D34), under w1+w2 = w3+w4.
    """
    d12, d13, d14, d34 = deltas["d12"], deltas["d13"], deltas["d14"], deltas["d34"]
    return -2.0 * h_pp**3 * (kerr1 * d34 + kerr4 * d12) / (d12 * d13 * d14 * d34)


# --------------------------------------------------------------------------
# dressed spectrum and cross-Kerr
# --------------------------------------------------------------------------

def dressed_spectrum(spectrum: ModeSpectrum, couplings: CouplingGraph) -> DressedSpectrum:
    """Perturbatively dressed frequency and Kerr of each KPO.

    omega_dressed = omega - K + Omega with the three-sum coupling shift;
    kerr_dressed = (1 + 2 sum_k htilde_jk htilde_kj) K.
    """
    mixing = sw_mixing(spectrum, couplings)
    n = spectrum.n_kpo
    h, ht = couplings.h, mixing.h_tilde
    coupling_shift = np.zeros(n)
    for j in range(n):
        s1 = sum(h[j, k] * ht[k, j] for k in range(n) if k != j)
        s2 = sum(
            h[j, k] * ht[k, l] * ht[l, j]
            for k in range(n)
            for l in range(n)
            if k != j and l != j and k != l
        )
        s3 = sum(
            ht[j, k] * h[k, l] * ht[l, j]
            for k in range(n)
            for l in range(n)
            if k != j and l != j and k < l
        )
        coupling_shift[j] = s1 + s2 - s3
    kerr_dressed = np.array(
        [
            (1.0 + 2.0 * sum(ht[j, k] * ht[k, j] for k in range(n) if k != j))
            * spectrum.kerr[j]
            for j in range(n)
        ]
    )
    lamb = -spectrum.kerr.copy()
    return DressedSpectrum(
        omega_dressed=spectrum.omega + lamb + coupling_shift,
        kerr_dressed=kerr_dressed,
        lamb_shift=lamb,
        coupling_shift=coupling_shift,
    )


def invert_dressed(omega_dressed: np.ndarray, kerr_dressed: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Leading-order bare estimates from measured dressed values.

    omega = omega_dressed + kerr_dressed, kerr = kerr_dressed; higher-order
    corrections are neglected.
    """
    omega_dressed = np.asarray(omega_dressed, dtype=float)
    kerr_dressed = np.asarray(kerr_dressed, dtype=float)
    return omega_dressed + kerr_dressed, kerr_dressed.copy()


def cross_kerr(spectrum: ModeSpectrum, mixing: MixingCoefficients) -> list[dict]:
    """Cross-Kerr couplings chi = -2 * mixing^2 * (K_a + K_b) for every pair."""
    n = spectrum.n_kpo
    out = []
    for j in range(n):
        for k in range(j + 1, n):
            if mixing.h_tilde[j, k] != 0.0:
                chi = -2.0 * mixing.h_tilde[j, k] ** 2 * (spectrum.kerr[j] + spectrum.kerr[k])
                out.append({"modes": (j, k), "chi": chi})
    if mixing.g_tilde is not None:
        for j in range(n):
            if mixing.g_tilde[j] != 0.0:
                chi = -2.0 * mixing.g_tilde[j] ** 2 * (spectrum.kerr[j] + spectrum.coupler_kerr)
                out.append({"modes": (j, "coupler"), "chi": chi})
    return out
