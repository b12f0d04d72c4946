"""Truncated-Fock-space diagonalization checks."""

import numpy as np
import pytest

from kpokit.constants import GHZ, MHZ
from kpokit.oracle import (
    build_hamiltonian,
    dressed_frequencies_exact,
    four_body_from_gap,
)
from kpokit.perturbation import CouplingGraph, ModeSpectrum


def _ladder(eps_ghz=0.1, kerr_mhz=(5.1, 20.0, 20.0, 5.1)):
    w1 = 10.0
    omega = np.array([w1, w1 - 3 * eps_ghz, w1 - eps_ghz, w1 - 2 * eps_ghz]) * GHZ
    return ModeSpectrum(omega=omega, kerr=np.array(kerr_mhz) * MHZ)


def _full_h(value, n=4):
    h = np.full((n, n), value)
    np.fill_diagonal(h, 0.0)
    return h


def test_single_mode_energies():
    spectrum = ModeSpectrum(omega=np.array([10.0 * GHZ]), kerr=np.array([20.0 * MHZ]))
    h = build_hamiltonian(spectrum, CouplingGraph(h=np.zeros((1, 1))), d=4)
    dense = h.matrix.toarray()
    assert np.allclose(dense, np.diag(np.diag(dense)))
    # n-th level: n*w - (K/2) n (n-1)
    assert dense[1, 1] == pytest.approx(10.0 * GHZ)
    assert dense[2, 2] == pytest.approx(2 * 10.0 * GHZ - 20.0 * MHZ)
    assert dense[3, 3] == pytest.approx(3 * 10.0 * GHZ - 3 * 20.0 * MHZ)


def test_hamiltonian_is_hermitian_sparse():
    spectrum = _ladder()
    h = build_hamiltonian(spectrum, CouplingGraph(h=_full_h(5.0 * MHZ)), d=3)
    asym = (h.matrix - h.matrix.T)
    assert asym.nnz == 0 or abs(asym).max() < 1e-9


def test_truncation_and_dimension_guards():
    spectrum = _ladder()
    with pytest.raises(ValueError, match="at least 3"):
        build_hamiltonian(spectrum, CouplingGraph(h=np.zeros((4, 4))), d=2)
    with pytest.raises(ValueError, match="guard"):
        build_hamiltonian(spectrum, CouplingGraph(h=np.zeros((4, 4))), d=40)


def test_two_mode_avoided_crossing():
    # two degenerate linear modes coupled at h split by exactly 2h within
    # the rotating-wave part; counter-rotating corrections are O(h^2/w)
    h_c = 5.0 * MHZ
    spectrum = ModeSpectrum(omega=np.array([10.0, 10.0]) * GHZ, kerr=np.zeros(2))
    ham = build_hamiltonian(
        spectrum, CouplingGraph(h=np.array([[0.0, h_c], [h_c, 0.0]])), d=6
    )
    vals = np.sort(np.linalg.eigvalsh(ham.matrix.toarray()))
    split = vals[2] - vals[1]
    assert split == pytest.approx(2 * h_c, rel=1e-3)


def test_dressed_frequencies_uncoupled_exact():
    spectrum = _ladder()
    ham = build_hamiltonian(spectrum, CouplingGraph(h=np.zeros((4, 4))), d=3)
    dressed = dressed_frequencies_exact(ham)
    assert np.allclose(dressed, spectrum.omega, rtol=1e-12)


def test_dressed_frequency_shift_matches_perturbation():
    # two linear modes: the exact dressed shift approaches h^2/Delta
    delta = 500 * MHZ
    h_c = 5.0 * MHZ
    spectrum = ModeSpectrum(
        omega=np.array([10.0 * GHZ, 10.0 * GHZ - delta]), kerr=np.zeros(2)
    )
    ham = build_hamiltonian(
        spectrum, CouplingGraph(h=np.array([[0.0, h_c], [h_c, 0.0]])), d=8
    )
    dressed = dressed_frequencies_exact(ham)
    shift = dressed[0] - spectrum.omega[0]
    assert shift == pytest.approx(h_c**2 / delta, rel=0.1)
    assert dressed[1] - spectrum.omega[1] == pytest.approx(-h_c**2 / delta, rel=0.1)


def test_gap_extraction_zero_couplings_gives_zero():
    spectrum = _ladder()
    result = four_body_from_gap(
        spectrum, CouplingGraph(h=np.zeros((4, 4))), d=3, scan_halfwidth=2 * MHZ, n_scan=11
    )
    # zero up to eigensolver roundoff on the ~1e11 rad/s frequency scale
    assert result["h_eff"] < 1e-12 * spectrum.omega.max()


def test_gap_extraction_requires_four_modes():
    spectrum = ModeSpectrum(omega=np.array([10.0, 9.9]) * GHZ, kerr=np.zeros(2))
    with pytest.raises(ValueError, match="four"):
        four_body_from_gap(spectrum, CouplingGraph(h=np.zeros((2, 2))), d=3,
                           scan_halfwidth=MHZ)


def test_gap_extraction_exchange_symmetry():
    # relabeling the pair (1,2) <-> (3,4) leaves |h_eff| unchanged
    spectrum = _ladder(eps_ghz=0.15)
    couplings = CouplingGraph(h=_full_h(5.0 * MHZ))
    base = four_body_from_gap(spectrum, couplings, d=4, scan_halfwidth=3 * MHZ, n_scan=21)
    perm = [2, 3, 0, 1]
    swapped_spec = ModeSpectrum(
        omega=spectrum.omega[perm], kerr=spectrum.kerr[perm]
    )
    swapped = four_body_from_gap(
        swapped_spec, CouplingGraph(h=couplings.h[np.ix_(perm, perm)]),
        d=4, scan_halfwidth=3 * MHZ, n_scan=21,
    )
    assert swapped["h_eff"] == pytest.approx(base["h_eff"], rel=1e-6)


def test_gap_minimum_is_interior_and_refined():
    spectrum = _ladder(eps_ghz=0.15)
    result = four_body_from_gap(
        spectrum, CouplingGraph(h=_full_h(5.0 * MHZ)), d=4,
        scan_halfwidth=3 * MHZ, n_scan=21,
    )
    assert abs(result["offset_min"]) < 3 * MHZ
    assert result["gap_min"] <= result["gaps"].min() + 1e-9 * abs(result["gaps"].min())
    assert result["h_eff"] > 0
