"""Command-line front end.

Subcommands: quantize, couplings, sweep, snail, pump-plan, parity,
boltzmann, fit, oracle. All tables are CSV with '#'-prefixed metadata
lines and fixed 9-significant-digit float formatting, so identical
inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import math
import sys

import numpy as np

from . import __version__
from .constants import GHZ, MHZ
from .elements import (
    SingleJunction,
    Snail,
    kpo_mode_params,
    snail_flux_sweep,
    snail_kerr_frequency_fit,
    snail_mode_params,
)
from .netlist import (
    build_capacitance_matrix,
    coupling_constants,
    extract_bare,
    invert_capacitance,
    load_netlist,
    mode_reduce,
)
from .oracle import four_body_from_gap
from .perturbation import (
    ModeSpectrum,
    g4_symmetric,
    h4_detuning,
    h4_snail,
    h4_tilde,
    mixing_from_frequencies,
    h4_general,
)
from .pumpplan import lhz_plan
from .spinmodel import (
    EffectiveEnergyModel,
    InteractionSet,
    OscillationConfig,
    beta_for_even_parity,
    boltzmann_probabilities,
    fit_energy_model,
    parity_curve,
)

ERROR_PREFIX = "KPOKIT-ERROR"


def _fmt(x: float) -> str:
    return f"{float(x):.9g}"


def _emit(out, meta: list[str], header: list[str], rows: list[list]) -> None:
    for line in meta:
        out.write(f"# {line}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, (int, float, np.floating)) else v for v in row])


def _meta(command: str, args=None) -> list[str]:
    meta = [f"kpokit {__version__}", f"command: {command}"]
    if args is not None:
        config = sorted(
            (k, repr(v)) for k, v in vars(args).items() if k != "func"
        )
        digest = hashlib.sha256(repr(config).encode()).hexdigest()[:16]
        meta.append(f"config: {digest}")
    return meta


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_quantize(args, out) -> int:
    net = load_netlist(args.netlist)
    use_effective = args.effective
    g = None
    if use_effective:
        g = invert_capacitance(build_capacitance_matrix(net), net)
    to_ground: dict[str, float] = {}
    for cap in net.capacitors:
        if net.ground in (cap.node_a, cap.node_b):
            node = cap.node_b if cap.node_a == net.ground else cap.node_a
            to_ground[node] = to_ground.get(node, 0.0) + cap.capacitance
    rows = []
    branches = [b for b in net.branches if b.element is not None]
    if not branches:
        raise ValueError("netlist has no junction branches to quantize")
    for br in branches:
        node = br.nodes[0]
        if use_effective:
            idx = g.node_order.index(node)
            c_eff = 1.0 / g.matrix[idx, idx]
        else:
            if node not in to_ground:
                raise ValueError(f"node {node!r} has no capacitor to ground")
            c_eff = to_ground[node]
        if isinstance(br.element, Snail):
            mode = snail_mode_params(c_eff, br.l_series, br.element)
        else:
            mode = kpo_mode_params(c_eff, br.l_series, br.element)
        rows.append([node, mode.omega / GHZ, mode.kerr / MHZ])
    _emit(out, _meta("quantize", args), ["node", "freq_GHz", "kerr_MHz"], rows)
    return 0


def cmd_couplings(args, out) -> int:
    net = load_netlist(args.netlist)
    kpo_nodes = tuple(args.kpo_nodes.split(","))
    coupler_pair = tuple(args.coupler_nodes.split(","))
    freqs = [float(x) * GHZ for x in args.freq_ghz.split(",")]
    if len(freqs) != 4:
        raise ValueError("--freq-ghz needs four comma-separated values")
    coupler_omega = float(args.coupler_freq_ghz) * GHZ if args.coupler_freq_ghz else None
    spectrum = ModeSpectrum(
        omega=np.array(freqs),
        kerr=np.zeros(4),
        coupler_omega=coupler_omega,
        coupler_kerr=0.0 if coupler_omega else None,
    )
    c = build_capacitance_matrix(net)
    g = invert_capacitance(c, net)
    bare = extract_bare(net, kpo_nodes, coupler_pair)
    modes = mode_reduce(g, kpo_nodes, coupler_pair, bare=bare)
    graphs = coupling_constants(modes, spectrum)
    rows = []
    for j in range(4):
        for k in range(j + 1, 4):
            rows.append(
                [
                    f"h{j + 1}{k + 1}",
                    graphs["exact"].h[j, k] / MHZ,
                    graphs["approx"].h[j, k] / MHZ,
                ]
            )
    if coupler_omega is not None:
        for j in range(4):
            rows.append(
                [f"g{j + 1}", graphs["exact"].g[j] / MHZ, graphs["approx"].g[j] / MHZ]
            )
    _emit(out, _meta("couplings", args), ["coupling", "exact_MHz", "approx_MHz"], rows)
    return 0


def _snail_design_kerr() -> float:
    """SNAIL KPO Kerr [rad/s] at the 10 GHz design frequency, from the
    linear Kerr-vs-frequency fit over the operating flux window."""
    element = Snail(i0=1250e-9, gamma=0.3, n=2)
    # negative-Kerr branch of the flux sweep; the linear fit is the
    # one-to-one Kerr-frequency correspondence used for the design point
    flux = 2.0 * np.pi * np.linspace(0.465, 0.495, 9)
    sweep = snail_flux_sweep(200e-15, 100e-12, element, flux)
    fit = snail_kerr_frequency_fit(sweep)
    return fit.kerr_at(10.0 * GHZ)


def sweep_parameter_sets() -> dict:
    """Fixed 10 GHz design values behind the coupling-vs-detuning sweep.

    Two-body couplings are all 5 MHz by construction (the coupling
    capacitors are chosen for that); the SNAIL-circuit neighbors scale
    with the KPO capacitance ratio sqrt(C_qj C_qk).
    """
    k_g_kpo = kpo_mode_params(
        500e-15, 100e-12, SingleJunction(i0=_i0_for(500e-15, 100e-12))
    ).kerr
    k_g_transmon = kpo_mode_params(
        100e-15, 100e-12, SingleJunction(i0=_i0_for(100e-15, 100e-12))
    ).kerr
    k_snail = _snail_design_kerr()
    h_qn = 5.0 * MHZ
    scale = math.sqrt(200.0 * 500.0)
    return {
        "g_g": 5.0 * MHZ,
        "h_q": 5.0 * MHZ,
        "h_qn": h_qn,
        "h_nn": h_qn * scale / 200.0,
        "h_qq": h_qn * scale / 500.0,
        "k_g_kpo": k_g_kpo,
        "k_g_transmon": k_g_transmon,
        "kerr_squid": np.array([5.1, 20.0, 20.0, 5.1]) * MHZ,
        "kerr_snail": np.array([k_snail, 20.0 * MHZ, 20.0 * MHZ, k_snail]),
        "k4": 20.0 * MHZ,
    }


def _i0_for(c: float, l_geom: float) -> float:
    """Critical current putting a junction resonator at 10 GHz."""
    from .constants import PHI0_REDUCED
    from .elements import squid_inductance_for_frequency

    return PHI0_REDUCED / squid_inductance_for_frequency(10.0 * GHZ, c, l_geom)


def cmd_sweep(args, out) -> int:
    if args.start_mhz <= 0 or args.stop_mhz <= args.start_mhz:
        raise ValueError("sweep range must satisfy 0 < start < stop")
    if args.points < 2:
        raise ValueError("sweep needs at least 2 points")
    if args.log:
        eps_grid = np.geomspace(args.start_mhz, args.stop_mhz, args.points)
    else:
        eps_grid = np.linspace(args.start_mhz, args.stop_mhz, args.points)
    p = sweep_parameter_sets()
    rows = []
    for eps_mhz in eps_grid:
        eps = eps_mhz * MHZ
        rows.append(
            [
                eps_mhz,
                abs(g4_symmetric(p["g_g"], eps, p["k_g_kpo"])) / MHZ,
                abs(g4_symmetric(p["g_g"], eps, p["k_g_transmon"])) / MHZ,
                abs(h4_detuning(p["h_q"], eps, p["kerr_squid"])) / MHZ,
                abs(h4_snail(p["h_qn"], p["h_nn"], p["h_qq"], p["kerr_snail"], eps)) / MHZ,
                abs(h4_tilde(p["h_q"], p["k4"], epsilon=eps)) / MHZ,
            ]
        )
    meta = _meta("sweep", args) + ["two-body couplings fixed at 5 MHz (detuning reference)"]
    _emit(
        out,
        meta,
        ["eps_MHz", "g4_kpo_like", "g4_transmon_like", "h4_squid", "h4_snail", "h4_tilde"],
        rows,
    )
    return 0


def cmd_snail(args, out) -> int:
    element = Snail(i0=args.i0_na * 1e-9, gamma=args.gamma, n=args.n)
    flux = 2.0 * np.pi * np.linspace(args.flux_start, args.flux_stop, args.points)
    sweep = snail_flux_sweep(args.c_ff * 1e-15, args.l_ph * 1e-12, element, flux)
    fit = snail_kerr_frequency_fit(sweep)
    meta = _meta("snail", args) + [
        f"kerr(omega) fit: slope {_fmt(fit.slope)} , intercept_MHz {_fmt(fit.intercept / MHZ)}"
        f" , residual_MHz {_fmt(fit.residual_norm / MHZ)}"
    ]
    rows = [
        [f / (2.0 * np.pi), m.omega / GHZ, m.kerr / MHZ]
        for f, m in zip(flux, sweep)
    ]
    _emit(out, meta, ["flux_turns", "freq_GHz", "kerr_MHz"], rows)
    return 0


def cmd_pump_plan(args, out) -> int:
    plan = lhz_plan(args.rows, base=args.base_ghz * GHZ, spacing=args.spacing_mhz * MHZ)
    meta = _meta("pump-plan", args)
    for i in sorted(plan.frequencies):
        meta.append(f"pump {i}: {_fmt(plan.frequencies[i] / GHZ)} GHz")
    violations = plan.violations()
    meta.append(f"plaquette violations: {len(violations)}")
    for s in plan.spurious:
        tag = "negligible" if s["negligible"] else "SIGNIFICANT"
        meta.append(f"spurious [{tag}] {s['kind']}: {s['condition']}")
    rows = [
        [x, y, plan.sites[(x, y)]]
        for y in range(args.rows + 1)
        for x in range(args.rows + 1)
    ]
    _emit(out, meta, ["x", "y", "pump_index"], rows)
    return 0


def cmd_parity(args, out) -> int:
    alpha = np.array([float(x) for x in args.alpha.split(",")])
    config = OscillationConfig(
        alpha=alpha,
        epsilon_d=np.zeros(4),
        theta_d=np.full(4, math.pi / 2.0),
        theta_p=np.zeros(4),
    )
    ints = InteractionSet(h4=args.h4_mhz * MHZ)
    beta = beta_for_even_parity(config, ints, target_even=args.target_even)
    grid = np.linspace(0.0, 4.0 * math.pi, args.points)
    even, odd = parity_curve(config, ints, grid, beta)
    meta = _meta("parity", args) + [f"beta fixed by even-parity maximum {_fmt(args.target_even)}"]
    rows = [[t, e, o] for t, e, o in zip(grid, even, odd)]
    _emit(out, meta, ["theta_p_rad", "even", "odd"], rows)
    return 0


def _state_label(s: tuple[int, ...]) -> str:
    return "".join("+" if x > 0 else "-" for x in s)


def cmd_boltzmann(args, out) -> int:
    model = EffectiveEnergyModel(
        eta=args.eta,
        nu=tuple(float(x) for x in args.nu.split(",")),
    )
    probs = boltzmann_probabilities(model, theta_d4=args.theta_d4)
    rows = [[_state_label(s), p] for s, p in probs.items()]
    _emit(out, _meta("boltzmann", args), ["state", "probability"], rows)
    return 0


def cmd_fit(args, out) -> int:
    thetas, table = [], []
    with open(args.data) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("theta"):
                continue
            parts = line.split(",")
            if len(parts) != 17:
                raise ValueError(f"data row has {len(parts)} fields, expected 17")
            thetas.append(float(parts[0]))
            table.append([float(x) for x in parts[1:]])
    if not thetas:
        raise ValueError("data file contains no rows")
    result = fit_energy_model(np.array(thetas), np.array(table))
    m = result.model
    rows = [["eta", m.eta]]
    rows += [[f"lambda{k}", v] for k, v in m.lam.items()]
    rows += [[f"mu{k}", v] for k, v in m.mu.items()]
    rows += [[f"nu{j + 1}", m.nu[j]] for j in range(4)]
    rows += [["A", result.reference["A"]], ["B", result.reference["B"]],
             ["C", result.reference["C"]]]
    meta = _meta("fit", args) + [
        f"residual: {_fmt(result.residual_norm)}",
        f"condition number: {_fmt(result.condition_number)}",
    ]
    _emit(out, meta, ["coefficient", "value"], rows)
    return 0


def cmd_oracle(args, out) -> int:
    eps = args.eps_mhz * MHZ
    omega1 = 10.0 * GHZ
    omega = np.array([omega1, omega1 - 3 * eps, omega1 - eps, omega1 - 2 * eps])
    kerr = np.array([5.1, 20.0, 20.0, 5.1]) * MHZ
    h_q = 5.0 * MHZ
    h = np.full((4, 4), h_q)
    np.fill_diagonal(h, 0.0)
    spectrum = ModeSpectrum(omega=omega, kerr=kerr)
    from .perturbation import CouplingGraph

    couplings = CouplingGraph(h=h)
    result = four_body_from_gap(
        spectrum, couplings, d=args.truncation, scan_halfwidth=args.scan_mhz * MHZ
    )
    prediction = abs(h4_general(kerr, mixing_from_frequencies(h, omega)))
    meta = _meta("oracle", args) + [
        f"|h_eff|_MHz: {_fmt(result['h_eff'] / MHZ)}",
        f"perturbative_MHz: {_fmt(prediction / MHZ)}",
    ]
    rows = [[o / MHZ, gp / MHZ] for o, gp in zip(result["offsets"], result["gaps"])]
    _emit(out, meta, ["scan_offset_MHz", "gap_MHz"], rows)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kpokit", description="KPO circuit design and verification toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quantize", help="mode frequencies and Kerr from a netlist")
    p.add_argument("netlist")
    p.add_argument("--effective", action="store_true",
                   help="use inverse-matrix effective capacitances")
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("couplings", help="two-body couplings of a unit circuit")
    p.add_argument("netlist")
    p.add_argument("--kpo-nodes", required=True)
    p.add_argument("--coupler-nodes", required=True)
    p.add_argument("--freq-ghz", required=True)
    p.add_argument("--coupler-freq-ghz", default=None)
    p.set_defaults(func=cmd_couplings)

    p = sub.add_parser("sweep", help="four-body couplings vs unit detuning")
    p.add_argument("--start-mhz", type=float, default=20.0)
    p.add_argument("--stop-mhz", type=float, default=500.0)
    p.add_argument("--points", type=int, default=49)
    p.add_argument("--log", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("snail", help="SNAIL flux sweep and Kerr-frequency fit")
    p.add_argument("--c-ff", type=float, default=200.0)
    p.add_argument("--l-ph", type=float, default=100.0)
    p.add_argument("--i0-na", type=float, default=1250.0)
    p.add_argument("--gamma", type=float, default=0.3)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--flux-start", type=float, default=0.45)
    p.add_argument("--flux-stop", type=float, default=0.49)
    p.add_argument("--points", type=int, default=9)
    p.set_defaults(func=cmd_snail)

    p = sub.add_parser("pump-plan", help="nine-frequency lattice pump plan")
    p.add_argument("--rows", type=int, default=3)
    p.add_argument("--base-ghz", type=float, default=9.0)
    p.add_argument("--spacing-mhz", type=float, default=20.0)
    p.set_defaults(func=cmd_pump_plan)

    p = sub.add_parser("parity", help="even/odd parity totals vs pump phase")
    p.add_argument("--h4-mhz", type=float, default=0.1)
    p.add_argument("--alpha", default="5.9,4.5,1.3,5.3")
    p.add_argument("--target-even", type=float, default=0.641)
    p.add_argument("--points", type=int, default=81)
    p.set_defaults(func=cmd_parity)

    p = sub.add_parser("boltzmann", help="16-state Boltzmann probabilities")
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--nu", default="0,0,0,0")
    p.add_argument("--theta-d4", type=float, default=math.pi / 2.0, dest="theta_d4")
    p.set_defaults(func=cmd_boltzmann)

    p = sub.add_parser("fit", help="fit energy coefficients from probability data")
    p.add_argument("data")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("oracle", help="exact-diagonalization four-body extraction")
    p.add_argument("--eps-mhz", type=float, default=100.0)
    p.add_argument("--truncation", type=int, default=4)
    p.add_argument("--scan-mhz", type=float, default=2.0)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"{ERROR_PREFIX}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
