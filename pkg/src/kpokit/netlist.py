"""Lumped-element circuit descriptions and capacitance-network reduction.

Builds the Maxwell capacitance matrix of a netlist, inverts it, reduces
the two coupler nodes of the unit circuit to a single coupler mode, and
emits the two-body coupling constants (exact from the inverse matrix and
approximate from the weak-coupling closed forms).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .constants import FEMTO, NANO, PICO
from .elements import JunctionElement, SeriesStack, SingleJunction, Snail, Squid
from .perturbation import CouplingGraph, ModeSpectrum


@dataclass(frozen=True)
class Capacitor:
    node_a: str
    node_b: str          # may be the ground node
    capacitance: float   # farads

    def __post_init__(self):
        if self.capacitance <= 0:
            raise ValueError(f"capacitance {self.node_a}-{self.node_b} must be positive")
        if self.node_a == self.node_b:
            raise ValueError(f"capacitor shorted on node {self.node_a}")


@dataclass(frozen=True)
class Branch:
    """Inductive branch: a junction element plus linear series inductance."""

    nodes: tuple[str, ...]        # (node,) to ground or (node_a, node_b)
    element: JunctionElement | None
    l_series: float = 0.0         # henries

    def __post_init__(self):
        if len(self.nodes) not in (1, 2):
            raise ValueError("branch connects one node (to ground) or two nodes")
        if self.l_series < 0:
            raise ValueError("series inductance must be non-negative")


@dataclass(frozen=True)
class CircuitNetlist:
    nodes: tuple[str, ...]
    ground: str
    capacitors: tuple[Capacitor, ...]
    branches: tuple[Branch, ...] = ()

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            dupes = sorted({n for n in self.nodes if self.nodes.count(n) > 1})
            raise ValueError(f"duplicate node identifiers: {dupes}")
        known = set(self.nodes) | {self.ground}
        for cap in self.capacitors:
            for n in (cap.node_a, cap.node_b):
                if n not in known:
                    raise ValueError(f"capacitor references unknown node {n!r}")
        for br in self.branches:
            for n in br.nodes:
                if n not in known:
                    raise ValueError(f"branch references unknown node {n!r}")


@dataclass(frozen=True)
class CapacitanceMatrix:
    """Maxwell capacitance matrix over the non-ground nodes [farads]."""

    matrix: np.ndarray
    node_order: tuple[str, ...]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        if not np.allclose(m, m.T):
            raise ValueError("capacitance matrix must be symmetric")


@dataclass(frozen=True)
class InverseCapacitance:
    """G = C^-1 [1/farads], with named accessors for the unit-circuit layout.

    The accessors follow the convention that nodes 1-4 are the KPO nodes
    and nodes 5-6 the coupler nodes, in node_order positions 0..5.
    """

    matrix: np.ndarray
    node_order: tuple[str, ...]

    def _elem(self, j: int, k: int) -> float:
        if self.matrix.shape[0] < max(j, k) + 1:
            raise ValueError("accessor needs the six-node unit-circuit layout")
        return float(self.matrix[j, k])

    @property
    def g11(self) -> float:
        return self._elem(0, 0)

    @property
    def g12(self) -> float:
        return self._elem(0, 1)

    @property
    def g13(self) -> float:
        return self._elem(0, 2)

    @property
    def g15(self) -> float:
        return self._elem(0, 4)

    @property
    def g16(self) -> float:
        return self._elem(0, 5)

    @property
    def g55(self) -> float:
        return self._elem(4, 4)

    @property
    def g56(self) -> float:
        return self._elem(4, 5)


@dataclass(frozen=True)
class DiscardedMode:
    """Record of the symmetric coupler combination dropped by the reduction."""

    capacitance: float     # farads, C+ = 1/(G55+G56)
    high_frequency: bool   # True when C+ << effective coupler capacitance


@dataclass(frozen=True)
class ReducedModes:
    c_q_eff: np.ndarray           # per-KPO effective capacitance [F]
    c_g_eff: float                # coupler effective capacitance C-/2 [F]
    g12: float                    # kernel for KPO pairs sharing a coupler node
    g13: float                    # kernel for cross pairs
    g_minus: float                # (G15-G16)/sqrt(2), KPO-coupler kernel
    discarded: DiscardedMode
    bare: dict = field(default_factory=dict)  # optional C_c, C_q, C_g from the netlist


# --------------------------------------------------------------------------
# matrix assembly and inversion
# --------------------------------------------------------------------------

def build_capacitance_matrix(netlist: CircuitNetlist) -> CapacitanceMatrix:
    """Maxwell form: diagonal = sum of attached capacitances, off-diagonal
    = minus the direct capacitance between the node pair."""
    order = netlist.nodes
    index = {n: i for i, n in enumerate(order)}
    n = len(order)
    m = np.zeros((n, n))
    for cap in netlist.capacitors:
        a, b = cap.node_a, cap.node_b
        if a in index:
            m[index[a], index[a]] += cap.capacitance
        if b in index:
            m[index[b], index[b]] += cap.capacitance
        if a in index and b in index:
            m[index[a], index[b]] -= cap.capacitance
            m[index[b], index[a]] -= cap.capacitance
    return CapacitanceMatrix(matrix=m, node_order=order)


def _ungrounded_nodes(netlist: CircuitNetlist) -> list[str]:
    """Nodes with no capacitor path to ground (they make C singular)."""
    adjacency: dict[str, set[str]] = {n: set() for n in netlist.nodes}
    adjacency[netlist.ground] = set()
    for cap in netlist.capacitors:
        adjacency[cap.node_a].add(cap.node_b)
        adjacency[cap.node_b].add(cap.node_a)
    reached = {netlist.ground}
    frontier = [netlist.ground]
    while frontier:
        node = frontier.pop()
        for nb in adjacency[node]:
            if nb not in reached:
                reached.add(nb)
                frontier.append(nb)
    return [n for n in netlist.nodes if n not in reached]


def invert_capacitance(
    c: CapacitanceMatrix, netlist: CircuitNetlist | None = None
) -> InverseCapacitance:
    """G = C^-1 via dense factorization, validated to G C = I at 1e-10.

    When the matrix is singular or indefinite and the netlist is supplied,
    the error names the node(s) lacking a ground path.
    """
    m = c.matrix
    try:
        lower = np.linalg.cholesky(m)
        eye = np.eye(m.shape[0])
        g = np.linalg.solve(lower.T, np.linalg.solve(lower, eye))
    except np.linalg.LinAlgError:
        detail = ""
        if netlist is not None:
            floating = _ungrounded_nodes(netlist)
            if floating:
                detail = f": node(s) {floating} have no capacitor path to ground"
        raise ValueError(f"capacitance matrix is not positive definite{detail}")
    g = 0.5 * (g + g.T)
    residual = np.max(np.abs(g @ m - np.eye(m.shape[0])))
    if residual > 1e-10:
        raise ValueError(f"inversion residual {residual:.2e} exceeds 1e-10")
    return InverseCapacitance(matrix=g, node_order=c.node_order)


# --------------------------------------------------------------------------
# mode reduction
# --------------------------------------------------------------------------

def mode_reduce(
    g: InverseCapacitance,
    kpo_nodes: tuple[str, ...],
    coupler_node_pair: tuple[str, str],
    bare: dict | None = None,
) -> ReducedModes:
    """Reduce the two coupler nodes to the antisymmetric charge combination.

    The antisymmetric mode (Q5 - Q6)/sqrt(2) becomes the coupler with
    effective capacitance C-/2; the symmetric combination is recorded as
    discarded, flagged high-frequency when its capacitance C+ is small.
    """
    index = {n: i for i, n in enumerate(g.node_order)}
    for n in tuple(kpo_nodes) + tuple(coupler_node_pair):
        if n not in index:
            raise ValueError(f"node {n!r} not in the inverse-matrix ordering")
    if len(kpo_nodes) != 4 or len(coupler_node_pair) != 2:
        raise ValueError("expected four KPO nodes and two coupler nodes")
    kq = [index[n] for n in kpo_nodes]
    c1, c2 = (index[n] for n in coupler_node_pair)
    m = g.matrix

    c_q_eff = np.array([1.0 / m[j, j] for j in kq])
    g55, g56 = m[c1, c1], m[c1, c2]
    if g55 - g56 <= 0 or g55 + g56 <= 0:
        raise ValueError("coupler-node block is not reducible (non-positive modes)")
    c_minus = 1.0 / (g55 - g56)
    c_plus = 1.0 / (g55 + g56)
    c_g_eff = c_minus / 2.0
    g_minus = (m[kq[0], c1] - m[kq[0], c2]) / np.sqrt(2.0)
    return ReducedModes(
        c_q_eff=c_q_eff,
        c_g_eff=c_g_eff,
        g12=m[kq[0], kq[1]],
        g13=m[kq[0], kq[2]],
        g_minus=g_minus,
        discarded=DiscardedMode(
            capacitance=c_plus, high_frequency=c_plus < 0.5 * c_g_eff
        ),
        bare=dict(bare) if bare else {},
    )


def extract_bare(netlist: CircuitNetlist, kpo_nodes, coupler_node_pair) -> dict:
    """Read the design capacitances C_q (per KPO), C_g, C_c off the netlist.

    C_q are the KPO node-to-ground capacitors, C_g spans the two coupler
    nodes, and C_c is the KPO-coupler link (assumed equal for all links,
    validated).
    """
    to_ground = {}
    links = []
    c_g = None
    coupler = set(coupler_node_pair)
    for cap in netlist.capacitors:
        a, b = cap.node_a, cap.node_b
        if netlist.ground in (a, b):
            node = b if a == netlist.ground else a
            to_ground[node] = to_ground.get(node, 0.0) + cap.capacitance
        elif a in coupler and b in coupler:
            c_g = cap.capacitance
        elif (a in coupler) != (b in coupler):
            links.append(cap.capacitance)
    if not links:
        raise ValueError("no KPO-coupler coupling capacitors found")
    if c_g is None:
        raise ValueError("no capacitor between the two coupler nodes")
    c_c = links[0]
    if any(abs(l - c_c) > 1e-12 * c_c for l in links):
        raise ValueError("unequal coupling capacitors; bare extraction assumes one C_c")
    try:
        c_q = np.array([to_ground[n] for n in kpo_nodes])
    except KeyError as exc:
        raise ValueError(f"node {exc.args[0]!r} has no capacitor to ground")
    return {"c_c": c_c, "c_q": c_q, "c_g": c_g}


# --------------------------------------------------------------------------
# two-body coupling constants
# --------------------------------------------------------------------------

def coupling_constants(
    modes: ReducedModes, spectrum: ModeSpectrum
) -> dict[str, CouplingGraph]:
    """Exact and approximate two-body couplings of the unit circuit.

    Exact: h_jk = (G_jk/2) sqrt(Cq_j Cq_k w_j w_k) with G12 for pairs
    sharing a coupler node ((1,2) and (3,4)) and G13 otherwise;
    g_j = (G-/sqrt(2)) sqrt(Cq_j Cg w_j w_g).
    Approximate: h_jk = C_c/(8 sqrt(Cq_j Cq_k)) sqrt(w_j w_k);
    g_j = C_c/(4 sqrt(Cq_j Cg)) sqrt(w_j w_g), needing bare capacitances.
    """
    if spectrum.n_kpo != 4:
        raise ValueError("unit circuit has four KPOs")
    w = spectrum.omega
    cq = modes.c_q_eff
    h_exact = np.zeros((4, 4))
    for j in range(4):
        for k in range(4):
            if j == k:
                continue
            kernel = modes.g12 if {j, k} in ({0, 1}, {2, 3}) else modes.g13
            h_exact[j, k] = 0.5 * kernel * np.sqrt(cq[j] * cq[k] * w[j] * w[k])
    out = {}
    if spectrum.has_coupler:
        wg = spectrum.coupler_omega
        g_exact = np.array(
            [
                (modes.g_minus / np.sqrt(2.0))
                * np.sqrt(cq[j] * modes.c_g_eff * w[j] * wg)
                for j in range(4)
            ]
        )
        out["exact"] = CouplingGraph(h=h_exact, g=g_exact)
    else:
        out["exact"] = CouplingGraph(h=h_exact)

    if modes.bare:
        c_c = modes.bare["c_c"]
        c_q = np.asarray(modes.bare["c_q"], dtype=float)
        h_approx = np.zeros((4, 4))
        for j in range(4):
            for k in range(4):
                if j != k:
                    h_approx[j, k] = c_c / (8.0 * np.sqrt(c_q[j] * c_q[k])) * np.sqrt(w[j] * w[k])
        if spectrum.has_coupler:
            c_g = modes.bare["c_g"]
            g_approx = np.array(
                [
                    c_c / (4.0 * np.sqrt(c_q[j] * c_g)) * np.sqrt(w[j] * spectrum.coupler_omega)
                    for j in range(4)
                ]
            )
            out["approx"] = CouplingGraph(h=h_approx, g=g_approx)
        else:
            out["approx"] = CouplingGraph(h=h_approx)
    return out


# --------------------------------------------------------------------------
# convenience builders and file I/O
# --------------------------------------------------------------------------

def unit_circuit(c_q: float, c_g: float, c_c: float) -> CircuitNetlist:
    """The six-node unit circuit: four KPOs (C_q to ground) linked pairwise
    to the two coupler nodes (KPOs 1,2 to node 5; KPOs 3,4 to node 6) via
    C_c; the coupler capacitance C_g spans the two coupler nodes."""
    kpo = [f"q{i}" for i in range(1, 5)]
    caps = [Capacitor(n, "gnd", c_q) for n in kpo]
    caps += [Capacitor("c5", "c6", c_g)]
    caps += [Capacitor("q1", "c5", c_c), Capacitor("q2", "c5", c_c)]
    caps += [Capacitor("q3", "c6", c_c), Capacitor("q4", "c6", c_c)]
    return CircuitNetlist(
        nodes=tuple(kpo) + ("c5", "c6"),
        ground="gnd",
        capacitors=tuple(caps),
    )


def _element_from_dict(d: dict) -> JunctionElement:
    kind = d.get("kind")
    if kind == "squid":
        return Squid(l_j=d["l_j_ph"] * PICO)
    if kind == "junction":
        return SingleJunction(i0=d["i0_na"] * NANO)
    if kind == "series":
        return SeriesStack(elements=tuple(_element_from_dict(e) for e in d["elements"]))
    if kind == "snail":
        return Snail(
            i0=d["i0_na"] * NANO,
            gamma=d["gamma"],
            n=d.get("n", 2),
            phi_x=d.get("phi_x_turns", 0.0) * 2.0 * np.pi,
        )
    raise ValueError(f"unknown element kind {kind!r}")


def load_netlist(path: str) -> CircuitNetlist:
    """Parse a netlist file (JSON). Units: capacitances fF, inductances pH,
    currents nA, fluxes in turns."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"netlist parse error at line {exc.lineno}: {exc.msg}")
    for key in ("nodes", "ground", "capacitors"):
        if key not in doc:
            raise ValueError(f"netlist missing required key {key!r}")
    caps = tuple(
        Capacitor(node_a=c["a"], node_b=c["b"], capacitance=c["f_farads"] * FEMTO)
        for c in doc["capacitors"]
    )
    branches = []
    for b in doc.get("branches", []):
        node = b["node"]
        nodes = (node,) if isinstance(node, str) else tuple(node)
        element = _element_from_dict(b["element"]) if b.get("element") else None
        branches.append(
            Branch(nodes=nodes, element=element, l_series=b.get("l_henries", 0.0) * PICO)
        )
    return CircuitNetlist(
        nodes=tuple(doc["nodes"]),
        ground=doc["ground"],
        capacitors=caps,
        branches=tuple(branches),
    )
