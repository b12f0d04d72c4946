"""Design and verification toolkit for Kerr-parametric-oscillator circuits."""

__version__ = "0.1.0"

from .elements import (
    LinearFit,
    ModeParams,
    SeriesStack,
    SingleJunction,
    Snail,
    SnailExpansion,
    Squid,
    kpo_mode_params,
    snail_equilibrium_phase,
    snail_expansion,
    snail_flux_sweep,
    snail_kerr_frequency_fit,
    snail_mode_params,
    squid_inductance_for_frequency,
)
from .netlist import (
    Branch,
    Capacitor,
    CapacitanceMatrix,
    CircuitNetlist,
    InverseCapacitance,
    ReducedModes,
    build_capacitance_matrix,
    coupling_constants,
    extract_bare,
    invert_capacitance,
    load_netlist,
    mode_reduce,
    unit_circuit,
)
from .operators import BosonicPolynomial
from .oracle import (
    FockHamiltonian,
    build_hamiltonian,
    dressed_frequencies_exact,
    four_body_from_gap,
)
from .perturbation import (
    CouplingGraph,
    DegenerateModesError,
    DressedSpectrum,
    FourBodyReport,
    MixingCoefficients,
    ModeSpectrum,
    cross_kerr,
    dressed_spectrum,
    g4_closed_form,
    g4_symmetric,
    h4_detuning,
    h4_double_tilde,
    h4_general,
    h4_snail,
    h4_symmetric,
    h4_tilde,
    invert_dressed,
    ladder_deltas,
    mixing_from_frequencies,
    rwa_filter,
    sw_mixing,
    transform_kerr,
)
from .pumpplan import (
    LhzPlan,
    PumpAssignment,
    ResonanceCondition,
    check_mixing,
    detect_residual,
    lhz_frequencies,
    lhz_plan,
)
from .spinmodel import (
    SPIN_STATES,
    EffectiveEnergyModel,
    FitResult,
    InteractionSet,
    OscillationConfig,
    beta_for_even_parity,
    boltzmann_probabilities,
    effective_coefficients,
    estimate_h4,
    fit_energy_model,
    model_from_coefficients,
    parity_curve,
    parity_split,
    state_energy,
)
