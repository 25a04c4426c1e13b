from .constants import DEFAULT_CONSTANTS, ConstantsOverride, PhysicalConstants
from .errors import (
    ChannelSolveError,
    ConfigError,
    DataError,
    DomainError,
    EnergyScanError,
    HologramError,
    IllConditionedRadiiError,
    IntegrationError,
    NoInteriorMinimumError,
    NonFiniteStateError,
    PotentialError,
    PotentialRangeError,
    StepSizeUnderflowError,
)
from .numerics import (
    CallableHamiltonian,
    ConstantHamiltonian,
    HamiltonianEvaluator,
    Trajectory,
    integrate_schrodinger,
    legendre_p,
    legendre_p_prime,
    spherical_bessel_j,
    spherical_bessel_table,
    spherical_neumann_n,
)
from .pt_core import (
    EffectiveParams,
    PTPhase,
    classify_pt,
    effective_hamiltonian,
    eigenmomenta,
    right_eigenvectors,
)
from .potential import (
    Free,
    OpticalModel,
    SquareWell,
    Tabulated,
    WoodsSaxonTerm,
    evaluate_potential,
    load_potential,
    spin_orbit_expectation,
    total_potential,
)
from .scattering import (
    AngularDistribution,
    PhaseShiftTable,
    RadialSolution,
    ScatteringChannel,
    SolverSettings,
    compare_to_data,
    extract_phase_shift,
    hologram_hamiltonian,
    make_channel,
    partial_wave_cross_sections,
    phase_shift_table,
    scattering_amplitudes,
    solve_radial,
    total_cross_sections,
)
from .bound_state import (
    ConstantProfile,
    EnergyScan,
    MassProfile,
    TanhProfile,
    evolve_trial,
    find_bound_state,
    majorana_hamiltonian,
    region_phases,
    scan_energies,
    turning_points,
)
from .dirac import (
    DiracParams,
    dirac_hamiltonian,
    dirac_hologram_hamiltonian,
    hologram_eigenmomenta,
    identity_sweep,
    mirror_decomposition_check,
    parity_check,
    pt_identity_check,
    symmetry_operators,
)


__all__ = [
    "DEFAULT_CONSTANTS",
    "ConstantsOverride",
    "PhysicalConstants",
    "HologramError",
    "DomainError",
    "IntegrationError",
    "StepSizeUnderflowError",
    "NonFiniteStateError",
    "PotentialError",
    "PotentialRangeError",
    "IllConditionedRadiiError",
    "ChannelSolveError",
    "EnergyScanError",
    "NoInteriorMinimumError",
    "DataError",
    "ConfigError",
    "HamiltonianEvaluator",
    "ConstantHamiltonian",
    "CallableHamiltonian",
    "Trajectory",
    "integrate_schrodinger",
    "spherical_bessel_j",
    "spherical_neumann_n",
    "spherical_bessel_table",
    "legendre_p",
    "legendre_p_prime",
    "EffectiveParams",
    "PTPhase",
    "effective_hamiltonian",
    "eigenmomenta",
    "classify_pt",
    "right_eigenvectors",
    "WoodsSaxonTerm",
    "OpticalModel",
    "SquareWell",
    "Tabulated",
    "Free",
    "spin_orbit_expectation",
    "evaluate_potential",
    "total_potential",
    "load_potential",
    "ScatteringChannel",
    "make_channel",
    "hologram_hamiltonian",
    "RadialSolution",
    "solve_radial",
    "extract_phase_shift",
    "SolverSettings",
    "PhaseShiftTable",
    "phase_shift_table",
    "AngularDistribution",
    "scattering_amplitudes",
    "total_cross_sections",
    "partial_wave_cross_sections",
    "compare_to_data",
    "MassProfile",
    "TanhProfile",
    "ConstantProfile",
    "majorana_hamiltonian",
    "evolve_trial",
    "EnergyScan",
    "scan_energies",
    "find_bound_state",
    "turning_points",
    "region_phases",
    "DiracParams",
    "symmetry_operators",
    "dirac_hamiltonian",
    "parity_check",
    "mirror_decomposition_check",
    "dirac_hologram_hamiltonian",
    "pt_identity_check",
    "hologram_eigenmomenta",
    "identity_sweep",
]
