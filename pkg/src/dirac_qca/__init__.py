"""dirac_qca: a numerical laboratory for a 1D two-component quantum cellular
automaton, its dispersion analytics, and its distinguishability from the
continuum Dirac evolution."""

from .automaton import (
    AutomatonParams,
    ModeSpectrum,
    SpinorField,
    SymmetryReport,
    evolve_momentum,
    evolve_position,
    inverse_transform,
    step,
    symmetry_check,
    transform,
    unitary_k,
)
from .dispersion import (
    Derivatives,
    DispersionPoint,
    derivatives,
    dirac_hamiltonian_k,
    dirac_omega,
    dispersion_correction,
    dispersion_point,
    eigenpair,
    hamiltonian_k,
    omega,
    regime_coefficients,
)
from .wavepacket import BandwidthReport, WavepacketSpec, bandwidth, build, localized
from .approx import AccuracyBound, ApproxEvolutionParams, accuracy_bound, fidelity, schrodinger_evolve
from .discrimination import (
    DiscriminationInput,
    DiscriminationReport,
    MultiParticleSpec,
    alpha_beta,
    extremal_alpha_beta,
    mu,
    multiparticle_phase,
    pe_lower_bound,
    t_min_approx,
    t_min_exact,
    unitary_pair_t,
    validate_bound_montecarlo,
)
from .flytime import FlytimeInput, FlytimeReport, broadening, separation_time, visibility_report

__version__ = "0.1.0"
