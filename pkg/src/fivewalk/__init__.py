"""Simulator and spectral toolkit for the 2D five-state coined quantum walk."""

from .errors import (
    DecompositionError,
    DegeneracyError,
    DegenerateError,
    FiveWalkError,
    NormError,
    RankError,
    UsageError,
)
from .localization import (
    DecaySeries,
    LocalizationReport,
    decay_probe,
    limiting_distribution,
    localization_decision,
    min_limit_mass_search,
    time_averaged_probability,
)
from .reconstruction import (
    ALL_BANDS,
    FLAT_BAND,
    NONFLAT_BANDS,
    QuadratureGrid,
    component_wavefunction,
    reconstruction_error,
    spectral_wavefunction,
    wavefunction_field,
)
from .spectral import (
    BandFunctions,
    MomentumOperator,
    MomentumPoint,
    SpectralDecomposition,
    band_functions,
    band_surface,
    eigendecompose,
    flat_band_projector,
    flat_band_residual,
    fourier_step_operator,
    gram_schmidt,
    three_state_closed_forms,
    three_state_operator,
    three_state_phase_check,
)
from .walk import (
    Chirality,
    LatticeState,
    ProbabilityGrid,
    evolve,
    evolve_step,
    grover_coin,
    initial_state,
    mass_trajectory,
    probability_grid,
    shift_partition,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_BANDS",
    "BandFunctions",
    "Chirality",
    "DecaySeries",
    "DecompositionError",
    "DegeneracyError",
    "DegenerateError",
    "FLAT_BAND",
    "FiveWalkError",
    "LatticeState",
    "LocalizationReport",
    "MomentumOperator",
    "MomentumPoint",
    "NONFLAT_BANDS",
    "NormError",
    "ProbabilityGrid",
    "QuadratureGrid",
    "RankError",
    "SpectralDecomposition",
    "UsageError",
    "band_functions",
    "band_surface",
    "component_wavefunction",
    "decay_probe",
    "eigendecompose",
    "evolve",
    "evolve_step",
    "flat_band_projector",
    "flat_band_residual",
    "fourier_step_operator",
    "gram_schmidt",
    "grover_coin",
    "initial_state",
    "limiting_distribution",
    "localization_decision",
    "mass_trajectory",
    "min_limit_mass_search",
    "probability_grid",
    "reconstruction_error",
    "shift_partition",
    "spectral_wavefunction",
    "three_state_closed_forms",
    "three_state_operator",
    "three_state_phase_check",
    "time_averaged_probability",
    "wavefunction_field",
]
