"""
Deterministic Gaussian-state simulator of two-mode quantum light in
Raman-coupled Λ-type atomic media: dark-state preservation, dissipative
two-mode-squeezing generation, and gradient-echo propagation.
"""

from .errors import (
    InvalidInputError,
    NumericalDegeneracyError,
    PhysicalityError,
    SingularInputError,
    UnphysicalParameterError,
    UnsupportedRegimeError,
)
from .gaussian import (
    ComplexTransmission,
    GaussianState,
    SymplecticTransform,
    apply_symplectic,
    beamsplitter_symplectic,
    bogoliubov_symplectic,
    complex_transmission_channel,
    displace,
    log_negativity,
    mean_photon_number,
    purity,
    quad_combo_variance,
    random_symplectic,
    reduced_state,
    relabel,
    rotation_symplectic,
    squeeze_symplectic,
    symplectic_eigenvalues,
    symplectic_form,
    thermal_state,
    tmsv_state,
    two_mode_squeeze_symplectic,
    vacuum_state,
)
from .medium import (
    AdiabaticityReport,
    DetuningProfile,
    EffectiveParams,
    PropagationGrid,
    RawAtomParams,
    derive_effective,
    propagate,
    swap_sample,
    transfer_function,
    validate_adiabatic,
    worker_count,
)
from .oracle import (
    VariancePair,
    bright_variance,
    epsilon_from_squeezing,
    gem_phase,
    od_variances,
    post_sample_variances,
    post_sample_variances_hyperbolic,
    squeezing_parameter,
    thermal_dark_mean,
)
from .scenarios import (
    SCENARIO_DESCRIPTIONS,
    SCENARIO_NAMES,
    ScenarioConfig,
    ScenarioReport,
    default_config,
    run_scenario,
)

__version__ = "0.1.0"
