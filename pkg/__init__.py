"""
Teleportation-based squeezing gates

Closed-form noise models, a symbolic circuit oracle, phase-space and Fock
descriptions of squeezed vacuum and single-photon states, and parameter
optimizers for four gate variants:

- PS: balanced teleporter with detector gains set to the target squeeze
- BS: unbalanced beam splitters, no phase shift
- BSPS: unbalanced beam splitters plus a phase shift, two free parameters
- BAS: squeezing on the input before a balanced teleporter

Sweeps, oracle checks and photo-statistics run from cli.py; streamlit_app.py
is an interactive explorer.
"""

from .gaussian_core import (
    GaussianGate,
    GaussianDecomposition,
    GateDomainError,
    beam_splitter,
    rotation,
    squeeze,
    shear,
    displacement,
    decompose_squeeze_shear,
    decompose_shear,
)
from .noise_model import (
    Variant,
    SqueezerConfig,
    NoiseModel,
    DegenerateCircuitError,
    SingularGainError,
    InfeasibleParametersError,
    noise_matrix,
    total_noise,
    noise_product,
    entanglement_breaking,
    ps_config,
    bs_config,
    bsps_config,
    bas_config,
)
from .circuit_oracle import LinearForm, CircuitTrace, build_and_propagate, oracle_noise_matrix
from .phase_space import PhotonState, TransformedState, QuadratureAccuracyError, wigner, characteristic, fidelity
from .fock import FockDensityMatrix, FockTruncationError, TruncationWarning, reconstruct_rho, photostatistics
from .optimize import OptResult, optimize_fidelity, optimize_total_noise, find_breaking_threshold
from .sweep import SweepSpec, ConfigError, run_sweep
from . import config

__all__ = [
    "GaussianGate",
    "GaussianDecomposition",
    "GateDomainError",
    "beam_splitter",
    "rotation",
    "squeeze",
    "shear",
    "displacement",
    "decompose_squeeze_shear",
    "decompose_shear",
    "Variant",
    "SqueezerConfig",
    "NoiseModel",
    "DegenerateCircuitError",
    "SingularGainError",
    "InfeasibleParametersError",
    "noise_matrix",
    "total_noise",
    "noise_product",
    "entanglement_breaking",
    "ps_config",
    "bs_config",
    "bsps_config",
    "bas_config",
    "LinearForm",
    "CircuitTrace",
    "build_and_propagate",
    "oracle_noise_matrix",
    "PhotonState",
    "TransformedState",
    "QuadratureAccuracyError",
    "wigner",
    "characteristic",
    "fidelity",
    "FockDensityMatrix",
    "FockTruncationError",
    "TruncationWarning",
    "reconstruct_rho",
    "photostatistics",
    "OptResult",
    "optimize_fidelity",
    "optimize_total_noise",
    "find_breaking_threshold",
    "SweepSpec",
    "ConfigError",
    "run_sweep",
    "config",
]
__version__ = "0.1.0"
