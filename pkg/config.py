"""
Configuration defaults and numerical constants for the teleportation squeezer toolkit.
"""

import math

# =============================================================================
# Physical Conventions
# =============================================================================

VACUUM_VARIANCE = 0.5  # Quadrature variance of vacuum ([x, p] = i)
BALANCED_T = 1.0 / math.sqrt(2.0)  # Amplitude transmission of a 50:50 beam splitter

# =============================================================================
# Reference Settings (resources and losses used throughout the comparison sweeps)
# =============================================================================

RESOURCE_LEVELS_DB = (3.0, 6.0, 9.0)  # Resource squeezing levels (dB below vacuum)
DEFAULT_RESOURCE_DB = 9.0  # Default resource squeezing
REALISTIC_ETA_S = 0.8  # Source transmissivity in the realistic case
REALISTIC_ETA_H = 0.9  # Homodyne efficiency in the realistic case
DEFAULT_ETA_S = 1.0  # Lossless source
DEFAULT_ETA_H = 1.0  # Ideal homodyne detection

# =============================================================================
# Tolerances
# =============================================================================

SYMPLECTIC_TOL = 1e-12  # M^T Omega M = Omega check
DECOMPOSITION_TOL = 1e-12  # R(zeta) S R(epsilon) reconstruction, relative to the largest entry
UNIT_GAIN_ULPS = 8  # |g - 1| within this many ulps of 1 is treated as unity gain
ORACLE_TOL = 1e-10  # |Sigma_closed - Sigma_oracle|
CONSTRAINT_TOL = 1e-9  # Constraint inversion must reproduce the target s
PSD_TOL = 1e-12  # Smallest allowed eigenvalue of a noise matrix
WEIGHT_LIMIT_TOL = 1e-6  # Below this 1 - s^4 the rotation weights use the limit
BREAKING_BOUND = 0.25  # N_P at or above this breaks entanglement

# =============================================================================
# Phase-Space Quadrature
# =============================================================================

GH_ORDER = 80  # Gauss-Hermite nodes per axis for fidelity
GH_CHECK_ORDER = 120  # Second order used for the convergence check
QUADRATURE_TOL = 1e-8  # Allowed disagreement between the two orders

# =============================================================================
# Fock Reconstruction
# =============================================================================

FOCK_DIM = 40  # Truncation dimension of the reconstructed density matrix
FOCK_QUAD_ORDER = 60  # Gauss-Hermite nodes per axis for rho_out
FOCK_PADDING = 60  # Extra levels used when building operators before truncating
FOCK_TRACE_TOL = 1e-3  # Largest tolerated trace deficit
FOCK_COLUMN_TOL = 1e-10  # Norm loss that triggers a truncation warning

# =============================================================================
# Optimizer
# =============================================================================

T_SQ_MIN = 0.02  # Lower search bound on t^2
T_SQ_MAX = 0.98  # Upper search bound on t^2
GRID_STEP = 1e-3  # Dense grid step in t1
REFINE_TOL = 1e-6  # Golden-section stopping width in t1
DE_POPULATION = 30  # Population size (individuals) of differential evolution
DE_GENERATIONS = 200  # Maximum generations
DE_TOL = 1e-9  # Relative convergence tolerance
DEFAULT_SEED = 42  # Seed for every stochastic search
INFEASIBLE_PENALTY = 1e6  # Objective assigned to candidates off the constraint

# =============================================================================
# Sweep / Threshold Defaults
# =============================================================================

S_DB_MIN = -10.0  # Lower end of the target axis 10 log10(s^2)
S_DB_MAX = 0.0  # Upper end of the target axis
S_DB_STEP = 0.25  # Axis step in dB
S_DB_FLOOR = -20.0  # Axis values must stay above this
THRESHOLD_RESOLUTION_DB = 0.05  # Bisection resolution for the breaking threshold
THRESHOLD_SCAN_STEP_DB = 0.5  # Coarse scan before bisection
ORACLE_GRID_SIZE = 1000  # Randomized configs in the equivalence check
ORACLE_SEED = 1  # Seed of the equivalence grid

# =============================================================================
# Output
# =============================================================================

FLOAT_DIGITS = 12  # Significant digits for CSV/JSON floats
SWEEP_SCHEMA_VERSION = 1  # Bumped whenever sweep columns change
METRICS = ("fidelity", "w00", "total_noise", "noise_product", "breaking", "covariance")

# =============================================================================
# CLI / Environment
# =============================================================================

THREADS_ENV = "TSQZ_THREADS"  # Worker count for parallel sweeps
EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_TOLERANCE = 3
EXIT_CONFIG = 4
