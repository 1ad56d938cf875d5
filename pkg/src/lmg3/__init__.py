"""Exact ground-state geometry of the three-qubit Lipkin-Meshkov-Glick model.

Spectrum and mixing angle, one- and two-qubit marginals, Berry phases under
rotation about the field axis, and fidelity susceptibilities, each paired
with an independent brute-force oracle.
"""

from .errors import (
    CrossingError,
    DegenerateMarginalError,
    DiscretizationError,
    DomainError,
    InvalidStateError,
    LMGError,
    MonopoleError,
    NearDegeneracyError,
    OracleInconsistencyError,
    OutputError,
    UndefinedQuantityError,
    UsageError,
)
from .fidelity import (
    DrivingSplit,
    SusceptibilityResult,
    bures_fidelity,
    driving_split,
    fd_oracle,
    fidelity_susceptibility_closed,
    fidelity_susceptibility_sum,
    partial_fs_one_qubit,
    partial_fs_two_qubit,
    theta_derivative,
)
from .geometry import (
    BETA_2,
    EffectiveField,
    MixedPhaseResult,
    PhaseResult,
    berry_phase_discrete_oracle,
    berry_phase_pure,
    effective_two_level,
    eigenstate_berry_phase,
    mixed_berry_phase_two_qubit,
    monopole_field,
)
from .model import (
    Branch,
    GroundState,
    ModelParams,
    Spectrum,
    StateKind,
    build_hamiltonian,
    classify_ground_state,
    crossing_field,
    energy_functions,
    ground_state,
    mixing_angle,
    spectrum,
)
from .oracle import EigenDecomposition, fd_susceptibility, hermitian_eigensystem, psd_sqrt
from .reduced import DensityOperator, one_qubit_reduced, partial_trace, two_qubit_reduced
from .sweep import SweepSpec, SweepTable, emit_table, run_sweep
from .verify import VerifyConfig, verify_point

__version__ = "0.1.0"
