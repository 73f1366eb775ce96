"""Teleportation channel analysis via coefficient-matrix ranks.

Reshape a shared entangled state into its channel matrix, each
measurement-basis element into a measurement matrix, multiply into the
collapsed matrices, and read teleportation capability off their ranks and
scaled-unitarity; every algebraic verdict can be cross-checked against a
brute-force state-vector simulation.
"""

from .errors import (
    BasisValidationError,
    DegenerateStateError,
    DimensionMismatchError,
    InvalidPartitionError,
    StateFormatError,
    TelematError,
    UsageError,
)
from .qstate import (
    PureState,
    QuditDims,
    basis_index,
    basis_state,
    index_to_digits,
    inner_product,
    normalize,
    permute_particles,
    tensor_product,
)
from .coeffmat import (
    BasisValidation,
    Bipartition,
    ChannelMatrix,
    CollapsedMatrix,
    MeasurementBasis,
    MeasurementMatrix,
    ScaledUnitaryCheck,
    build_channel_matrix,
    build_measurement_matrix,
    collapsed_matrix,
    is_scaled_unitary,
    numerical_rank,
    validate_basis,
)
from .criterion import (
    Category,
    RankCase,
    SubspaceReport,
    TeleportVerdict,
    classify,
    rank_case,
    teleportable_subspace,
)
from .telesim import (
    BranchCheck,
    OutcomeRecord,
    SimulationReport,
    compose_system,
    correction_operator,
    haar_random_state,
    project_outcome,
    run_teleportation,
    verify_branch_decomposition,
)
from .io_cli import (
    AnalysisReport,
    build_analysis_report,
    main,
    parse_basis_file,
    parse_state_file,
    serialize_basis,
    serialize_state,
    write_basis_file,
    write_state_file,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "BasisValidation",
    "BasisValidationError",
    "Bipartition",
    "BranchCheck",
    "Category",
    "ChannelMatrix",
    "CollapsedMatrix",
    "DegenerateStateError",
    "DimensionMismatchError",
    "InvalidPartitionError",
    "MeasurementBasis",
    "MeasurementMatrix",
    "OutcomeRecord",
    "PureState",
    "QuditDims",
    "RankCase",
    "ScaledUnitaryCheck",
    "SimulationReport",
    "StateFormatError",
    "SubspaceReport",
    "TelematError",
    "TeleportVerdict",
    "UsageError",
    "basis_index",
    "basis_state",
    "build_analysis_report",
    "build_channel_matrix",
    "build_measurement_matrix",
    "classify",
    "collapsed_matrix",
    "compose_system",
    "correction_operator",
    "haar_random_state",
    "index_to_digits",
    "inner_product",
    "is_scaled_unitary",
    "main",
    "normalize",
    "numerical_rank",
    "parse_basis_file",
    "parse_state_file",
    "permute_particles",
    "project_outcome",
    "rank_case",
    "run_teleportation",
    "serialize_basis",
    "serialize_state",
    "teleportable_subspace",
    "tensor_product",
    "validate_basis",
    "verify_branch_decomposition",
    "write_basis_file",
    "write_state_file",
]
