"""Idempotent-representation subspace clustering.

Learns reconstruction coefficient matrices pushed toward normalized
membership matrices (symmetric, non-negative, row-stochastic, idempotent,
trace k) with an augmented-Lagrangian solver, then partitions the induced
affinity graphs spectrally.  Ships a least-squares baseline, a seeded
synthetic data protocol, accuracy metrics and a benchmark CLI.
"""

from .errors import (
    DimensionMismatch,
    IdrError,
    InvalidConfig,
    InvalidFraction,
    InvalidK,
    InvalidSpec,
    LengthMismatch,
    NonFiniteInput,
    NonPositiveAlpha,
    NotNormalized,
    ValidationError,
)
from .io import dump_labels, dump_matrix, load_labels, load_matrix
from .linalg import l21_prox, solve_spd, symmetrize_nonneg, trace_projection
from .lsr import lsr_solve
from .metrics import segmentation_accuracy, segmentation_error
from .solver import (
    ResidualHistory,
    SolverConfig,
    SolverOutput,
    SolverState,
    idempotent_residual,
    solve_idr,
)
from .spectral import (
    ClusterSelection,
    build_affinity,
    cluster_from_solver,
    normalized_cut_value,
    spectral_partition,
)
from .sweep import DEFAULT_GRID, ExperimentConfig, ResultRecord, emit_traces, run_sweep
from .synth import SynthSpec, corrupt, generate

__version__ = "0.1.0"

__all__ = [
    "ClusterSelection",
    "DEFAULT_GRID",
    "DimensionMismatch",
    "ExperimentConfig",
    "IdrError",
    "InvalidConfig",
    "InvalidFraction",
    "InvalidK",
    "InvalidSpec",
    "LengthMismatch",
    "NonFiniteInput",
    "NonPositiveAlpha",
    "NotNormalized",
    "ResidualHistory",
    "ResultRecord",
    "SolverConfig",
    "SolverOutput",
    "SolverState",
    "SynthSpec",
    "ValidationError",
    "build_affinity",
    "cluster_from_solver",
    "corrupt",
    "dump_labels",
    "dump_matrix",
    "emit_traces",
    "generate",
    "idempotent_residual",
    "l21_prox",
    "load_labels",
    "load_matrix",
    "lsr_solve",
    "normalized_cut_value",
    "run_sweep",
    "segmentation_accuracy",
    "segmentation_error",
    "solve_idr",
    "solve_spd",
    "spectral_partition",
    "symmetrize_nonneg",
    "trace_projection",
]
