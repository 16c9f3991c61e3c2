"""Finite-dimensional quantum channels, unitality and entropy dynamics."""

__version__ = "0.1.0"

from .linalg import (  # noqa: E402
    DEFAULT_TOL,
    DensityMatrix,
    UnitaryOperator,
    dagger,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    validate_density,
)
from .channels import (  # noqa: E402
    FOperatorFamily,
    QuantumChannel,
    UnitalityReport,
    apply,
    choi_matrix,
    extract_f_operators,
    is_trace_preserving,
    kraus_channel,
    measurement_feedback_channel,
    stinespring_channel,
    unitality_defect_commutator,
    unitality_defect_direct,
)
from .entropy import entropy_change, von_neumann_entropy  # noqa: E402
from .scenarios import (  # noqa: E402
    ExpansionResult,
    ExperimentReport,
    ScenarioParams,
    cool_heat,
    correlated_entropy_experiment,
    expansion_coefficients,
    quantum_demon,
    semiclassical_demon,
)
