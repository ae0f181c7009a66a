"""Constructive extraction of two-party entanglement from multiparticle pure states.

Given any entangled pure state of N parties, this package finds local
projections on N-2 of them that leave a chosen pair entangled, and certifies
the result by the pair's maximal CHSH violation. Along the way it exposes the
supporting machinery: dense pure-state algebra, Schmidt decompositions,
qudit-to-qubit reduction, Hadamard basis fixing, and dependency-table
analysis of computational projection residuals.
"""

__version__ = "0.1.0"

from .basisfix import BasisFix, fix_nonvanishing
from .chsh import ChshCertificate, correlation_matrix, evaluate_chsh, max_chsh
from .dependency import (
    DependencyTable,
    EntangledAt,
    TableEntry,
    build_table,
    dependent_indices,
    depends_on,
    partition_check,
)
from .entanglement import (
    SeparabilityReport,
    concurrence,
    is_product_across,
    schmidt_rank,
    separability_report,
)
from .errors import (
    DimensionMismatchError,
    EntpairError,
    FullyProductError,
    NonUnitVectorError,
    NonUnitaryError,
    NoSubsetFoundError,
    PartyNotInTraceError,
    SearchExhaustedError,
    ZeroOutcomeError,
    ZeroVectorError,
)
from .reduction import (
    Kept1D,
    ReductionTrace,
    Truncated2D,
    embed_projection,
    lift_assignments,
    reduce_to_qubits,
)
from .search import (
    PairFailure,
    ProjectionCertificate,
    StrategyLadder,
    certify_all_pairs,
    find_entangling_projection,
    refine,
    verify_certificate,
)
from .statevec import (
    HADAMARD,
    Bipartition,
    LocalVector,
    PureState,
    SchmidtDecomposition,
    apply_local_unitary,
    computational_ket,
    haar_random_state,
    haar_random_unitary,
    linearly_independent,
    project,
    qubit_ket,
    schmidt,
    states_allclose,
)
from .stateio import fixture_path, load_state, save_state

__all__ = [
    "BasisFix",
    "Bipartition",
    "ChshCertificate",
    "DependencyTable",
    "DimensionMismatchError",
    "EntangledAt",
    "EntpairError",
    "FullyProductError",
    "HADAMARD",
    "Kept1D",
    "LocalVector",
    "NoSubsetFoundError",
    "NonUnitVectorError",
    "NonUnitaryError",
    "PairFailure",
    "PartyNotInTraceError",
    "ProjectionCertificate",
    "PureState",
    "ReductionTrace",
    "SchmidtDecomposition",
    "SearchExhaustedError",
    "SeparabilityReport",
    "StrategyLadder",
    "TableEntry",
    "Truncated2D",
    "ZeroOutcomeError",
    "ZeroVectorError",
    "apply_local_unitary",
    "build_table",
    "certify_all_pairs",
    "computational_ket",
    "concurrence",
    "correlation_matrix",
    "dependent_indices",
    "depends_on",
    "embed_projection",
    "evaluate_chsh",
    "find_entangling_projection",
    "fix_nonvanishing",
    "fixture_path",
    "haar_random_state",
    "haar_random_unitary",
    "is_product_across",
    "lift_assignments",
    "linearly_independent",
    "load_state",
    "max_chsh",
    "partition_check",
    "project",
    "qubit_ket",
    "reduce_to_qubits",
    "refine",
    "save_state",
    "schmidt",
    "schmidt_rank",
    "separability_report",
    "states_allclose",
    "verify_certificate",
]
