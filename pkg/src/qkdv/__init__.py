"""Exact symbolic engine for a quantized dispersionless KdV hierarchy."""

from ._version import ENGINE_VERSION
from .diffpoly import (
    Bidegree,
    DiffMonomial,
    DiffPoly,
    OddPowerError,
    bidegree_of,
    dx,
    from_json,
    from_json_dict,
    is_homogeneous,
    partial_u,
    scale_substitute,
    to_json,
    to_json_dict,
    variational_derivative,
)
from .fock import (
    CommutatorNonzero,
    CommuteReport,
    FockVector,
    MismatchError,
    Partition,
    SectorScalar,
    apply_quantized,
    check_commute,
    classical_consistency,
    commutator_apply,
    partitions_of,
)
from .functionals import (
    LocalFunctional,
    functional_basis,
    integrand_normal_form,
    component_monomials,
    poisson_bracket,
    poisson_density,
    to_functional,
)
from .hierarchy import (
    HamiltonianRecord,
    SSeries,
    classical_density,
    classical_flow_rhs,
    check_vder_recursion,
    s_partial_check,
    s_series,
    wang_hamiltonian,
)
from .intersection import (
    FallingCoeffTable,
    StrataPolynomial,
    WeightMismatchError,
    assemble_polynomial,
    extract_coeff_table,
    falling_convert,
    genus0_check,
    reassemble_density,
)
from .reconstruction import (
    Ansatz,
    InconsistentError,
    ReconstructionCertificate,
    UnderdeterminedError,
    build_ansatz,
    compare_with_wang,
    reconstruct,
    reconstruct_with_certificate,
)
from .scalars import Scalar, as_scalar
from .verify import VerifySummary, run_suite

__version__ = ENGINE_VERSION

__all__ = [
    "Ansatz",
    "Bidegree",
    "CommutatorNonzero",
    "CommuteReport",
    "DiffMonomial",
    "DiffPoly",
    "ENGINE_VERSION",
    "FallingCoeffTable",
    "FockVector",
    "HamiltonianRecord",
    "InconsistentError",
    "LocalFunctional",
    "MismatchError",
    "OddPowerError",
    "Partition",
    "ReconstructionCertificate",
    "Scalar",
    "SectorScalar",
    "SSeries",
    "StrataPolynomial",
    "UnderdeterminedError",
    "VerifySummary",
    "WeightMismatchError",
    "apply_quantized",
    "as_scalar",
    "assemble_polynomial",
    "bidegree_of",
    "build_ansatz",
    "check_commute",
    "check_vder_recursion",
    "classical_consistency",
    "classical_density",
    "classical_flow_rhs",
    "commutator_apply",
    "compare_with_wang",
    "component_monomials",
    "dx",
    "extract_coeff_table",
    "falling_convert",
    "from_json",
    "from_json_dict",
    "functional_basis",
    "genus0_check",
    "integrand_normal_form",
    "is_homogeneous",
    "partial_u",
    "partitions_of",
    "poisson_bracket",
    "poisson_density",
    "reassemble_density",
    "reconstruct",
    "reconstruct_with_certificate",
    "run_suite",
    "s_partial_check",
    "s_series",
    "scale_substitute",
    "to_functional",
    "to_json",
    "to_json_dict",
    "variational_derivative",
    "wang_hamiltonian",
]
