"""Measured Renyi divergences of bipartite states under local measurement
classes: explicit measurement searches for lower bounds, cone-variational
programs for upper bounds, closed forms with dual certificates on the
twirl-symmetric families, and hypothesis-testing exponents.
"""

from .bounds import BoundResult
from .classical import INF, ExtReal, FiniteMeasure, renyi
from .closedform import (
    GapValue,
    ScalarProgram,
    iso_measured,
    solve_scalar_program,
    unrestricted_reference,
    variational_gap_value,
    werner_measured,
)
from .errors import (
    DomainError,
    ResourceError,
    SolverError,
    StructuralError,
    ValidationError,
)
from .exponents import (
    DivergenceCurve,
    ExponentResult,
    TestReport,
    error_tradeoff_bound,
    evaluate_test,
    stein_exponent,
    strong_converse_exponent,
)
from .linops import (
    DensityOp,
    HermitianOp,
    Spectrum,
    eig_herm,
    herm_fn,
    partial_transpose,
    project_ppt_cone,
    project_psd,
    tensor,
    trace_product,
)
from .maxdiv import (
    DualCertificate,
    explicit_certificate,
    ppt_max_dual,
    ppt_max_primal,
    quantum_max_divergence,
)
from .measured import divergence_with_povm, measured_fidelity_bound, optimize_measured
from .povm import (
    Povm,
    binary_from_operator,
    born,
    class_check,
    conditional_povm,
    isotropic_binary_measurement,
    local_basis_measurement,
    povm_tensor_power,
    product_povm,
)
from .states import (
    antisymmetric_state,
    full_support_mix,
    isotropic,
    make_state,
    max_entangled,
    phi_perp,
    regroup_bipartite,
    symmetric_state,
    tensor_power,
    twirl,
    werner,
)
from .varprog import ConeSpec, SolverConfig, objective, plo_exact, variational_bound

__version__ = "0.1.0"

__all__ = [
    "BoundResult",
    "ConeSpec",
    "DensityOp",
    "DivergenceCurve",
    "DomainError",
    "DualCertificate",
    "ExponentResult",
    "ExtReal",
    "FiniteMeasure",
    "GapValue",
    "HermitianOp",
    "INF",
    "Povm",
    "ResourceError",
    "ScalarProgram",
    "SolverConfig",
    "SolverError",
    "Spectrum",
    "StructuralError",
    "TestReport",
    "ValidationError",
    "antisymmetric_state",
    "binary_from_operator",
    "born",
    "class_check",
    "conditional_povm",
    "divergence_with_povm",
    "eig_herm",
    "error_tradeoff_bound",
    "evaluate_test",
    "explicit_certificate",
    "full_support_mix",
    "herm_fn",
    "iso_measured",
    "isotropic",
    "isotropic_binary_measurement",
    "local_basis_measurement",
    "make_state",
    "max_entangled",
    "measured_fidelity_bound",
    "objective",
    "optimize_measured",
    "partial_transpose",
    "phi_perp",
    "plo_exact",
    "povm_tensor_power",
    "ppt_max_dual",
    "ppt_max_primal",
    "product_povm",
    "project_ppt_cone",
    "project_psd",
    "quantum_max_divergence",
    "regroup_bipartite",
    "renyi",
    "solve_scalar_program",
    "stein_exponent",
    "strong_converse_exponent",
    "symmetric_state",
    "tensor",
    "tensor_power",
    "trace_product",
    "twirl",
    "unrestricted_reference",
    "variational_bound",
    "variational_gap_value",
    "werner",
    "werner_measured",
]
