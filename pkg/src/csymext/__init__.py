"""C-self-adjoint contractive and dissipative extensions of partially
defined C-symmetric operators on finite-dimensional complex spaces."""

from .conjugation import (
    Conjugation,
    compose_conjugations,
    haar_unitary,
    random_conjugation,
)
from .dissipative import (
    CayleyData,
    DissipativeOperator,
    cayley_forward,
    cayley_inverse,
    cayley_kit,
    check_defect_identities,
    dissipation_margin,
    dissipative_uniqueness,
    extend_by_deficiency,
    glazman_extend,
    make_dissipative,
)
from .errors import Certificate, ToolkitError
from .extensions import (
    BoundedParam,
    ContractiveParam,
    OperatorBall,
    UniquenessReport,
    base_bounded_extension,
    bounded_extend,
    bounded_recover,
    central_extension,
    crandall_extend,
    crandall_recover,
    cself_contractive_extend,
    operator_ball,
    recover_contractive_param,
    uniqueness_report,
    validate_cself_contractive,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    complement,
    intersect,
    operator_norm,
    pinv,
    projector,
    psd_sqrt,
    range_basis,
    shorted_operator,
)
from .oracle import (
    ProblemInstance,
    SearchReport,
    coverage_search,
    grid_enumerate_2x2,
    random_dissipative,
    random_instance,
    unique_instance,
)
from .partial_ops import (
    ExtensionKit,
    PartialOperator,
    adjoint_on_domain,
    build_kit,
    check_c_symmetric,
    check_lift_identity,
)

__version__ = "0.1.0"

__all__ = [
    "BoundedParam", "CayleyData", "Certificate", "Conjugation",
    "ContractiveParam", "DEFAULT_TOL", "DissipativeOperator", "ExtensionKit",
    "OperatorBall", "PartialOperator", "ProblemInstance", "SearchReport",
    "Subspace", "Tolerance", "ToolkitError", "UniquenessReport",
    "adjoint_on_domain", "base_bounded_extension", "bounded_extend",
    "bounded_recover", "build_kit", "cayley_forward", "cayley_inverse",
    "cayley_kit", "central_extension", "check_c_symmetric",
    "check_defect_identities", "check_lift_identity", "complement",
    "compose_conjugations", "coverage_search", "crandall_extend",
    "crandall_recover", "cself_contractive_extend", "dissipation_margin",
    "dissipative_uniqueness", "extend_by_deficiency", "glazman_extend",
    "grid_enumerate_2x2", "haar_unitary", "intersect", "make_dissipative",
    "operator_ball", "operator_norm", "pinv", "projector", "psd_sqrt",
    "random_conjugation", "random_dissipative", "random_instance",
    "range_basis", "recover_contractive_param", "shorted_operator",
    "unique_instance", "uniqueness_report", "validate_cself_contractive",
]
