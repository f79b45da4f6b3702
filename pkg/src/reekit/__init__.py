"""Multipartite entanglement measures for symmetric and GHZ-diagonal families.

Closed-form relative entropy of entanglement, geometric measure, and
robustness bounds for (qudit) Dicke mixtures and the GHZ-diagonal
bound-entangled family, cross-validated by a general conditional-gradient
REE solver over the fully separable set.
"""

from .qcore import (
    DensityOperator,
    HilbertLayout,
    ProductPureState,
    PureStateVector,
    ValidationError,
    hermitian_eigensystem,
    negativity,
    partial_trace,
    partial_transpose,
    relative_entropy,
    tensor_product,
    von_neumann_entropy,
)
from .dicke import (
    DickeIndex,
    DickeMixture,
    QuditComposition,
    QuditDickeMixture,
    SymmetricPureState,
    collapse_copies,
    dicke_state_vector,
    mixture_density,
    partial_trace_dicke,
    product_overlap,
    qudit_dicke_state_vector,
)
from .closedform import (
    convex_envelope_1d,
    closest_separable_dicke,
    dephased_separable_sigma,
    e_log_mixture,
    entanglement_eigenvalue_superposition,
    f_value,
    f_value_qudit,
    lambda_max_dicke,
    lambda_max_qudit,
    mixture_ree,
    pure_dicke_ree,
    ree_two_component,
    theta_star,
)
from .reesolver import (
    SeparableEnsemble,
    SolverConfig,
    SolverReport,
    best_product_direction,
    g_of_rho,
    gradient_operator,
    lambda_max_numeric,
    minimize_ree,
    robustness_bounds,
    stationarity_gap,
)
from .durfamily import (
    DurParams,
    dur_closest_separable,
    dur_e_log,
    dur_ree,
    dur_state,
    g_function,
    g_max,
    verify_closest,
)

__version__ = "0.1.0"
