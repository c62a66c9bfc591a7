"""Continuous-variable Bell tests on truncated Fock spaces.

Evaluates both sides of the second-moment (CFRD) inequality exactly for
multimode bosonic states, builds the violating two-branch superpositions and
their decoherence thresholds, reproduces the MABK recursion with its
hidden-variable and quantum bounds, and constructs explicit hidden-variable
models for arbitrary first-moment correlation tables.
"""

from .decoherence import (
    ETA_INF,
    FidelityModel,
    LossModel,
    apply_loss_channel,
    epsilon_min,
    eta_min,
    eta_min_simulated,
    fig1_csv,
    fig1_data,
    loss_adjoint_factor,
    loss_kraus,
    lossy_cfrd_ratio_simulated,
    mixed_cfrd_ratio,
    mixed_state,
)
from .fock import (
    DensityOperator,
    FockSpaceConfig,
    ProductOperator,
    SparseStateVector,
    annihilate,
    basis_state,
    create,
    density_from_pure,
    expect_product,
    expect_product_mixed,
    inner_product,
    maximally_mixed,
    normalized_state,
    permute_modes,
    product_state,
    state_from_json,
    state_to_json,
    vacuum,
)
from .lhv import (
    CorrelationTable,
    DeterministicStrategy,
    LhvEnsemble,
    Scenario,
    cfrd_lhv_check,
    construct_general,
    construct_two_party,
    evaluate,
    sample_cfrd_report,
    sample_strategies,
    table_from_json,
    table_to_json,
)
from .mabk import (
    BellOperator,
    DichotomicSettings,
    build_f,
    ghz_state,
    lhv_exhaustive_max,
    mabk_report,
    mabk_value,
    max_eigenvalue,
    optimize_settings,
    quantum_bound,
    verify_commutator_recursion,
)
from .quadrature import (
    CfrdReport,
    QuadratureSettings,
    cfrd_lhs,
    cfrd_lhs_hermitian_route,
    cfrd_report,
    cfrd_report_mixed,
    cfrd_rhs,
    quadrature_x,
    quadrature_y,
)
from .states import (
    PsiSParams,
    amplitude_scan,
    amplitude_scan_csv,
    analytic_ratio,
    balanced_psi_s,
    build_psi_s,
    canonical_signs,
    first_violating_n,
)

__version__ = "0.1.0"
