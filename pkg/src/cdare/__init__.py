"""Maximal Hermitian solutions of conjugate discrete-time algebraic Riccati equations."""

from .benchgen import (
    ScalarFamilyParams,
    ScalarOracle,
    make_example1,
    make_example2,
    params_for_rho,
    random_problem,
    scalar_oracle,
)
from .errors import *  # noqa: F401,F403
from .model import (
    CdareProblem,
    EvalCache,
    eval_cache,
    in_domain,
    in_P,
    in_S_geq,
    in_T,
    normalized_residual,
    riccati_apply,
    riccati_apply_compact,
    stein_identity_residual,
)
from .solvers import (
    FlowTriple,
    SolveReport,
    SolverConfig,
    Status,
    afpi_solve,
    flow_compose_r,
    flow_recover,
    flow_step,
    fpi_hat_solve,
    fpi_solve,
    make_initial,
)
from .transform import (
    DareEvalCache,
    DareProblem,
    closed_loop_identity_residual,
    dare_apply,
    dare_eval_cache,
    double_riccati_apply,
    rhat_x_block,
    schur_identity_residual,
    transform,
)

__version__ = "0.1.0"
