"""Copula-based randomized truthful mechanism for scheduling on two unrelated machines."""
from .bounds import lambda_constants, phi_at_points, replay_proof_chain, verify_lower_bound
from .copula import CopulaSpec, SampleBatch, clayton, eval_G, eval_H, independent, sample
from .marginals import (
    DemarcationPointError,
    DomainError,
    LuYuTranscendental,
    PaperPiecewise,
    Tabulated,
    eval_F,
    eval_F_derivative,
    marginal_from_dict,
    quantile,
)
from .mechanism import (
    Allocation,
    Instance,
    allocate,
    check_monotonicity,
    estimate_ratio,
    makespan,
    opt_makespan,
    read_instance,
)
from .optimizer import (
    REFERENCE_AB,
    RatioReport,
    SearchCell,
    critical_points,
    export_ratio_curve,
    maximize_phi,
    regime_for,
    tune_ab,
)
from .ratio import eval_phi, eval_rho, eval_theta_luyu

__version__ = "0.1.0"
