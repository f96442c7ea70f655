"""
UVC Voltage Risk - Management Module Initialization
Risk-constrained reactive power dispatch and PV curtailment problems
"""

from .spec import (DEFAULT_ALPHA_POINTS, ManagementSpec, PwlRiskTable, RiskVariant, Strategy,
                   alpha_grid, default_big_m, management_spec, read_strategy, write_strategy)
from .builders import (build_curtailment_milp, build_cvar_lp, build_pwl_tables, build_risk_lp,
                       build_var_lp, profile_spreads, spread_violations, table_spreads)
from .ppo import (GaussianInjectionModel, build_ppo_baseline, fit_gaussian_injections,
                  gaussian_risk, gaussian_uvc_moments, ppo_pwl_tables, ppo_risk_profiles)
from .strategy import extract_strategy, solve_management
from .methods import Planner, PpoPlanner, UvcpPlanner

__all__ = [
    "DEFAULT_ALPHA_POINTS", "ManagementSpec", "PwlRiskTable", "RiskVariant", "Strategy",
    "alpha_grid", "default_big_m", "management_spec", "read_strategy", "write_strategy",
    "build_curtailment_milp", "build_cvar_lp", "build_pwl_tables", "build_risk_lp",
    "build_var_lp", "profile_spreads", "spread_violations", "table_spreads",
    "GaussianInjectionModel", "build_ppo_baseline", "fit_gaussian_injections", "gaussian_risk",
    "gaussian_uvc_moments", "ppo_pwl_tables", "ppo_risk_profiles", "extract_strategy",
    "solve_management", "Planner", "PpoPlanner", "UvcpPlanner",
]
