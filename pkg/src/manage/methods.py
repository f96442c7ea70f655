"""
UVC Voltage Risk - Planning Methods
Day-ahead planners turning injection predictions into dispatch strategies
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from ..density.model import UvcModelBank
from ..grid.layout import InjectionLayout, UvcCoefficients, constant_voltage
from ..grid.network import Network
from ..risk.profile import RiskProfile, profile_from_model
from ..solver.problem import SolveResult
from ..solver.simplex import SolverOptions
from ..uvc.series import InjectionSeries
from .builders import (build_curtailment_milp, build_cvar_lp, build_pwl_tables, build_var_lp,
                       profile_spreads, table_spreads)
from .ppo import (GaussianInjectionModel, build_ppo_baseline, fit_gaussian_injections,
                  ppo_pwl_tables, ppo_risk_profiles)
from .spec import (DEFAULT_ALPHA_POINTS, ManagementSpec, RiskVariant, Strategy, alpha_grid)
from .strategy import solve_management

logger = logging.getLogger(__name__)


class Planner:
    """
    Shared setup of a day-ahead planner.

    Subclasses supply the risk profiles at α = 0 and the problem for an hour.
    """

    method = "planner"

    def __init__(self, net: Network, layout: InjectionLayout, coeffs: UvcCoefficients,
                 tau: float = 0.95, variant="var", curtailment: bool = False,
                 alpha_points: int = DEFAULT_ALPHA_POINTS, base_mva: float = 1.0,
                 options: Optional[SolverOptions] = None):
        self.net = net
        self.layout = layout
        self.coeffs = coeffs
        self.tau = tau
        self.variant = RiskVariant.parse(variant)
        self.curtailment = curtailment
        self.alphas = alpha_grid(alpha_points)
        self.base_mva = base_mva
        self.options = options or SolverOptions()
        self.v_o = constant_voltage(coeffs, layout, net.v0)

    def spec(self, hour: int) -> ManagementSpec:
        return ManagementSpec(
            bus_ids=self.coeffs.bus_ids, providers=self.layout.providers, b_q=self.coeffs.b_q,
            v_min=self.net.v_min, v_max=self.net.v_max, v_o=self.v_o, tau=self.tau,
            variant=self.variant, curtailment=self.curtailment, alphas=self.alphas,
            base_mva=self.base_mva, hour=hour)

    def profiles(self, hour: int, chi_pred, zeta_pred) -> Dict[int, RiskProfile]:
        raise NotImplementedError

    def var_bounds(self, hour: int, chi_pred, zeta_pred) -> Tuple[np.ndarray, np.ndarray]:
        """Uncurtailed UVC VaR (upper, lower) per bus."""
        profiles = self.profiles(hour, chi_pred, zeta_pred)
        return (np.array([profiles[b].var_upper for b in self.coeffs.bus_ids]),
                np.array([profiles[b].var_lower for b in self.coeffs.bus_ids]))

    def plan(self, hour: int, chi_pred, zeta_pred) -> Tuple[Strategy, SolveResult]:
        raise NotImplementedError


class UvcpPlanner(Planner):
    """Planner using conditional mixture models of the uncertain voltage component."""

    method = "uvcp"

    def __init__(self, models: UvcModelBank, net: Network, layout: InjectionLayout, **kwargs):
        super().__init__(net, layout, models.coeffs, **kwargs)
        self.models = models

    def profiles(self, hour: int, chi_pred, zeta_pred) -> Dict[int, RiskProfile]:
        return {bus: profile_from_model(self.models.conditional(bus, hour, chi_pred, zeta_pred),
                                        bus, hour, self.tau)
                for bus in self.coeffs.bus_ids}

    def build(self, hour: int, chi_pred, zeta_pred):
        """Problem for ``hour`` and the buses to blame if it is infeasible."""
        spec = self.spec(hour)
        if self.curtailment:
            tables = build_pwl_tables(spec, self.models, chi_pred, zeta_pred)
            return spec, build_curtailment_milp(spec, tables), table_spreads(spec, tables)
        profiles = self.profiles(hour, chi_pred, zeta_pred)
        cvar = self.variant is RiskVariant.CVAR
        problem = build_cvar_lp(spec, profiles) if cvar else build_var_lp(spec, profiles)
        return spec, problem, profile_spreads(spec, profiles, cvar)

    def plan(self, hour: int, chi_pred, zeta_pred) -> Tuple[Strategy, SolveResult]:
        spec, problem, binding = self.build(hour, chi_pred, zeta_pred)
        return solve_management(problem, spec, self.options, self.method, binding)


class PpoPlanner(Planner):
    """Planner using a joint Gaussian forecast of the injections."""

    method = "ppo"

    def __init__(self, history: InjectionSeries, net: Network, layout: InjectionLayout,
                 coeffs: UvcCoefficients, **kwargs):
        super().__init__(net, layout, coeffs, **kwargs)
        self.history = history
        self._covariances: Dict[int, np.ndarray] = {}

    def gaussian(self, hour: int, chi_pred, zeta_pred) -> GaussianInjectionModel:
        if hour not in self._covariances:
            self._covariances[hour] = fit_gaussian_injections(self.history, hour, chi_pred,
                                                              zeta_pred).cov
        return GaussianInjectionModel(chi_pred, zeta_pred, self._covariances[hour])

    def profiles(self, hour: int, chi_pred, zeta_pred) -> Dict[int, RiskProfile]:
        return ppo_risk_profiles(self.gaussian(hour, chi_pred, zeta_pred), self.coeffs, self.tau,
                                 hour)

    def build(self, hour: int, chi_pred, zeta_pred):
        spec = self.spec(hour)
        model = self.gaussian(hour, chi_pred, zeta_pred)
        problem = build_ppo_baseline(model, self.coeffs, spec)
        if self.curtailment:
            binding = table_spreads(spec, ppo_pwl_tables(model, self.coeffs, spec))
        else:
            binding = profile_spreads(spec, ppo_risk_profiles(model, self.coeffs, self.tau, hour),
                                      self.variant is RiskVariant.CVAR)
        return spec, problem, binding

    def plan(self, hour: int, chi_pred, zeta_pred) -> Tuple[Strategy, SolveResult]:
        spec, problem, binding = self.build(hour, chi_pred, zeta_pred)
        return solve_management(problem, spec, self.options, self.method, binding)
