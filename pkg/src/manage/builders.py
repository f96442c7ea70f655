"""
UVC Voltage Risk - Problem Builders
VaR/CVaR linear programs and the SOS2 curtailment MILP for reactive power dispatch
"""

import logging
from typing import Dict, List, Mapping, Tuple, Union

import numpy as np

from ..density.model import UvcModelBank
from ..errors import InputError
from ..risk.measures import uvc_risk
from ..risk.profile import RiskProfile
from ..solver.problem import INF, LpBuilder, LpProblem, MilpProblem
from .spec import ManagementSpec, PwlRiskTable, RiskVariant

logger = logging.getLogger(__name__)


def q_name(provider_id: str) -> str:
    return f"q[{provider_id}]"


def q_abs_name(provider_id: str) -> str:
    return f"qabs[{provider_id}]"


def vc_name(bus: int) -> str:
    return f"vc[{bus}]"


ALPHA = "alpha"


def _risk_bounds(spec: ManagementSpec, profiles: Mapping[int, RiskProfile],
                 cvar: bool) -> Tuple[np.ndarray, np.ndarray]:
    missing = [bus for bus in spec.bus_ids if bus not in profiles]
    if missing:
        raise InputError(f"risk profiles missing for buses {missing}")
    upper = np.empty(len(spec.bus_ids))
    lower = np.empty(len(spec.bus_ids))
    for k, bus in enumerate(spec.bus_ids):
        p = profiles[bus]
        upper[k], lower[k] = (p.cvar_upper, p.cvar_lower) if cvar else (p.var_upper, p.var_lower)
    if not (np.all(np.isfinite(upper)) and np.all(np.isfinite(lower))):
        bad = [bus for bus, u, l in zip(spec.bus_ids, upper, lower)
               if not (np.isfinite(u) and np.isfinite(l))]
        raise InputError(f"risk profiles are not finite for buses {bad}")
    return upper, lower


def _dispatch_builder(spec: ManagementSpec, name: str) -> LpBuilder:
    """
    Variables and rows shared by every management problem.

    q_j within provider limits, q*_j >= |q_j| priced at c_j, and v_c equal to
    the reactive sensitivities times q.
    """
    builder = LpBuilder(name)
    for provider in spec.providers:
        builder.add_variable(q_name(provider.id), provider.q_min, provider.q_max)
    for provider in spec.providers:
        builder.add_variable(q_abs_name(provider.id), 0.0, INF, cost=provider.cost)
    for bus in spec.bus_ids:
        builder.add_variable(vc_name(bus), -INF, INF)
    for provider in spec.providers:
        builder.add_constraint({q_abs_name(provider.id): 1.0, q_name(provider.id): -1.0}, ">=",
                               0.0, f"abs_pos[{provider.id}]")
        builder.add_constraint({q_abs_name(provider.id): 1.0, q_name(provider.id): 1.0}, ">=",
                               0.0, f"abs_neg[{provider.id}]")
    for k, bus in enumerate(spec.bus_ids):
        row = {vc_name(bus): 1.0}
        for j, provider in enumerate(spec.providers):
            if spec.b_q[k, j] != 0.0:
                row[q_name(provider.id)] = -spec.b_q[k, j]
        builder.add_constraint(row, "==", 0.0, f"vc_def[{bus}]")
    return builder


def build_risk_lp(spec: ManagementSpec, upper: np.ndarray, lower: np.ndarray,
                  name: str = "risk_lp") -> LpProblem:
    """
    Dispatch LP for fixed per-bus risk bounds of the uncertain component.

    Each bus gets v_c <= v_max - v_o - upper and v_c >= v_min - v_o - lower.
    """
    if spec.curtailment:
        raise InputError("fixed-bound risk LPs are built with curtailment off")
    builder = _dispatch_builder(spec, name)
    for k, bus in enumerate(spec.bus_ids):
        builder.add_constraint({vc_name(bus): 1.0}, "<=",
                               spec.v_max[k] - spec.v_o[k] - upper[k], f"vmax[{bus}]")
        builder.add_constraint({vc_name(bus): 1.0}, ">=",
                               spec.v_min[k] - spec.v_o[k] - lower[k], f"vmin[{bus}]")
    problem = builder.build()
    logger.debug("%s: %d variables, %d rows", name, problem.num_variables,
                 problem.num_constraints)
    return problem


def build_var_lp(spec: ManagementSpec, profiles: Mapping[int, RiskProfile]) -> LpProblem:
    """
    VaR-constrained reactive dispatch LP.

    Args:
        spec: Management inputs with curtailment off
        profiles: RiskProfile per bus id, covering every non-slack bus

    Returns:
        LpProblem minimizing Σ c_j·q*_j
    """
    upper, lower = _risk_bounds(spec, profiles, cvar=False)
    return build_risk_lp(spec, upper, lower, name=f"var_lp_h{spec.hour:02d}")


def build_cvar_lp(spec: ManagementSpec, profiles: Mapping[int, RiskProfile]) -> LpProblem:
    """Same LP as ``build_var_lp`` with the CVaR bounds of each profile."""
    upper, lower = _risk_bounds(spec, profiles, cvar=True)
    return build_risk_lp(spec, upper, lower, name=f"cvar_lp_h{spec.hour:02d}")


def build_pwl_tables(spec: ManagementSpec, models: UvcModelBank, chi_pred,
                     zeta_pred) -> Dict[int, PwlRiskTable]:
    """
    Risk of every bus at each point of the curtailment grid.

    For each α the historical UVC samples and the predicted UVC are rebuilt
    with curtailed generation, the model is refitted and conditioned, and the
    variant's risk measure is evaluated on both sides.

    Args:
        spec: Management inputs (variant, τ, α grid, hour)
        models: Model bank over the training history
        chi_pred: Day-ahead generator predictions at ``spec.hour``
        zeta_pred: Day-ahead load predictions at ``spec.hour``

    Returns:
        PwlRiskTable per bus id
    """
    cvar = spec.variant is RiskVariant.CVAR
    beta = np.empty((len(spec.bus_ids), spec.alphas.size))
    gamma = np.empty_like(beta)
    for l, alpha in enumerate(spec.alphas):
        for k, bus in enumerate(spec.bus_ids):
            g = models.conditional(bus, spec.hour, chi_pred, zeta_pred, alpha)
            risk = uvc_risk(g, spec.tau)
            if cvar:
                beta[k, l], gamma[k, l] = risk.cvar_upper, -risk.cvar_lower
            else:
                beta[k, l], gamma[k, l] = risk.var_upper, -risk.var_lower
    logger.info("Built %s tables for %d buses on %d curtailment points (hour %d)",
                spec.variant.value, len(spec.bus_ids), spec.alphas.size, spec.hour)
    return {bus: PwlRiskTable(bus, spec.alphas, beta[k], gamma[k])
            for k, bus in enumerate(spec.bus_ids)}


def build_curtailment_milp(spec: ManagementSpec, tables: Mapping[int, PwlRiskTable],
                           name: str = None) -> MilpProblem:
    """
    Dispatch and curtailment MILP with piecewise-linear risk in α.

    α = Σ λ_l·α_l with at most two adjacent λ_l positive, enforced through
    binaries z_1..z_{L-1} (Σz = 1, λ_1 <= z_1, λ_L <= z_{L-1},
    λ_l <= z_{l-1} + z_l). The objective adds M·α to the reactive cost.

    Args:
        spec: Management inputs with curtailment on
        tables: PwlRiskTable per bus id on ``spec.alphas``

    Returns:
        MilpProblem with the z variables as binaries and λ as one SOS2 group
    """
    if not spec.curtailment:
        raise InputError("the curtailment MILP requires curtailment on")
    missing = [bus for bus in spec.bus_ids if bus not in tables]
    if missing:
        raise InputError(f"curtailment tables missing for buses {missing}")
    L = spec.alphas.size
    for bus in spec.bus_ids:
        if not np.array_equal(tables[bus].alphas, spec.alphas):
            raise InputError(f"bus {bus}: table grid differs from the curtailment grid")

    builder = _dispatch_builder(spec, name or f"{spec.variant.value}_milp_h{spec.hour:02d}")
    builder.add_variable(ALPHA, 0.0, 1.0, cost=spec.big_m)
    lambdas = [builder.add_variable(f"lambda[{l}]", 0.0, 1.0) for l in range(1, L + 1)]
    binaries = [builder.add_variable(f"z[{l}]", 0.0, 1.0) for l in range(1, L)]

    builder.add_constraint({j: 1.0 for j in lambdas}, "==", 1.0, "lambda_sum")
    alpha_row: Dict[Union[str, int], float] = {ALPHA: 1.0}
    for j, a in zip(lambdas, spec.alphas):
        if a != 0.0:
            alpha_row[j] = -float(a)
    builder.add_constraint(alpha_row, "==", 0.0, "alpha_def")
    builder.add_constraint({j: 1.0 for j in binaries}, "==", 1.0, "segment")
    for l, j in enumerate(lambdas):
        adjacent: List[int] = [binaries[s] for s in (l - 1, l) if 0 <= s < L - 1]
        row: Dict[Union[str, int], float] = {j: 1.0}
        row.update({z: -1.0 for z in adjacent})
        builder.add_constraint(row, "<=", 0.0, f"sos2[{l + 1}]")

    for k, bus in enumerate(spec.bus_ids):
        table = tables[bus]
        upper = {vc_name(bus): 1.0}
        lower = {vc_name(bus): -1.0}
        for j, b, c in zip(lambdas, table.beta, table.gamma):
            upper[j] = float(b)
            lower[j] = float(c)
        builder.add_constraint(upper, "<=", spec.v_max[k] - spec.v_o[k], f"vmax[{bus}]")
        builder.add_constraint(lower, "<=", spec.v_o[k] - spec.v_min[k], f"vmin[{bus}]")

    lp = builder.build()
    logger.debug("%s: %d variables, %d rows, %d binaries", lp.name, lp.num_variables,
                 lp.num_constraints, len(binaries))
    return MilpProblem(lp, binaries=tuple(binaries), sos2=(tuple(lambdas),))


def spread_violations(spec: ManagementSpec, upper: np.ndarray, lower: np.ndarray) -> List[int]:
    """Buses whose upper-minus-lower risk spread exceeds v_max - v_min."""
    width = spec.v_max - spec.v_min
    return [bus for bus, u, l, w in zip(spec.bus_ids, upper, lower, width) if u - l > w]


def profile_spreads(spec: ManagementSpec, profiles: Mapping[int, RiskProfile],
                    cvar: bool) -> List[int]:
    upper, lower = _risk_bounds(spec, profiles, cvar)
    return spread_violations(spec, upper, lower)


def table_spreads(spec: ManagementSpec, tables: Mapping[int, PwlRiskTable]) -> List[int]:
    """Buses too wide at every point of the curtailment grid."""
    width = spec.v_max - spec.v_min
    return [bus for k, bus in enumerate(spec.bus_ids)
            if np.min(tables[bus].beta + tables[bus].gamma) > width[k]]
