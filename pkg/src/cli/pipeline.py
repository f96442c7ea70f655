"""
UVC Voltage Risk - Pipeline Manager
Coordinates loading, fitting, assessment, management and validation for the CLI
"""

import logging
import os
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from ..density.model import UvcModelBank, conditional_uvc, fit_uvc_model
from ..density.serialization import model_filename, read_model, write_model
from ..errors import InfeasibleError, InputError, InsufficientDataError
from ..grid.layout import InjectionLayout, UvcCoefficients, uvc_coefficients
from ..grid.network import Network
from ..grid.sensitivity import compute_sensitivities
from ..manage.methods import Planner, PpoPlanner, UvcpPlanner
from ..manage.spec import Strategy, read_strategy, write_strategy
from ..manage.strategy import solve_management
from ..risk.profile import RiskProfile, missing_profile, profile_from_model, write_risk_report
from ..solver.problem import MilpProblem, write_lp
from ..solver.simplex import SolverOptions
from ..storage.atomic import atomic_write_csv, atomic_write_json
from ..storage.formats import read_layout, read_network, read_series
from ..uvc.components import compute_uvc_samples, predict_uvc
from ..uvc.series import InjectionSeries, split_by_days
from ..validate.compare import (ValidationReport, comparison_summary, compare_methods,
                                build_report, plan_days)
from ..validate.metrics import violation_frequency
from ..validate.scenarios import HeldOutData, sample_scenarios
from ..validate.synthetic import (TEST_STREAM_START, generate_synthetic_series,
                                  synthetic_injections, write_series)
from .config import RunConfig

logger = logging.getLogger(__name__)


@dataclass
class FitSummary:
    written: List[str] = field(default_factory=list)
    deterministic: int = 0
    skipped: List[Tuple[int, int, str]] = field(default_factory=list)


@dataclass
class ManageSummary:
    strategies: List[Strategy] = field(default_factory=list)
    infeasible: Dict[int, List[int]] = field(default_factory=dict)


class PipelineManager:
    """
    Main manager of a run.

    Inputs are loaded on first use, so commands that only need the layout
    (such as ``generate``) work before a series exists.
    """

    def __init__(self, config: RunConfig):
        self.config = config
        self.options = SolverOptions(pivot_tol=config.pivot_tol, residual_tol=config.residual_tol,
                                     node_limit=config.node_limit)
        self.models_dir = config.path("models")
        self.strategies_dir = config.path("strategies")
        self.validation_dir = config.path("validation")

    @cached_property
    def net(self) -> Network:
        return read_network(self.config.branches, self.config.buses, self.config.slack_bus,
                            self.config.slack_voltage_pu)

    @cached_property
    def layout(self) -> InjectionLayout:
        layout = read_layout(self.config.layout, self.config.base_mva, self.config.provider_cost)
        layout.validate(self.net)
        return layout

    @cached_property
    def coeffs(self) -> UvcCoefficients:
        return uvc_coefficients(compute_sensitivities(self.net), self.layout)

    @cached_property
    def series(self) -> InjectionSeries:
        return read_series(self.config.series, self.layout, self.config.base_mva)

    @cached_property
    def split(self) -> Tuple[InjectionSeries, InjectionSeries]:
        return split_by_days(self.series, self.config.train_fraction)

    @property
    def train(self) -> InjectionSeries:
        return self.split[0]

    @property
    def held_out(self) -> HeldOutData:
        return HeldOutData(self.split[1])

    def use_test_days(self, days: Optional[int]):
        """Override the configured test stream length before scoring."""
        if days is not None:
            self.config = self.config.with_overrides(test_days=days)
            self.__dict__.pop("scoring", None)

    @cached_property
    def scoring(self) -> HeldOutData:
        """Days the planners are scored on: a fresh synthetic stream of ``test_days`` if set."""
        if not self.config.test_days:
            return self.held_out
        logger.info("Scoring on %d synthetic test days (seed %d)", self.config.test_days,
                    self.config.seed + 1)
        return HeldOutData(synthetic_injections(self.layout, self.config.test_days,
                                                self.config.seed + 1, self.config.hours,
                                                start=TEST_STREAM_START))

    @cached_property
    def day(self) -> pd.Timestamp:
        """Operating day: the configured one, else the first held-out day."""
        if self.config.day:
            return pd.Timestamp(self.config.day).normalize()
        days = self.held_out.days
        if not len(days):
            raise InsufficientDataError("no held-out day to plan for")
        return days[0]

    def predictions(self, hour: int):
        return HeldOutData(self.series).predictions(self.day, hour)

    # Fitting

    def fit(self) -> FitSummary:
        """Fit, reduce and store one model per (bus, hour) from the training days."""
        summary = FitSummary()
        start = time.perf_counter()
        for hour in self.config.hours:
            for bus in self.coeffs.bus_ids:
                try:
                    samples = compute_uvc_samples(self.coeffs, self.train, bus, hour)
                except InsufficientDataError as exc:
                    logger.warning("Skipping bus %d hour %d: %s", bus, hour, exc)
                    summary.skipped.append((bus, hour, str(exc)))
                    continue
                stored = fit_uvc_model(samples, self.config.reduce_to)
                summary.deterministic += int(stored.deterministic)
                summary.written.append(write_model(stored, self.models_dir))
        logger.info("Fitted %d models (%d deterministic, %d skipped) in %.2f s",
                    len(summary.written), summary.deterministic, len(summary.skipped),
                    time.perf_counter() - start)
        return summary

    def model_bank(self) -> UvcModelBank:
        """Models on disk where present; others are fitted on demand."""
        bank = UvcModelBank(self.coeffs, self.train, self.config.reduce_to)
        for hour in self.config.hours:
            for bus in self.coeffs.bus_ids:
                path = os.path.join(self.models_dir, model_filename(bus, hour))
                if os.path.exists(path):
                    bank.add(read_model(path))
        return bank

    # Assessment

    def assess(self) -> Tuple[List[RiskProfile], List[Tuple[int, int]]]:
        """Risk profile of every (bus, hour) for the operating day; returns rows and gaps."""
        rows, missing = [], []
        for hour in self.config.hours:
            chi_pred, zeta_pred = self.predictions(hour)
            for bus in self.coeffs.bus_ids:
                path = os.path.join(self.models_dir, model_filename(bus, hour))
                if not os.path.exists(path):
                    logger.error("No model for bus %d hour %d", bus, hour)
                    rows.append(missing_profile(bus, hour, self.config.tau))
                    missing.append((bus, hour))
                    continue
                v_pred = predict_uvc(self.coeffs, chi_pred, zeta_pred, bus)
                g = conditional_uvc(read_model(path), v_pred)
                rows.append(profile_from_model(g, bus, hour, self.config.tau))
        path = write_risk_report(rows, self.config.path("risk_report.csv"))
        logger.info("Wrote %d risk rows for %s to %s", len(rows), self.day.date(), path)
        return rows, missing

    # Management

    def planner(self, method: str = "uvcp", variant: Optional[str] = None,
                bank: Optional[UvcModelBank] = None) -> Planner:
        kwargs = dict(tau=self.config.tau, variant=variant or self.config.variant,
                      curtailment=self.config.curtailment, alpha_points=self.config.alpha_points,
                      base_mva=self.config.base_mva, options=self.options)
        if method == "uvcp":
            return UvcpPlanner(bank or self.model_bank(), self.net, self.layout, **kwargs)
        if method == "ppo":
            return PpoPlanner(self.train, self.net, self.layout, self.coeffs, **kwargs)
        raise InputError(f"unknown method '{method}' (expected uvcp or ppo)")

    def manage(self, dump_lp: bool = False) -> ManageSummary:
        """Solve and store the dispatch strategy of every configured hour."""
        planner = self.planner()
        summary = ManageSummary()
        for hour in self.config.hours:
            chi_pred, zeta_pred = self.predictions(hour)
            spec, problem, binding = planner.build(hour, chi_pred, zeta_pred)
            if dump_lp:
                lp_name = problem.lp.name if isinstance(problem, MilpProblem) else problem.name
                write_lp(problem, self.config.path("lp", f"{lp_name}.lp"))
            try:
                strategy, result = solve_management(problem, spec, self.options, planner.method,
                                                    binding)
            except InfeasibleError as exc:
                logger.error("Hour %d: %s", hour, exc)
                summary.infeasible[hour] = exc.binding_buses
                continue
            write_strategy(strategy, os.path.join(
                self.strategies_dir, f"{strategy.variant}_h{hour:02d}.json"))
            logger.info("Hour %d: cost $%.4f, alpha %.3f, %d iterations, %d nodes, %.4f s", hour,
                        strategy.cost, strategy.alpha, result.iterations, result.nodes,
                        result.solve_time)
            summary.strategies.append(strategy)
        return summary

    # Validation

    def _write_report(self, name: str, report: ValidationReport):
        atomic_write_json(os.path.join(self.validation_dir, f"{name}_report.json"),
                          report.to_dict())
        for side in ("upper", "lower"):
            atomic_write_csv(os.path.join(self.validation_dir, f"{name}_{side}_heatmap.csv"),
                             report.heatmap(side), float_format="%.6g", index=True)

    def saa_check(self, variant: str) -> Dict[str, float]:
        """Monte-Carlo violation frequencies of the stored strategies of ``variant``."""
        bank = self.model_bank()
        v_o = self.planner(variant=variant, bank=bank).v_o
        results = {}
        for hour in self.config.hours:
            path = os.path.join(self.strategies_dir, f"{variant}_h{hour:02d}.json")
            if not os.path.exists(path):
                continue
            strategy = read_strategy(path)
            chi_pred, zeta_pred = self.predictions(hour)
            models = {bus: bank.conditional(bus, hour, chi_pred, zeta_pred, strategy.alpha)
                      for bus in self.coeffs.bus_ids}
            scenarios = sample_scenarios(models, self.config.scenarios, self.config.seed + hour)
            frequencies = violation_frequency(strategy, scenarios, self.net, v_o)
            results[f"h{hour:02d}"] = frequencies.max_frequency
        if results:
            atomic_write_json(os.path.join(self.validation_dir, f"{variant}_saa.json"),
                              {"variant": variant, "scenarios": self.config.scenarios,
                               "seed": self.config.seed, "max_frequency": results})
        return results

    def validate(self, variants: Sequence[str]) -> Dict[str, ValidationReport]:
        """Held-out or test-stream evaluation of the mixture-based planner per variant."""
        bank = self.model_bank()
        reports = {}
        for variant in variants:
            planner = self.planner("uvcp", variant, bank)
            outcomes = plan_days(planner, self.scoring, self.config.hours)
            name = f"uvcp_{variant}"
            reports[name] = build_report(name, outcomes, self.scoring, self.coeffs, self.net,
                                         planner.v_o, self.config.tau)
            self._write_report(name, reports[name])
            self.saa_check(variant)
        return reports

    def compare(self) -> Dict:
        """Evaluate the mixture-based and Gaussian planners on the same scoring days."""
        outcomes = {}
        planners = {name: self.planner(name) for name in ("uvcp", "ppo")}
        for name, planner in planners.items():
            outcomes[name] = plan_days(planner, self.scoring, self.config.hours)
        reports = compare_methods(outcomes, self.scoring, self.coeffs, self.net,
                                  planners["uvcp"].v_o, self.config.tau)
        for name, report in reports.items():
            self._write_report(name, report)
        summary = comparison_summary(reports)
        summary["variant"] = self.config.variant
        summary["curtailment"] = self.config.curtailment
        atomic_write_json(self.config.path("comparison.json"), summary)
        return summary

    # Data

    def generate(self, days: int, output: Optional[str] = None) -> str:
        frame = generate_synthetic_series(self.layout, days, self.config.seed,
                                          base_mva=self.config.base_mva)
        return write_series(frame, output or self.config.series)
