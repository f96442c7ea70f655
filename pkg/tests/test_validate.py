#!/usr/bin/env python3
"""
UVC Voltage Risk - Validation Tests
Scenario sampling, violation metrics, held-out reports and synthetic series
"""

import os
import shutil
import sys
import tempfile
import unittest

import numpy as np
import pandas as pd
from scipy.stats import beta

# Add parent directory to path to import application modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.density import Gmm1, UvcModelBank
from src.errors import InputError
from src.grid import (Branch, Bus, ConstantElement, InjectionLayout, Network, Provider,
                      UncertainElement, compute_sensitivities, uvc_coefficients)
from src.manage import PpoPlanner, Strategy, UvcpPlanner
from src.storage import read_series
from src.uvc import InjectionSeries
from src.validate import (DailyOutcome, HeldOutData, Provenance, ScenarioSet, build_report,
                          compare_methods, comparison_summary, evaluate_method,
                          frequency_heatmap, generate_synthetic_series, plan_days, sample_scenarios,
                          spawn_generators, var_confidence, violation_counts,
                          violation_frequency, write_series)
from src.validate.synthetic import TEST_STREAM_START, WeatherModel, synthetic_injections

V_MIN = 0.95 ** 2
V_MAX = 1.05 ** 2
HOUR = 12


def single_branch():
    buses = [Bus(1, 0.95, 1.05), Bus(2, 0.95, 1.05)]
    net = Network(buses=buses, slack_bus=1, v0=1.0, branches=[Branch(1, 2, 0.05, 0.05)])
    layout = InjectionLayout(uncertain_gens=[UncertainElement('pv', 2, 0.0, rating=1.0)],
                             constant_loads=[ConstantElement('load', 2, 0.0, 1.5)],
                             providers=[Provider('sg', 2, -1.0, 1.0, 20.0)])
    return net, layout, uvc_coefficients(compute_sensitivities(net), layout)


def held_out(noon_values, start='2024-01-01'):
    days = len(noon_values)
    stamps = pd.date_range(start, periods=24 * days, freq='h')
    gen = np.zeros((stamps.size, 1))
    gen[HOUR::24, 0] = noon_values
    return HeldOutData(InjectionSeries(stamps, gen, np.full_like(gen, 0.5),
                                       np.zeros((stamps.size, 0)), np.zeros((stamps.size, 0)),
                                       ('pv',), ()))


def fixed_strategy(v_c, alpha=0.0, cost=4.0):
    return Strategy('var', 0.95, alpha, cost, ('sg',), [v_c / 0.1], [abs(v_c) / 0.1], (2,),
                    [v_c], hour=HOUR)


def outcomes_for(held, v_c, var_upper=0.05, var_lower=0.03, skip_last=False):
    outcomes = []
    for k, day in enumerate(held.days):
        strategy = None if skip_last and k == len(held.days) - 1 else fixed_strategy(v_c)
        outcomes.append(DailyOutcome(day, HOUR, strategy, np.array([var_upper]),
                                     np.array([var_lower])))
    return outcomes


class TestScenarios(unittest.TestCase):
    """Test cases for sampled and held-out scenarios."""

    def test_spawned_streams_are_reproducible(self):
        first = [g.random(5) for g in spawn_generators(3, 2)]
        second = [g.random(5) for g in spawn_generators(3, 2)]
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a, b)
        self.assertFalse(np.array_equal(first[0], first[1]))

    def test_sample_scenarios(self):
        models = {2: Gmm1([1.0], [0.1], [1e-4]), 3: Gmm1([0.5, 0.5], [-0.2, 0.2], [1e-4, 1e-4])}
        scenarios = sample_scenarios(models, 4000, seed=9)
        self.assertEqual(scenarios.values.shape, (4000, 2))
        self.assertEqual(scenarios.provenance, Provenance.SAMPLED)
        self.assertEqual(scenarios.seed, 9)
        self.assertAlmostEqual(float(scenarios.column(2).mean()), 0.1, delta=2e-3)
        self.assertAlmostEqual(float(np.mean(scenarios.column(3) > 0.0)), 0.5, delta=0.05)
        again = sample_scenarios(models, 4000, seed=9)
        np.testing.assert_array_equal(scenarios.values, again.values)
        other = sample_scenarios(models, 4000, seed=10)
        self.assertFalse(np.array_equal(scenarios.values, other.values))

    def test_scenario_count(self):
        with self.assertRaises(InputError):
            sample_scenarios({2: Gmm1([1.0], [0.0], [1.0])}, 0)

    def test_held_out_realized_uvc(self):
        _, _, coeffs = single_branch()
        held = held_out([0.2, 0.4, 0.6, 1.0])
        self.assertEqual(len(held.days), 4)
        np.testing.assert_allclose(held.realized_uvc(coeffs, held.days[1], HOUR), [0.04])
        np.testing.assert_allclose(held.realized_uvc(coeffs, held.days[3], HOUR, 0.5), [0.05])
        scenarios = held.scenarios(coeffs, HOUR)
        self.assertEqual(scenarios.provenance, Provenance.HELD_OUT)
        np.testing.assert_allclose(scenarios.column(2), [0.02, 0.04, 0.06, 0.1])
        chi_pred, zeta_pred = held.predictions(held.days[0], HOUR)
        np.testing.assert_allclose(chi_pred, [0.5])
        self.assertEqual(zeta_pred.size, 0)


class TestMetrics(unittest.TestCase):
    """Test cases for violation frequencies and VaR confidence."""

    def test_counts_match_loop(self):
        rng = np.random.default_rng(2)
        voltages = rng.uniform(0.85, 1.15, (50, 3))
        v_min, v_max = np.full(3, V_MIN), np.array([V_MAX, 1.0, 1.05])
        above, below = violation_counts(voltages, v_min, v_max)
        for k in range(3):
            self.assertEqual(above[k], sum(1 for v in voltages[:, k] if v > v_max[k]))
            self.assertEqual(below[k], sum(1 for v in voltages[:, k] if v < v_min[k]))

    def test_violation_frequency(self):
        net, _, _ = single_branch()
        scenarios = ScenarioSet((2,), [[0.0], [0.05], [0.06], [-0.2]])
        frequencies = violation_frequency(fixed_strategy(0.2), scenarios, net, [0.85])
        np.testing.assert_allclose(frequencies.upper, [0.25])
        np.testing.assert_allclose(frequencies.lower, [0.25])
        self.assertEqual(frequencies.count, 4)
        self.assertAlmostEqual(frequencies.max_frequency, 0.25)
        np.testing.assert_allclose(frequencies.side('lower'), [0.25])

    def test_frequency_inputs_checked(self):
        net, _, _ = single_branch()
        with self.assertRaises(InputError):
            violation_frequency(fixed_strategy(0.2), ScenarioSet((3,), [[0.0]]), net, [0.85])
        with self.assertRaises(InputError):
            violation_frequency(fixed_strategy(0.2), ScenarioSet((2,), [[0.0]]), net,
                                [0.85, 0.9])

    def test_var_confidence_counts_ties_as_misses(self):
        self.assertAlmostEqual(var_confidence([1.0, 2.0, 3.0], [1.0, 1.0, 4.0], 'upper'), 1 / 3)
        self.assertAlmostEqual(var_confidence([1.0, 2.0, 3.0], [1.0, 1.0, 4.0], 'lower'), 1 / 3)
        with self.assertRaises(InputError):
            var_confidence([1.0], [1.0], 'middle')
        with self.assertRaises(InputError):
            var_confidence([1.0, 2.0], [1.0], 'upper')

    def test_var_confidence_monotone(self):
        realized = np.random.default_rng(6).normal(0.0, 1.0, 500)
        levels = [var_confidence(np.full(500, q), realized, 'upper') for q in (-1.0, 0.0, 1.0)]
        self.assertEqual(levels, sorted(levels))

    def test_heatmap_layout(self):
        table = frequency_heatmap({(2, 12): 0.1}, [2, 3], [12, 13])
        self.assertEqual(table.index.name, 'bus')
        self.assertEqual(list(table.columns), [12, 13])
        self.assertAlmostEqual(table.loc[2, 12], 0.1)
        self.assertTrue(np.isnan(table.loc[3, 13]))


class TestReports(unittest.TestCase):
    """Test cases for held-out reports and method comparison."""

    def setUp(self):
        self.net, self.layout, self.coeffs = single_branch()
        self.held = held_out([0.2, 0.4, 0.6, 1.0])

    def report(self, outcomes, method='uvcp'):
        return build_report(method, outcomes, self.held, self.coeffs, self.net, [0.85], 0.95)

    def test_frequencies_and_confidence(self):
        # Voltages 1.07, 1.09, 1.11 on the three planned days
        report = self.report(outcomes_for(self.held, 0.2, skip_last=True))
        self.assertEqual(report.days, 4)
        self.assertEqual(report.hours, (HOUR,))
        self.assertAlmostEqual(report.upper[(2, HOUR)], 1 / 3)
        self.assertEqual(report.lower[(2, HOUR)], 0.0)
        self.assertEqual(report.infeasible, ['2024-01-04 h12'])
        self.assertEqual(len(report.costs), 3)
        self.assertAlmostEqual(report.tau_act_upper[2], 0.5)
        self.assertAlmostEqual(report.tau_act_lower[2], 0.75)

    def test_worst_and_threshold(self):
        report = self.report(outcomes_for(self.held, 0.2, skip_last=True))
        value, bus, hour, side = report.worst()
        self.assertAlmostEqual(value, 1 / 3)
        self.assertEqual((bus, hour, side), (2, HOUR, 'upper'))
        self.assertAlmostEqual(report.threshold, 0.05)
        self.assertFalse(report.passed())
        summary = report.to_dict()
        self.assertEqual(summary['max_bus'], 2)
        self.assertAlmostEqual(summary['cost_mean'], 4.0)
        self.assertEqual(summary['frequencies'][0]['hour'], HOUR)
        self.assertAlmostEqual(report.heatmap('upper').loc[2, HOUR], 1 / 3)

    def test_clean_plan_passes(self):
        # Voltages 0.97 to 1.05
        report = self.report(outcomes_for(self.held, 0.1))
        self.assertEqual(report.max_frequency, 0.0)
        self.assertTrue(report.passed())
        self.assertEqual(report.infeasible, [])

    def test_curtailed_realization(self):
        day = self.held.days[3]
        strategy = fixed_strategy(0.2, alpha=0.5)
        outcome = DailyOutcome(day, HOUR, strategy, np.array([0.05]), np.array([0.03]))
        # 0.85 + 0.2 + 0.5 * 0.1 stays below v_max
        report = self.report([outcome])
        self.assertEqual(report.upper[(2, HOUR)], 0.0)
        self.assertEqual(report.alphas, [0.5])

    def test_compare_methods(self):
        reports = compare_methods({'b': outcomes_for(self.held, 0.0),
                                   'a': outcomes_for(self.held, 0.2, skip_last=True)},
                                  self.held, self.coeffs, self.net, [0.85], 0.95)
        self.assertEqual(list(reports), ['a', 'b'])
        # Method b leaves 0.87 and 0.89 below v_min
        self.assertAlmostEqual(reports['b'].lower[(2, HOUR)], 0.5)
        summary = comparison_summary(reports)
        self.assertEqual(summary['closest_to_threshold'], 'a')
        self.assertFalse(summary['methods']['b']['passed'])


    def test_equal_deviations_are_reported_as_tie(self):
        reports = compare_methods({'uvcp': outcomes_for(self.held, 0.1),
                                   'ppo': outcomes_for(self.held, 0.1)},
                                  self.held, self.coeffs, self.net, [0.85], 0.95)
        summary = comparison_summary(reports)
        self.assertIsNone(summary['closest_to_threshold'])
        self.assertEqual(summary['tied'], ['ppo', 'uvcp'])

    def test_repeated_forecasts_share_one_plan(self):
        history = HeldOutData(synthetic_injections(self.layout, 30, seed=3, hours=[HOUR]))
        planner = PpoPlanner(history.series, self.net, self.layout, self.coeffs)
        outcomes = plan_days(planner, history, [HOUR])
        self.assertEqual(len(outcomes), 30)
        plans = {id(o.strategy) for o in outcomes}
        forecasts = {float(history.series.gen_pred[k, 0]) for k in range(30)}
        self.assertEqual(len(plans), len(forecasts))
        day = outcomes[5].day
        chi_pred, zeta_pred = history.predictions(day, HOUR)
        direct, _ = planner.plan(HOUR, chi_pred, zeta_pred)
        self.assertAlmostEqual(outcomes[5].strategy.cost, direct.cost, places=12)

    def test_compare_requires_same_instances(self):
        full = outcomes_for(self.held, 0.2)
        with self.assertRaises(InputError):
            compare_methods({'a': full, 'b': full[:2]}, self.held, self.coeffs, self.net,
                            [0.85], 0.95)

    def test_evaluate_planners(self):
        rng = np.random.default_rng(4)
        days = 16
        stamps = pd.date_range('2024-01-01', periods=24 * days, freq='h')
        clear = np.repeat(rng.random(days) < 0.6, 24)
        gen = np.where(clear, rng.uniform(0.8, 1.0, stamps.size),
                       rng.uniform(0.1, 0.4, stamps.size))
        series = InjectionSeries(stamps, gen[:, None], np.full((stamps.size, 1), 0.6),
                                 np.zeros((stamps.size, 0)), np.zeros((stamps.size, 0)),
                                 ('pv',), ())
        history = series.select_days(series.days[:12])
        held = HeldOutData(series.select_days(series.days[12:]))
        bank = UvcModelBank(self.coeffs, history, reduce_to=4)
        uvcp = evaluate_method(UvcpPlanner(bank, self.net, self.layout), held, [HOUR])
        ppo = evaluate_method(PpoPlanner(history, self.net, self.layout, self.coeffs), held,
                              [HOUR])
        for report in (uvcp, ppo):
            self.assertEqual(report.days, 4)
            self.assertEqual(report.hours, (HOUR,))
            self.assertEqual(len(report.costs) + len(report.infeasible), 4)
            self.assertTrue(0.0 <= report.max_frequency <= 1.0)
        self.assertEqual(uvcp.method, 'uvcp')
        self.assertEqual(ppo.method, 'ppo')


class TestSynthetic(unittest.TestCase):
    """Test cases for the synthetic series generator."""

    def setUp(self):
        self.layout = InjectionLayout(
            uncertain_gens=[UncertainElement('pv', 2, 0.0, rating=1.0)],
            uncertain_loads=[UncertainElement('d', 2, 0.3, rating=0.5)])
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_columns_and_shape(self):
        frame = generate_synthetic_series(self.layout, 3, seed=7)
        self.assertEqual(list(frame.columns), ['timestamp', 'id', 'true', 'predicted'])
        self.assertEqual(len(frame), 3 * 24 * 2)
        pv = frame[frame['id'] == 'pv']
        night = pv[pd.to_datetime(pv['timestamp']).dt.hour < 6]
        self.assertTrue((night['true'] == 0.0).all())
        self.assertTrue((pv['true'] <= 1.0).all())
        self.assertTrue((frame['true'] >= 0.0).all())

    def test_deterministic(self):
        first = generate_synthetic_series(self.layout, 5, seed=7)
        pd.testing.assert_frame_equal(first, generate_synthetic_series(self.layout, 5, seed=7))
        other = generate_synthetic_series(self.layout, 5, seed=8)
        self.assertFalse(np.array_equal(first['true'].to_numpy(), other['true'].to_numpy()))

    def test_base_mva_scale(self):
        frame = generate_synthetic_series(self.layout, 2, seed=1, base_mva=10.0)
        unit = generate_synthetic_series(self.layout, 2, seed=1)
        np.testing.assert_allclose(frame['true'], 10.0 * unit['true'])

    def test_needs_days(self):
        with self.assertRaises(InputError):
            generate_synthetic_series(self.layout, 0)

    def test_written_series_reads_back(self):
        frame = generate_synthetic_series(self.layout, 3, seed=2)
        path = write_series(frame, os.path.join(self.temp_dir, 'series.csv'))
        with open(path) as f:
            self.assertEqual(f.readline().strip(), 'timestamp,id,true,predicted')
        series = read_series(path, self.layout)
        self.assertEqual(len(series), 72)
        self.assertEqual(series.gen_ids, ('pv',))
        pv = frame[frame['id'] == 'pv']['true'].to_numpy()
        np.testing.assert_allclose(series.gen_true[:, 0], pv, rtol=1e-9, atol=1e-12)
    def test_injections_match_frame(self):
        frame = generate_synthetic_series(self.layout, 3, seed=7)
        series = synthetic_injections(self.layout, 3, seed=7, hours=[13, 12])
        self.assertEqual(len(series), 6)
        self.assertEqual(list(np.unique(series.hours)), [12, 13])
        stamps = pd.to_datetime(frame['timestamp'])
        checks = [('pv', 'true', series.gen_true), ('pv', 'predicted', series.gen_pred),
                  ('d', 'true', series.load_true), ('d', 'predicted', series.load_pred)]
        for element, column, values in checks:
            rows = frame[(frame['id'] == element) & stamps.dt.hour.isin([12, 13])]
            np.testing.assert_allclose(values[:, 0], rows[column].to_numpy(), rtol=1e-12)

    def test_forecast_skill(self):
        weather = WeatherModel()
        self.assertAlmostEqual(weather.cloudy_given_clear_forecast(), 0.12 / 0.785)
        series = synthetic_injections(self.layout, 20000, seed=5, hours=[HOUR], weather=weather)
        clear_forecast = series.gen_pred[:, 0] > 0.5
        self.assertAlmostEqual(float(clear_forecast.mean()), 0.785, delta=0.012)
        # Share of clear forecasts whose day turns out below 0.6 of the rating
        missed = weather.cloudy_given_clear_forecast()
        expected = missed * beta.cdf(0.6, 3, 5) + (1.0 - missed) * beta.cdf(0.6, 18, 2)
        dim = float(np.mean(series.gen_true[clear_forecast, 0] < 0.6))
        self.assertAlmostEqual(dim, expected, delta=0.012)

    def test_weather_and_hours_checked(self):
        with self.assertRaises(InputError):
            WeatherModel(clear_skill=1.2)
        with self.assertRaises(InputError):
            synthetic_injections(self.layout, 2, hours=[24])
        with self.assertRaises(InputError):
            synthetic_injections(self.layout, 0)


class TestMethodComparison(unittest.TestCase):
    """Test cases for the two planners on a long stream of bimodal PV days."""

    @classmethod
    def setUpClass(cls):
        buses = [Bus(1, 0.9, 1.1), Bus(2, 0.9, 1.1)]
        cls.net = Network(buses=buses, slack_bus=1, v0=1.0,
                          branches=[Branch(1, 2, 0.05, 0.05)])
        cls.layout = InjectionLayout(uncertain_gens=[UncertainElement('pv', 2, 0.0, rating=1.0)],
                                     constant_loads=[ConstantElement('load', 2, 0.0, 2.5)],
                                     providers=[Provider('sg', 2, -1.0, 1.0, 20.0)])
        cls.coeffs = uvc_coefficients(compute_sensitivities(cls.net), cls.layout)
        history = synthetic_injections(cls.layout, 1400, seed=1, hours=[HOUR])
        cls.stream = HeldOutData(synthetic_injections(cls.layout, 100000, seed=2, hours=[HOUR],
                                                      start=TEST_STREAM_START))
        bank = UvcModelBank(cls.coeffs, history, reduce_to=10)
        planners = {'uvcp': UvcpPlanner(bank, cls.net, cls.layout),
                    'ppo': PpoPlanner(history, cls.net, cls.layout, cls.coeffs)}
        outcomes = {name: plan_days(p, cls.stream, [HOUR]) for name, p in planners.items()}
        cls.reports = compare_methods(outcomes, cls.stream, cls.coeffs, cls.net,
                                      planners['uvcp'].v_o, 0.95)

    def test_every_day_is_planned(self):
        for report in self.reports.values():
            self.assertEqual(report.days, 100000)
            self.assertEqual(report.infeasible, [])
            self.assertEqual(report.upper[(2, HOUR)], 0.0)

    def test_mixture_confidence_near_target(self):
        uvcp = self.reports['uvcp']
        self.assertGreaterEqual(uvcp.tau_act_lower[2], 0.93)
        self.assertLessEqual(uvcp.tau_act_lower[2], 0.98)
        # The binding lower limit turns every VaR miss into a violation
        self.assertAlmostEqual(uvcp.lower[(2, HOUR)], 1.0 - uvcp.tau_act_lower[2], delta=1e-3)

    def test_gaussian_confidence_falls_short(self):
        self.assertLess(self.reports['ppo'].tau_act_lower[2], 0.95)

    def test_mixture_is_closer_to_threshold(self):
        uvcp, ppo = self.reports['uvcp'], self.reports['ppo']
        self.assertLess(uvcp.deviation, ppo.deviation)
        self.assertEqual(comparison_summary(self.reports)['closest_to_threshold'], 'uvcp')


if __name__ == '__main__':
    unittest.main()
