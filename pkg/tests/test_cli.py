#!/usr/bin/env python3
"""
UVC Voltage Risk - Command Line Tests
Configuration loading and the fit, assess, manage, validate and compare commands
"""

import json
import logging
import os
import shutil
import sys
import tempfile
import unittest

import pandas as pd
from click.testing import CliRunner

# Add parent directory to path to import application modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.cli.app import cli
from src.cli.config import RunConfig, load_config, save_config
from src.errors import InputError
from src.manage import read_strategy
from src.risk import read_risk_report

LAYOUT = """id,role,bus,kappa,p_fixed,q_min,q_max,cost
pv,ugen,2,0,1.0,,,
load,cload,2,0,2.0,,,
sg,provider,2,,,{q_min},{q_max},20
"""


def write_feeder(directory, q_limit=2.0, **overrides):
    """Two-bus feeder with one PV unit, one constant load and one provider."""
    with open(os.path.join(directory, 'branches.csv'), 'w') as f:
        f.write('from,to,r_pu,x_pu\n1,2,0.05,0.05\n')
    with open(os.path.join(directory, 'buses.csv'), 'w') as f:
        f.write('bus,vmin_pu,vmax_pu\n1,0.95,1.05\n2,0.95,1.05\n')
    with open(os.path.join(directory, 'layout.csv'), 'w') as f:
        f.write(LAYOUT.format(q_min=-q_limit, q_max=q_limit))
    config = {'hours': [12], 'reduce_to': 4, 'alpha_points': 3, 'synthetic_days': 20,
              'scenarios': 500, 'seed': 3}
    config.update(overrides)
    path = os.path.join(directory, 'config.json')
    with open(path, 'w') as f:
        json.dump(config, f)
    return path


class TestConfig(unittest.TestCase):
    """Test cases for the run configuration."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_relative_paths_resolve_against_config(self):
        config = load_config(write_feeder(self.temp_dir, layout='inputs/layout.csv'))
        self.assertEqual(config.layout, os.path.join(self.temp_dir, 'inputs', 'layout.csv'))
        self.assertEqual(config.branches, os.path.join(self.temp_dir, 'branches.csv'))
        self.assertEqual(config.output_dir, os.path.join(self.temp_dir, 'output'))
        self.assertEqual(config.hours, [12])
        self.assertEqual(config.tau, 0.95)

    def test_unknown_key(self):
        path = write_feeder(self.temp_dir, threshold=0.1)
        with self.assertRaises(InputError) as ctx:
            load_config(path)
        self.assertIn('threshold', str(ctx.exception))

    def test_invalid_json(self):
        path = os.path.join(self.temp_dir, 'config.json')
        with open(path, 'w') as f:
            f.write('{\n  "tau": 0.9,\n}\n')
        with self.assertRaises(InputError) as ctx:
            load_config(path)
        self.assertEqual(ctx.exception.path, path)
        self.assertIsNotNone(ctx.exception.line)

    def test_missing_file(self):
        with self.assertRaises(InputError):
            load_config(os.path.join(self.temp_dir, 'absent.json'))

    def test_value_checks(self):
        for bad in ({'tau': 1.0}, {'hours': [24]}, {'variant': 'median'}, {'alpha_points': 1},
                    {'test_days': -5}):
            with self.assertRaises(InputError):
                RunConfig(**bad)
        self.assertEqual(RunConfig(hours=[5, 3, 5]).hours, [3, 5])

    def test_overrides_and_save(self):
        config = RunConfig().with_overrides(seed=4, tau=None, variant='cvar')
        self.assertEqual(config.seed, 4)
        self.assertEqual(config.tau, 0.95)
        self.assertEqual(config.variant, 'cvar')
        path = save_config(config, os.path.join(self.temp_dir, 'saved.json'))
        with open(path) as f:
            self.assertEqual(json.load(f)['variant'], 'cvar')


class TestCommands(unittest.TestCase):
    """Test cases for the command-line workflow on a two-bus feeder."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.runner = CliRunner()

    def tearDown(self):
        logging.getLogger().handlers.clear()
        shutil.rmtree(self.temp_dir)

    def invoke(self, config, *args):
        return self.runner.invoke(cli, ['--config', config, '--quiet', *args])

    def output(self, *parts):
        return os.path.join(self.temp_dir, 'output', *parts)

    def test_full_workflow(self):
        config = write_feeder(self.temp_dir)
        result = self.invoke(config, 'generate')
        self.assertEqual(result.exit_code, 0, result.output)
        series = pd.read_csv(os.path.join(self.temp_dir, 'series.csv'))
        self.assertEqual(len(series), 20 * 24)

        result = self.invoke(config, 'fit')
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('1 models written', result.output)
        self.assertTrue(os.path.exists(self.output('models', 'bus2_h12.json')))

        result = self.invoke(config, 'assess')
        self.assertEqual(result.exit_code, 0, result.output)
        rows = read_risk_report(self.output('risk_report.csv'))
        self.assertEqual(len(rows), 1)
        self.assertTrue(rows[0].valid)
        self.assertGreater(rows[0].cvar_upper, rows[0].var_lower)

        result = self.invoke(config, 'manage', '--dump-lp')
        self.assertEqual(result.exit_code, 0, result.output)
        strategy = read_strategy(self.output('strategies', 'var_h12.json'))
        self.assertEqual(strategy.hour, 12)
        self.assertGreater(strategy.q[0], 0.0)
        self.assertTrue(os.listdir(self.output('lp')))

        result = self.invoke(config, 'validate')
        self.assertIn(result.exit_code, (0, 1), result.output)
        self.assertIn('uvcp_var: max violation frequency', result.output)
        with open(self.output('validation', 'uvcp_var_report.json')) as f:
            report = json.load(f)
        self.assertEqual(report['days'], 6)
        self.assertTrue(os.path.exists(self.output('validation', 'var_saa.json')))
        self.assertTrue(os.path.exists(self.output('validation', 'uvcp_var_upper_heatmap.csv')))

        result = self.invoke(config, 'compare')
        self.assertEqual(result.exit_code, 0, result.output)
        with open(self.output('comparison.json')) as f:
            summary = json.load(f)
        self.assertEqual(sorted(summary['methods']), ['ppo', 'uvcp'])
        if summary['tied']:
            self.assertIsNone(summary['closest_to_threshold'])
            self.assertEqual(summary['tied'], ['ppo', 'uvcp'])
        else:
            self.assertIn(summary['closest_to_threshold'], ('ppo', 'uvcp'))

    def test_compare_on_test_stream(self):
        config = write_feeder(self.temp_dir)
        self.assertEqual(self.invoke(config, 'generate').exit_code, 0)
        self.assertEqual(self.invoke(config, 'fit').exit_code, 0)
        result = self.invoke(config, 'compare', '--test-days', '300')
        self.assertEqual(result.exit_code, 0, result.output)
        for name in ('uvcp', 'ppo'):
            with open(self.output('validation', f'{name}_report.json')) as f:
                self.assertEqual(json.load(f)['days'], 300)
        self.assertEqual(self.invoke(config, 'compare', '--test-days', '-1').exit_code, 2)

    def test_assess_without_models(self):
        config = write_feeder(self.temp_dir)
        self.assertEqual(self.invoke(config, 'generate').exit_code, 0)
        result = self.invoke(config, 'assess')
        self.assertEqual(result.exit_code, 2)
        rows = read_risk_report(self.output('risk_report.csv'))
        self.assertFalse(rows[0].valid)

    def test_infeasible_manage(self):
        config = write_feeder(self.temp_dir, q_limit=0.01)
        self.assertEqual(self.invoke(config, 'generate').exit_code, 0)
        self.assertEqual(self.invoke(config, 'fit').exit_code, 0)
        result = self.invoke(config, 'manage')
        self.assertEqual(result.exit_code, 3)

    def test_bad_configuration(self):
        config = write_feeder(self.temp_dir, threshold=0.1)
        self.assertEqual(self.invoke(config, 'fit').exit_code, 2)
        missing = os.path.join(self.temp_dir, 'absent.json')
        self.assertEqual(self.invoke(missing, 'fit').exit_code, 2)

    def test_missing_series(self):
        config = write_feeder(self.temp_dir)
        self.assertEqual(self.invoke(config, 'fit').exit_code, 2)

    def test_generate_days_option(self):
        config = write_feeder(self.temp_dir)
        target = os.path.join(self.temp_dir, 'short.csv')
        result = self.invoke(config, 'generate', '--days', '2', '--output', target)
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(len(pd.read_csv(target)), 48)


if __name__ == '__main__':
    unittest.main()
