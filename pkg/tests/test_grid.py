#!/usr/bin/env python3
"""
UVC Voltage Risk - Grid Tests
Network validation, DistFlow sensitivities and UVC coefficients
"""

import os
import sys
import unittest

import numpy as np

# Add parent directory to path to import application modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.errors import InputError, TopologyError
from src.grid import (Branch, Bus, ConstantElement, InjectionLayout, Network, Provider,
                      UncertainElement, compute_sensitivities, constant_voltage,
                      sensitivities_from_incidence, uvc_coefficients, voltage_from_injections)
from src.storage import read_network

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), '..', 'data', 'ieee33')


def make_network(branches, bus_count=None, slack=1):
    ids = sorted({b.from_bus for b in branches} | {b.to_bus for b in branches})
    if bus_count is not None:
        ids = list(range(1, bus_count + 1))
    buses = [Bus(i, 0.95, 1.05) for i in ids]
    return Network(buses=buses, slack_bus=slack, v0=1.0, branches=branches)


def single_branch():
    return make_network([Branch(1, 2, 0.05, 0.03)])


class TestNetwork(unittest.TestCase):
    """Test cases for feeder validation."""

    def test_bus_order_excludes_slack(self):
        net = make_network([Branch(1, 2, 0.1, 0.1), Branch(2, 3, 0.1, 0.1)])
        self.assertEqual(net.bus_ids, (2, 3))

    def test_limits_are_squared(self):
        net = single_branch()
        np.testing.assert_allclose(net.v_min, [0.9025])
        np.testing.assert_allclose(net.v_max, [1.1025])

    def test_loop_is_rejected(self):
        with self.assertRaises(TopologyError):
            make_network([Branch(1, 2, 0.1, 0.1), Branch(2, 3, 0.1, 0.1), Branch(3, 1, 0.1, 0.1)])

    def test_disconnected_feeder_is_rejected(self):
        with self.assertRaises(TopologyError):
            make_network([Branch(1, 2, 0.1, 0.1), Branch(3, 4, 0.1, 0.1), Branch(3, 5, 0.1, 0.1)],
                         bus_count=5)

    def test_unknown_bus_in_branch(self):
        buses = [Bus(1, 0.95, 1.05), Bus(2, 0.95, 1.05)]
        with self.assertRaises(TopologyError):
            Network(buses=buses, slack_bus=1, v0=1.0, branches=[Branch(1, 7, 0.1, 0.1)])

    def test_bad_limits(self):
        with self.assertRaises(InputError):
            Bus(2, 1.05, 0.95)

    def test_negative_resistance(self):
        with self.assertRaises(InputError):
            Branch(1, 2, -0.1, 0.1)


class TestSensitivities(unittest.TestCase):
    """Test cases for the path-accumulation sensitivities."""

    def test_single_branch(self):
        sens = compute_sensitivities(single_branch())
        np.testing.assert_allclose(sens.R, [[0.10]])
        np.testing.assert_allclose(sens.X, [[0.06]])

    def test_chain_uses_shared_path(self):
        net = make_network([Branch(1, 2, 0.1, 0.0), Branch(2, 3, 0.1, 0.0)])
        sens = compute_sensitivities(net)
        np.testing.assert_allclose(sens.R, [[0.2, 0.2], [0.2, 0.4]])
        np.testing.assert_allclose(sens.X, np.zeros((2, 2)))

    def test_lateral_shares_only_the_trunk(self):
        net = make_network([Branch(1, 2, 0.1, 0.2), Branch(2, 3, 0.3, 0.1), Branch(2, 4, 0.5, 0.4)])
        sens = compute_sensitivities(net)
        i3, i4 = sens.index(3), sens.index(4)
        self.assertAlmostEqual(sens.R[i3, i4], 0.2)
        self.assertAlmostEqual(sens.X[i3, i4], 0.4)
        self.assertAlmostEqual(sens.R[i4, i4], 1.2)

    def test_fixture_properties(self):
        net = read_network(os.path.join(FIXTURE_DIR, 'branches.csv'),
                           os.path.join(FIXTURE_DIR, 'buses.csv'))
        sens = compute_sensitivities(net)
        self.assertEqual(sens.size, 32)
        for M in (sens.R, sens.X):
            np.testing.assert_array_equal(M, M.T)
            self.assertTrue(np.all(M >= 0.0))
            self.assertTrue(np.all(np.diag(M)[:, None] >= M - 1e-15))

    def test_fixture_matches_incidence_form(self):
        net = read_network(os.path.join(FIXTURE_DIR, 'branches.csv'),
                           os.path.join(FIXTURE_DIR, 'buses.csv'))
        sens = compute_sensitivities(net)
        check = sensitivities_from_incidence(net)
        np.testing.assert_allclose(sens.R, check.R, rtol=0, atol=1e-12)
        np.testing.assert_allclose(sens.X, check.X, rtol=0, atol=1e-12)

    def test_incidence_form_on_reversed_branches(self):
        net = make_network([Branch(3, 2, 0.02, 0.01), Branch(2, 1, 0.05, 0.03),
                            Branch(2, 4, 0.04, 0.02)])
        check = sensitivities_from_incidence(net)
        np.testing.assert_allclose(check.R, [[0.10, 0.10, 0.10],
                                             [0.10, 0.14, 0.10],
                                             [0.10, 0.10, 0.18]], atol=1e-15)
        np.testing.assert_allclose(check.X, compute_sensitivities(net).X, atol=1e-15)

    def test_voltage_reconstruction(self):
        sens = compute_sensitivities(single_branch())
        v = voltage_from_injections(sens, [1.0], [1.0], 1.0)
        self.assertAlmostEqual(float(v[0]), 1.16)

    def test_voltage_shape_mismatch(self):
        sens = compute_sensitivities(single_branch())
        with self.assertRaises(InputError):
            voltage_from_injections(sens, [1.0, 2.0], [1.0], 1.0)

    def test_unknown_bus_index(self):
        sens = compute_sensitivities(single_branch())
        with self.assertRaises(InputError):
            sens.index(1)


class TestCoefficients(unittest.TestCase):
    """Test cases for UVC coefficients and the constant component."""

    def setUp(self):
        self.net = single_branch()
        self.sens = compute_sensitivities(self.net)

    def test_kappa_mixes_reactive_channel(self):
        layout = InjectionLayout(uncertain_gens=[UncertainElement('pv', 2, 0.5)],
                                 providers=[Provider('sg', 2, -1.0, 1.0, 20.0)])
        coeffs = uvc_coefficients(self.sens, layout)
        self.assertAlmostEqual(float(coeffs.b_gen[0, 0]), 0.13)
        self.assertAlmostEqual(float(coeffs.b_q[0, 0]), 0.06)
        self.assertAlmostEqual(float(coeffs.b_p[0, 0]), 0.10)
        self.assertEqual(coeffs.gen_ids, ('pv',))
        self.assertEqual(coeffs.provider_ids, ('sg',))

    def test_zero_kappa_reproduces_r_columns(self):
        net = make_network([Branch(1, 2, 0.1, 0.2), Branch(2, 3, 0.3, 0.1), Branch(2, 4, 0.5, 0.4)])
        sens = compute_sensitivities(net)
        layout = InjectionLayout(uncertain_loads=[UncertainElement('d3', 3), UncertainElement('d4', 4)])
        coeffs = uvc_coefficients(sens, layout)
        np.testing.assert_array_equal(coeffs.b_load[:, 0], sens.R[:, sens.index(3)])
        np.testing.assert_array_equal(coeffs.b_load[:, 1], sens.R[:, sens.index(4)])

    def test_slack_placement_is_rejected(self):
        layout = InjectionLayout(uncertain_gens=[UncertainElement('pv', 1)])
        with self.assertRaises(InputError):
            uvc_coefficients(self.sens, layout)
        with self.assertRaises(InputError):
            layout.validate(self.net)

    def test_duplicate_ids(self):
        with self.assertRaises(InputError):
            InjectionLayout(uncertain_gens=[UncertainElement('x', 2)],
                            uncertain_loads=[UncertainElement('x', 2)])

    def test_provider_bounds(self):
        with self.assertRaises(InputError):
            Provider('sg', 2, 1.0, -1.0, 20.0)

    def test_constant_voltage(self):
        layout = InjectionLayout(constant_loads=[ConstantElement('load', 2, 0.0, 1.5)],
                                 providers=[Provider('sg', 2, -1.0, 1.0, 20.0, p=0.5)])
        coeffs = uvc_coefficients(self.sens, layout)
        v_o = constant_voltage(coeffs, layout, self.net.v0)
        # 1 - 0.10·1.5 + 0.10·0.5
        self.assertAlmostEqual(float(v_o[0]), 0.90)


if __name__ == '__main__':
    unittest.main()
