#!/usr/bin/env python3
"""
UVC Voltage Risk - Solver Tests
Bounded simplex, branch and bound and LP text export
"""

import itertools
import os
import sys
import unittest

import numpy as np
from scipy.optimize import linprog

# Add parent directory to path to import application modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.errors import InputError, ResourceError
from src.solver import (INF, LpBuilder, MilpProblem, SolverOptions, SolveStatus, lp_text,
                        solve_lp, solve_milp)


def two_variable_lp():
    builder = LpBuilder('toy')
    builder.add_variable('x', cost=-1.0)
    builder.add_variable('y', cost=-1.0)
    builder.add_constraint({'x': 1.0, 'y': 2.0}, '<=', 4.0, 'first')
    builder.add_constraint({'x': 3.0, 'y': 1.0}, '<=', 6.0, 'second')
    return builder.build()


def covering_milp(count, seed):
    rng = np.random.default_rng(seed)
    builder = LpBuilder(f'cover{seed}')
    for k in range(count):
        builder.add_variable(f'z{k}', 0.0, 1.0, cost=float(rng.uniform(1.0, 3.0)))
    builder.add_variable('y', 0.0, 5.0, cost=float(rng.uniform(1.0, 2.0)))
    weights = rng.uniform(0.5, 2.0, count)
    row = {f'z{k}': float(weights[k]) for k in range(count)}
    row['y'] = 1.0
    builder.add_constraint(row, '>=', 6.0, 'cover')
    builder.add_constraint({f'z{k}': 1.0 for k in range(count)}, '<=', count // 2, 'budget')
    lp = builder.build()
    return MilpProblem(lp, binaries=range(count))


def enumerate_binaries(problem):
    lp = problem.lp
    best = np.inf
    for values in itertools.product((0.0, 1.0), repeat=len(problem.binaries)):
        lower, upper = lp.lower.copy(), lp.upper.copy()
        lower[list(problem.binaries)] = values
        upper[list(problem.binaries)] = values
        result = solve_lp(lp.with_bounds(lower, upper))
        if result.optimal:
            best = min(best, result.objective)
    return best


class TestSimplex(unittest.TestCase):
    """Test cases for the LP solver."""

    def test_two_variable_vertex(self):
        result = solve_lp(two_variable_lp())
        self.assertEqual(result.status, SolveStatus.OPTIMAL)
        self.assertAlmostEqual(result.objective, -2.8)
        self.assertAlmostEqual(result.value('x'), 1.6)
        self.assertAlmostEqual(result.value('y'), 1.2)

    def test_equality_and_lower_rows(self):
        builder = LpBuilder()
        builder.add_variable('x', cost=1.0)
        builder.add_variable('y', cost=1.0)
        builder.add_constraint({'x': 1.0, 'y': 1.0}, '>=', 2.0)
        builder.add_constraint({'x': 1.0, 'y': -1.0}, '==', 0.0)
        result = solve_lp(builder.build())
        self.assertAlmostEqual(result.objective, 2.0)
        self.assertAlmostEqual(result.value('x'), 1.0)

    def test_free_variable_absolute_value(self):
        builder = LpBuilder()
        builder.add_variable('x', -INF, INF)
        builder.add_variable('t', cost=1.0)
        builder.add_constraint({'t': 1.0, 'x': -1.0}, '>=', -3.0)
        builder.add_constraint({'t': 1.0, 'x': 1.0}, '>=', 3.0)
        builder.add_constraint({'x': 1.0}, '==', 3.0)
        result = solve_lp(builder.build())
        self.assertAlmostEqual(result.objective, 0.0)
        self.assertAlmostEqual(result.value('x'), 3.0)

    def test_infeasible(self):
        builder = LpBuilder()
        builder.add_variable('x')
        builder.add_constraint({'x': 1.0}, '<=', 1.0)
        builder.add_constraint({'x': 1.0}, '>=', 2.0)
        self.assertEqual(solve_lp(builder.build()).status, SolveStatus.INFEASIBLE)

    def test_unbounded(self):
        builder = LpBuilder()
        builder.add_variable('x', cost=-1.0)
        builder.add_variable('y')
        builder.add_constraint({'x': 1.0, 'y': -1.0}, '<=', 1.0)
        self.assertEqual(solve_lp(builder.build()).status, SolveStatus.UNBOUNDED)

    def test_bounds_only(self):
        builder = LpBuilder()
        builder.add_variable('x', 1.0, 2.0, cost=1.0)
        builder.add_variable('y', 0.0, 5.0, cost=-1.0)
        result = solve_lp(builder.build())
        np.testing.assert_allclose(result.x, [1.0, 5.0])

    def test_random_problems_match_reference(self):
        rng = np.random.default_rng(21)
        for _ in range(25):
            m, n = int(rng.integers(2, 8)), int(rng.integers(2, 10))
            A = rng.normal(0.0, 1.0, (m, n))
            x0 = rng.uniform(0.0, 10.0, n)
            b = A @ x0 + rng.uniform(0.0, 1.0, m)
            c = rng.normal(0.0, 1.0, n)
            builder = LpBuilder()
            for j in range(n):
                builder.add_variable(f'x{j}', 0.0, 10.0, cost=float(c[j]))
            for i in range(m):
                builder.add_constraint({j: float(A[i, j]) for j in range(n)}, '<=', float(b[i]))
            result = solve_lp(builder.build())
            reference = linprog(c, A_ub=A, b_ub=b, bounds=[(0.0, 10.0)] * n, method='highs')
            self.assertTrue(result.optimal)
            self.assertAlmostEqual(result.objective, reference.fun, delta=1e-7 * max(1.0, abs(reference.fun)))

    def test_deterministic_vertex(self):
        builder = LpBuilder()
        for name in ('a', 'b', 'c'):
            builder.add_variable(name, 0.0, 1.0, cost=1.0)
        builder.add_constraint({'a': 1.0, 'b': 1.0, 'c': 1.0}, '>=', 1.0)
        first, second = solve_lp(builder.build()), solve_lp(builder.build())
        np.testing.assert_array_equal(first.x, second.x)
        self.assertAlmostEqual(first.objective, 1.0)


class TestBranchAndBound(unittest.TestCase):
    """Test cases for the binary MILP solver."""

    def test_matches_enumeration(self):
        for seed, count in ((1, 6), (2, 8), (3, 10)):
            problem = covering_milp(count, seed)
            result = solve_milp(problem)
            expected = enumerate_binaries(problem)
            self.assertTrue(result.optimal)
            self.assertAlmostEqual(result.objective, expected, delta=1e-9 * max(1.0, abs(expected)))
            binaries = result.x[list(problem.binaries)]
            np.testing.assert_array_equal(binaries, np.round(binaries))

    def test_infeasible_milp(self):
        builder = LpBuilder()
        builder.add_variable('z', 0.0, 1.0)
        builder.add_constraint({'z': 1.0}, '==', 0.5)
        result = solve_milp(MilpProblem(builder.build(), binaries=[0]))
        self.assertEqual(result.status, SolveStatus.INFEASIBLE)

    def test_node_limit(self):
        builder = LpBuilder()
        builder.add_variable('z1', 0.0, 1.0, cost=-1.0)
        builder.add_variable('z2', 0.0, 1.0, cost=-1.0)
        builder.add_constraint({'z1': 2.0, 'z2': 2.0}, '<=', 3.0)
        problem = MilpProblem(builder.build(), binaries=[0, 1])
        with self.assertRaises(ResourceError):
            solve_milp(problem, SolverOptions(node_limit=1))
        self.assertAlmostEqual(solve_milp(problem).objective, -1.0)

    def test_binary_bounds_checked(self):
        builder = LpBuilder()
        builder.add_variable('z', 0.0, 2.0)
        with self.assertRaises(InputError):
            MilpProblem(builder.build(), binaries=[0])


class TestProblemText(unittest.TestCase):
    """Test cases for problem construction and LP export."""

    def test_duplicate_variable(self):
        builder = LpBuilder()
        builder.add_variable('x')
        with self.assertRaises(InputError):
            builder.add_variable('x')

    def test_inconsistent_bounds(self):
        builder = LpBuilder('bad')
        builder.add_variable('x', 2.0, 1.0)
        with self.assertRaises(InputError):
            builder.build()

    def test_violation(self):
        lp = two_variable_lp()
        self.assertEqual(lp.violation(np.array([1.6, 1.2])), 0.0)
        self.assertAlmostEqual(lp.violation(np.array([0.0, 3.0])), 0.5)

    def test_lp_text_sections(self):
        builder = LpBuilder('pwl')
        for name in ('lambda[1]', 'lambda[2]', 'z[1]'):
            builder.add_variable(name, 0.0, 1.0, cost=1.0)
        builder.add_constraint({'lambda[1]': 1.0, 'lambda[2]': 1.0}, '==', 1.0, 'lambda_sum')
        text = lp_text(MilpProblem(builder.build(), binaries=[2], sos2=[(0, 1)]))
        self.assertTrue(text.startswith('\\ pwl\nMinimize\n'))
        self.assertIn(' lambda_sum: lambda[1] + lambda[2] = 1', text)
        self.assertIn('Binaries\n z[1]', text)
        self.assertIn(' s1: S2:: lambda[1]:1 lambda[2]:2', text)
        self.assertTrue(text.endswith('End\n'))


if __name__ == '__main__':
    unittest.main()
