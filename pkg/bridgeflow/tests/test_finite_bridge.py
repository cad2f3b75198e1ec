#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------
"""
Unit tests for the finite-horizon bridge solver
===============================================
"""

from unittest import TestCase, main

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
from scipy.special import rel_entr

from bridgeflow.entropy import PathMeasure, path_relative_entropy
from bridgeflow.finite_bridge import (BridgeProblem, InfeasibleSupportError,
                                      NonConvergenceError, SchroedingerPair,
                                      ZeroPotentialError, assemble_policy,
                                      check_feasibility, marginal_flow,
                                      schroedinger_residuals, solve)

UNIFORM = [[0.5, 0.5], [0.5, 0.5]]


def random_stochastic(rng, n):
    m = rng.random((n, n)) + 0.05
    return m / m.sum(axis=1, keepdims=True)


def random_distribution(rng, n):
    p = rng.random(n) + 0.05
    return p / p.sum()


def one_step_minimum(nu0, nu1, m, points=20001):
    """Grid minimum of sum_x nu0(x) D(pi_x. || m_x.) over 2 x 2 kernels
    pushing nu0 to nu1

    The first row is [a, 1 - a] on a grid; the second row follows from the
    marginal constraint. Returns +inf when no grid point is feasible.
    """
    a = np.linspace(0.0, 1.0, points)
    b = (nu1[0] - nu0[0] * a) / nu0[1]
    ok = (b >= 0) & (b <= 1)
    if not ok.any():
        return np.inf
    a, b = a[ok], b[ok]
    cost = (nu0[0] * (rel_entr(a, m[0, 0]) + rel_entr(1 - a, m[0, 1])) +
            nu0[1] * (rel_entr(b, m[1, 0]) + rel_entr(1 - b, m[1, 1])))
    return cost.min()


class FeasibilityTests(TestCase):
    """Tests of check_feasibility"""

    def test_positive_product(self):
        """All-ones prior gives a positive product"""
        report = check_feasibility(BridgeProblem.from_kernel(
            np.ones((2, 2)), 1, [0.5, 0.5], [0.5, 0.5]))
        self.assertTrue(report.feasible)
        self.assertEqual(report.zero_entries, [])
        assert_allclose(report.product, np.ones((2, 2)))

    def test_permutation_products(self):
        """The swap and its square both have zeros"""
        swap = [[0, 1], [1, 0]]
        report = check_feasibility(BridgeProblem.from_kernel(
            swap, 1, [0.5, 0.5], [0.5, 0.5]))
        self.assertFalse(report.feasible)
        self.assertEqual(report.zero_entries, [(0, 0), (1, 1)])
        report = check_feasibility(BridgeProblem.from_kernel(
            swap, 2, [0.5, 0.5], [0.5, 0.5]))
        self.assertFalse(report.feasible)
        assert_allclose(report.product, np.eye(2))
        self.assertEqual(report.zero_entries, [(0, 1), (1, 0)])

    def test_problem_validation(self):
        """Bad horizons, dimensions and prior laws are rejected"""
        self.assertRaises(ValueError, BridgeProblem, [], [1], [1])
        self.assertRaises(ValueError, BridgeProblem.from_kernel, UNIFORM, 0,
                          [0.5, 0.5], [0.5, 0.5])
        self.assertRaises(ValueError, BridgeProblem, [UNIFORM], [0.5, 0.5],
                          [1.0])
        self.assertRaises(ValueError, BridgeProblem, [np.eye(3)],
                          [0.5, 0.5], [0.5, 0.5])
        self.assertRaises(ValueError, BridgeProblem, [UNIFORM], [0.5, 0.5],
                          [0.5, 0.5], mu0=[1.0, 0.0])
        self.assertRaises(ValueError, BridgeProblem, [UNIFORM], [0.6, 0.5],
                          [0.5, 0.5])


class SolveTests(TestCase):
    """Tests of the Sinkhorn solve on worked examples"""

    def test_constant_row_prior(self):
        """Uniform prior steered from [0.5, 0.5] to [0.75, 0.25]"""
        prob = BridgeProblem.from_kernel(UNIFORM, 1, [0.5, 0.5],
                                         [0.75, 0.25])
        pair, sol = solve(prob)
        assert_allclose(sol.policy[0], [[0.75, 0.25], [0.75, 0.25]],
                        atol=1e-12)
        self.assertAlmostEqual(sol.objective, 0.130812, places=6)
        assert_allclose(sol.flow[1], [0.75, 0.25], atol=1e-12)
        self.assertEqual(sol.iterations, 2)
        self.assertLessEqual(sol.residual, 1e-10)

    def test_prior_already_matching(self):
        """Matching marginals return the prior with zero cost"""
        m = np.array([[0.9, 0.1], [0.3, 0.7]])
        nu0 = np.array([0.2, 0.8])
        nuN = m.T.dot(m.T.dot(nu0))
        prob = BridgeProblem.from_kernel(m, 2, nu0, nuN)
        _, sol = solve(prob)
        for policy in sol.policy:
            assert_allclose(policy, m, atol=1e-12)
        self.assertAlmostEqual(sol.objective, 0.0, places=12)

    def test_infeasible_support(self):
        """A final marginal the prior cannot reach raises"""
        prob = BridgeProblem.from_kernel([[0.5, 0.5], [0, 1]], 1, [0, 1],
                                         [1, 0])
        self.assertRaises(InfeasibleSupportError, solve, prob)

    def test_infeasible_dead_rows(self):
        """Mass on a state without outgoing paths raises before iterating"""
        prob = BridgeProblem.from_kernel([[0, 0], [0, 1]], 1, [0.5, 0.5],
                                         [0, 1])
        self.assertRaises(InfeasibleSupportError, solve, prob)

    def test_nonconvergence(self):
        """One sweep is not enough for the worked example"""
        prob = BridgeProblem.from_kernel(UNIFORM, 1, [0.5, 0.5],
                                         [0.75, 0.25])
        with self.assertRaises(NonConvergenceError) as ctx:
            solve(prob, max_iters=1)
        self.assertEqual(ctx.exception.iterations, 1)
        self.assertAlmostEqual(ctx.exception.residual, 0.5)

    def test_incompatible_marginals_do_not_converge(self):
        """The swap cannot move [0.3, 0.7] to itself"""
        prob = BridgeProblem.from_kernel([[0, 1], [1, 0]], 1, [0.3, 0.7],
                                         [0.3, 0.7])
        self.assertRaises(NonConvergenceError, solve, prob, max_iters=500)

    def test_strict_positivity_gate(self):
        """Zeros in G pass leniently but fail in strict mode"""
        prob = BridgeProblem.from_kernel([[0, 1], [1, 0]], 1, [0.5, 0.5],
                                         [0.5, 0.5])
        _, sol = solve(prob)
        assert_allclose(sol.policy[0], [[0, 1], [1, 0]])
        self.assertRaises(InfeasibleSupportError, solve, prob, strict=True)

    def test_bad_settings(self):
        """Non-positive tol and max_iters are rejected"""
        prob = BridgeProblem.from_kernel(UNIFORM, 1, [0.5, 0.5], [0.5, 0.5])
        self.assertRaises(ValueError, solve, prob, tol=0)
        self.assertRaises(ValueError, solve, prob, max_iters=0)

    def test_trace(self):
        """The trace has one residual per sweep"""
        prob = BridgeProblem.from_kernel(UNIFORM, 1, [0.5, 0.5],
                                         [0.75, 0.25])
        _, sol = solve(prob, trace=True)
        self.assertEqual([i for i, _ in sol.trace], [1, 2])
        self.assertAlmostEqual(sol.trace[0][1], 0.5)
        _, sol = solve(prob)
        self.assertIsNone(sol.trace)

    def test_time_varying_kernels(self):
        """Different kernels per step keep support and hit nu_N"""
        kernels = [[[0.6, 0.4, 0], [0, 0.5, 0.5], [0.2, 0, 0.8]],
                   [[0.1, 0.9, 0], [0.3, 0.3, 0.4], [0, 0.5, 0.5]]]
        prob = BridgeProblem(kernels, [0.2, 0.3, 0.5], [0.5, 0.25, 0.25])
        _, sol = solve(prob)
        assert_allclose(sol.flow[-1], [0.5, 0.25, 0.25], atol=1e-10)
        for policy, m in zip(sol.policy, prob.kernels):
            assert_array_equal(policy[m == 0], 0.0)
            assert_allclose(policy.sum(axis=1), 1.0, atol=1e-12)

    def test_full_objective_matches_path_divergence(self):
        """With a prior initial law the full cost is the path divergence"""
        m = np.array([[0.7, 0.3], [0.4, 0.6]])
        mu0 = np.array([0.4, 0.6])
        prob = BridgeProblem.from_kernel(m, 3, [0.9, 0.1], [0.2, 0.8],
                                         mu0=mu0)
        _, sol = solve(prob)
        prior = PathMeasure(mu0, [m] * 3)
        self.assertAlmostEqual(sol.full_objective,
                               path_relative_entropy(sol.path_measure(),
                                                     prior), places=10)
        self.assertAlmostEqual(sum(sol.step_costs), sol.objective)


class SchroedingerSystemTests(TestCase):
    """Properties of the potentials on random instances"""

    def setUp(self):
        self.rng = np.random.default_rng(2)

    def random_problem(self, n, horizon):
        kernels = [random_stochastic(self.rng, n) for _ in range(horizon)]
        return BridgeProblem(kernels, random_distribution(self.rng, n),
                             random_distribution(self.rng, n))

    def test_residuals(self):
        """Harmonic, co-harmonic and both couplings hold"""
        for _ in range(50):
            prob = self.random_problem(int(self.rng.integers(2, 5)),
                                       int(self.rng.integers(1, 4)))
            pair, sol = solve(prob)
            r = schroedinger_residuals(pair, prob)
            self.assertLessEqual(r.harmonic, 1e-12)
            self.assertLessEqual(r.coharmonic, 1e-12)
            self.assertLessEqual(r.initial_coupling, 1e-9)
            self.assertLessEqual(r.final_coupling, 1e-9)
            self.assertTrue(all(np.all(p > 0) for p in pair.phi))

    def test_marginal_factorization(self):
        """phi(t) o phihat(t) is the propagated flow at every t"""
        for _ in range(50):
            prob = self.random_problem(3, 3)
            pair, sol = solve(prob)
            for product, p in zip(pair.marginals(), sol.flow):
                self.assertLessEqual(np.abs(product - p).sum(), 1e-9)
            self.assertEqual(np.abs(sol.flow[0] - prob.nu0).sum(), 0.0)

    def test_ray_invariance(self):
        """Rescaling the pair along its ray leaves the policy unchanged"""
        prob = self.random_problem(3, 2)
        pair, sol = solve(prob)
        for c in (1e-3, 1.0, 1e3):
            policy = assemble_policy(pair.rescaled(c), prob.kernels)
            for a, b in zip(policy, sol.policy):
                assert_allclose(a, b, rtol=0, atol=1e-14)
        self.assertRaises(ValueError, pair.rescaled, 0)

    def test_optimality_one_step(self):
        """Solver cost is at most the grid minimum, N = 1"""
        for _ in range(100):
            prob = self.random_problem(2, 1)
            _, sol = solve(prob)
            grid = one_step_minimum(prob.nu0, prob.nuN, prob.kernels[0])
            self.assertLessEqual(sol.objective, grid + 1e-4)
            self.assertLessEqual(np.abs(sol.flow[-1] - prob.nuN).sum(),
                                 1e-10)

    def test_optimality_two_steps(self):
        """Solver cost is at most the grid minimum over midpoints, N = 2"""
        for _ in range(20):
            prob = self.random_problem(2, 2)
            _, sol = solve(prob)
            best = np.inf
            for q0 in np.linspace(0.005, 0.995, 100):
                q = np.array([q0, 1 - q0])
                best = min(best,
                           one_step_minimum(prob.nu0, q, prob.kernels[0],
                                            2001) +
                           one_step_minimum(q, prob.nuN, prob.kernels[1],
                                            2001))
            self.assertLessEqual(sol.objective, best + 1e-4)


class PolicyTests(TestCase):
    """Tests of assemble_policy and marginal_flow"""

    def test_constant_potential(self):
        """phi = 1 on a stochastic prior returns the prior"""
        m = np.array([[0.2, 0.8], [0.6, 0.4]])
        pair = SchroedingerPair([np.ones(2), np.ones(2)],
                                [np.array([0.5, 0.5]),
                                 m.T.dot([0.5, 0.5])])
        assert_allclose(assemble_policy(pair, [m])[0], m)

    def test_zero_potential(self):
        """phi vanishing where mass sits raises"""
        pair = SchroedingerPair([np.array([0.0, 1.0]), np.ones(2)],
                                [np.ones(2), np.ones(2)])
        self.assertRaises(ZeroPotentialError, assemble_policy, pair,
                          [UNIFORM], initial=[0.5, 0.5])
        # without an initial law the mass is phi(0) o phihat(0)
        assemble_policy(pair, [UNIFORM])

    def test_dead_row_falls_back_to_prior(self):
        """A massless state with phi = 0 takes the normalized prior row"""
        pair = SchroedingerPair([np.array([0.0, 1.0]), np.ones(2)],
                                [np.array([0.0, 1.0]), np.ones(2)])
        policy = assemble_policy(pair, [[[2.0, 2.0], [0.5, 0.5]]])[0]
        assert_allclose(policy[0], [0.5, 0.5])

    def test_length_mismatch(self):
        """Potentials must cover one more time than there are kernels"""
        pair = SchroedingerPair([np.ones(2)], [np.ones(2)])
        self.assertRaises(ValueError, assemble_policy, pair, [UNIFORM])

    def test_marginal_flow(self):
        """Identity, swap and constant-row policies"""
        flow = marginal_flow([0.3, 0.7], [np.eye(2)] * 3)
        for p in flow:
            assert_allclose(p, [0.3, 0.7])
        flow = marginal_flow([1, 0], [[[0, 1], [1, 0]]] * 3)
        assert_allclose(flow, [[1, 0], [0, 1], [1, 0], [0, 1]])
        flow = marginal_flow([0.5, 0.5], [[[0.75, 0.25], [0.75, 0.25]]])
        assert_allclose(flow[1], [0.75, 0.25])
        self.assertRaises(ValueError, marginal_flow, [0.5, 0.5],
                          [np.eye(3)])

    def test_scaled_pair(self):
        """Per-step scales divide the quotient"""
        pair = SchroedingerPair([np.ones(2), np.ones(2)],
                                [np.ones(2), np.ones(2)], scales=[4.0])
        assert_allclose(assemble_policy(pair, [[[2.0, 2.0], [2.0, 2.0]]])[0],
                        UNIFORM)
        self.assertRaises(ValueError, SchroedingerPair, [np.ones(2)] * 2,
                          [np.ones(2)] * 2, scales=[0.0])
        self.assertRaises(ValueError, SchroedingerPair, [np.ones(2)] * 2,
                          [np.ones(2)] * 2, scales=[1.0, 1.0])


class LongHorizonTests(TestCase):
    """Long horizons with priors that are not row-stochastic"""

    def test_scaled_prior(self):
        """c M has the bridge of M, with the cost shifted by N log c"""
        m = np.array([[0.9, 0.1], [0.3, 0.7]])
        _, base = solve(BridgeProblem.from_kernel(m, 400, [0.5, 0.5],
                                                  [0.8, 0.2]))
        for c in (1e-3, 10.0):
            pair, sol = solve(BridgeProblem.from_kernel(c * m, 400,
                                                        [0.5, 0.5],
                                                        [0.8, 0.2]))
            for a, b in zip(sol.policy, base.policy):
                assert_allclose(a, b, rtol=0, atol=1e-10)
            assert_allclose(sol.flow[-1], [0.8, 0.2], rtol=0, atol=1e-9)
            self.assertAlmostEqual(sol.objective,
                                   base.objective - 400 * np.log(c),
                                   delta=1e-6)
            for p in pair.phi + pair.phihat:
                self.assertTrue(np.all(np.isfinite(p)))
            self.assertTrue(np.all(pair.phi[0] > 0))

    def test_all_ones_prior(self):
        """An adjacency prior on the complete graph with self-loops"""
        prob = BridgeProblem.from_kernel(np.ones((3, 3)), 700,
                                         [0.2, 0.3, 0.5], [0.6, 0.3, 0.1])
        pair, sol = solve(prob)
        assert_allclose(sol.flow[-1], [0.6, 0.3, 0.1], rtol=0, atol=1e-9)
        for kernel in sol.policy:
            assert_allclose(kernel.sum(axis=1), np.ones(3))
        r = schroedinger_residuals(pair, prob)
        self.assertLessEqual(r.harmonic, 1e-12)
        self.assertLessEqual(r.coharmonic, 1e-12)
        assert_allclose(pair.scales, np.full(700, 3.0))


if __name__ == '__main__':
    main()
