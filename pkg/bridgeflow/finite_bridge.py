#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------

"""
Finite-horizon Schroedinger bridges
===================================

Given prior kernels M(0..N-1) and endpoint marginals nu_0, nu_N, find the
Markov law closest in relative entropy to the prior with those marginals.
The optimal policy is pi*_ij(t) = m_ij(t) phi(t+1, j) / phi(t, i), where
phi is space-time harmonic (phi(t) = M(t) phi(t+1)), phihat is co-harmonic
(phihat(t+1) = M(t)' phihat(t)) and phi o phihat matches nu_0 at t = 0 and
nu_N at t = N. The pair is found by alternating rescaling of the two
boundary conditions (Fortet-IPF-Sinkhorn).
"""

import logging
from collections import namedtuple
from functools import reduce

import numpy as np

from bridgeflow.entropy import (PathMeasure, relative_entropy,
                                weighted_kernel_divergence)
from bridgeflow.graph_core import as_distribution, as_nonneg_matrix

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERS = 100000


class NonConvergenceError(Exception):
    """The boundary residual stayed above tolerance after max_iters sweeps"""

    def __init__(self, iterations, residual, trace=None):
        self.iterations = iterations
        self.residual = residual
        self.trace = trace
        super(NonConvergenceError, self).__init__(
            "Schroedinger system did not converge after %d iterations "
            "(residual %r)." % (iterations, residual))


class InfeasibleSupportError(Exception):
    pass


class ZeroPotentialError(Exception):
    pass


FeasibilityReport = namedtuple('FeasibilityReport',
                               ['product', 'feasible', 'zero_entries'])

SchroedingerResiduals = namedtuple(
    'SchroedingerResiduals',
    ['harmonic', 'coharmonic', 'initial_coupling', 'final_coupling'])


class BridgeProblem(object):
    """Prior kernels M(0..N-1) plus endpoint marginals nu_0 and nu_N

    kernels: sequence of n x n nonnegative matrices, one per step
    nu0, nuN: probability vectors
    mu0: optional prior initial law, positive on every state; only used
     to report the full path-space divergence
    """

    def __init__(self, kernels, nu0, nuN, mu0=None, graph=None):
        self.kernels = tuple(as_nonneg_matrix(k, graph=graph)
                             for k in kernels)
        if not self.kernels:
            raise ValueError("Horizon N must be at least 1.")
        self.nu0 = as_distribution(nu0)
        self.nuN = as_distribution(nuN)
        n = self.nu0.shape[0]
        if self.nuN.shape[0] != n:
            raise ValueError("Marginals differ in dimension.")
        for t, k in enumerate(self.kernels):
            if k.shape[0] != n:
                raise ValueError("Kernel %d has dimension %d, expected %d."
                                 % (t, k.shape[0], n))
        if mu0 is not None:
            mu0 = as_distribution(mu0, probability=False)
            if mu0.shape[0] != n or np.any(mu0 <= 0):
                raise ValueError("Prior initial law mu0 must be positive on "
                                 "every state.")
        self.mu0 = mu0

    @classmethod
    def from_kernel(cls, m, horizon, nu0, nuN, mu0=None, graph=None):
        """Problem whose prior repeats the single kernel m for N steps"""
        if int(horizon) != horizon or horizon < 1:
            raise ValueError("Horizon N must be a positive integer.")
        return cls([m] * int(horizon), nu0, nuN, mu0=mu0, graph=graph)

    @property
    def n(self):
        return self.nu0.shape[0]

    @property
    def horizon(self):
        return len(self.kernels)


class SchroedingerPair(object):
    """Potentials phi(0..N) and phihat(0..N), unique up to (c phi, phihat/c)

    Each time slice may be stored on its own scale: scales[t] links
    consecutive slices through phi(t) scales[t] = M(t) phi(t+1) and
    phihat(t+1) scales[t] = M(t)' phihat(t). The products
    phi(t) o phihat(t) and the policy do not depend on the scales, which
    default to 1 (the unscaled recursions).
    """

    def __init__(self, phi, phihat, scales=None):
        if len(phi) != len(phihat):
            raise ValueError("phi and phihat must cover the same times.")
        self.phi = tuple(np.asarray(p, dtype=float) for p in phi)
        self.phihat = tuple(np.asarray(p, dtype=float) for p in phihat)
        if scales is None:
            scales = np.ones(max(len(self.phi) - 1, 0))
        self.scales = np.asarray(scales, dtype=float)
        if self.scales.shape != (max(len(self.phi) - 1, 0),):
            raise ValueError("Need one scale per step between potentials.")
        if np.any(self.scales <= 0):
            raise ValueError("Scales must be positive.")

    def rescaled(self, c):
        """Returns the pair (c phi, phihat / c) on the same ray"""
        if c <= 0:
            raise ValueError("Scale must be positive.")
        return SchroedingerPair([c * p for p in self.phi],
                                [p / c for p in self.phihat],
                                scales=self.scales)

    def marginals(self):
        return [p * q for p, q in zip(self.phi, self.phihat)]


class BridgeSolution(object):
    """Optimal policy pi*(t), its marginal flow and diagnostics

    objective is the fluid-dynamic cost sum_t sum_x p_t(x) D(pi*_x.||m_x.),
    step_costs its per-step terms; full_objective adds D(nu_0 || mu_0)
    when the problem carries a prior initial law. residual is
    ||p_N - nu_N||_1 and trace a list of (iteration, residual) pairs when
    requested.
    """

    def __init__(self, policy, flow, step_costs, iterations, residual,
                 full_objective=None, trace=None):
        self.policy = tuple(policy)
        self.flow = tuple(flow)
        self.step_costs = tuple(step_costs)
        self.objective = float(sum(self.step_costs))
        self.full_objective = full_objective
        self.iterations = iterations
        self.residual = residual
        self.trace = trace

    def path_measure(self):
        return PathMeasure(self.flow[0], self.policy)


def _pattern_product(kernels):
    patterns = [(k != 0).astype(float) for k in kernels]
    return reduce(lambda a, b: (a.dot(b) > 0).astype(float), patterns) > 0


def check_feasibility(prob):
    """Reports whether G = M(0) M(1) ... M(N-1) has all entries positive

    Positivity of G is sufficient for existence and uniqueness (up to the
    ray) of the Schroedinger system. Zero entries are located on the
    nonzero pattern so underflow in the numeric product does not count.
    Returns FeasibilityReport(product, feasible, zero_entries) where
    zero_entries lists (i, j) pairs with G_ij = 0.
    """
    n = prob.n
    for k in prob.kernels:
        if k.shape != (n, n):
            raise ValueError("Kernel dimension does not match the marginals.")
    product = reduce(np.dot, prob.kernels)
    zeros = np.argwhere(~_pattern_product(prob.kernels))
    zero_entries = [(int(i), int(j)) for i, j in zeros]
    return FeasibilityReport(product, not zero_entries, zero_entries)


def _divide(nu, denominator, which):
    """nu / denominator with 0/0 := 0; mass over a zero is infeasible"""
    stuck = (denominator == 0) & (nu > 0)
    if np.any(stuck):
        raise InfeasibleSupportError(
            "The %s marginal puts mass on state(s) %s that the prior cannot "
            "connect to the other endpoint." % (which,
                                                np.nonzero(stuck)[0].tolist()))
    out = np.zeros_like(nu)
    mask = denominator > 0
    out[mask] = nu[mask] / denominator[mask]
    return out


def _sweep(kernels, nu0, phi_end):
    # every phi(t) is kept at unit L1 norm; phihat takes the same factors
    horizon = len(kernels)
    phi = [None] * (horizon + 1)
    scales = np.ones(horizon)
    phi[horizon] = phi_end
    for t in reversed(range(horizon)):
        step = kernels[t].dot(phi[t + 1])
        total = step.sum()
        if total > 0:
            scales[t] = total
        phi[t] = step / scales[t]
    phihat = [_divide(nu0, phi[0], 'initial')]
    for t in range(horizon):
        phihat.append(kernels[t].T.dot(phihat[t]) / scales[t])
    return phi, phihat, scales


def _check_endpoint_support(prob):
    reach = _pattern_product(prob.kernels)
    dead_rows = ~reach.any(axis=1) & (prob.nu0 > 0)
    if np.any(dead_rows):
        raise InfeasibleSupportError(
            "Initial marginal charges state(s) %s from which no path of "
            "length %d exists." % (np.nonzero(dead_rows)[0].tolist(),
                                   prob.horizon))
    dead_cols = ~reach.any(axis=0) & (prob.nuN > 0)
    if np.any(dead_cols):
        raise InfeasibleSupportError(
            "Final marginal charges state(s) %s that no path of length %d "
            "reaches." % (np.nonzero(dead_cols)[0].tolist(), prob.horizon))


def solve(prob, tol=DEFAULT_TOL, max_iters=DEFAULT_MAX_ITERS, trace=False,
          strict=False):
    """Solves the Schroedinger system of prob; returns (pair, solution)

    prob: BridgeProblem
    tol: L1 tolerance on the final boundary coupling phi(N) o phihat(N) =
     nu_N (the initial coupling holds exactly by construction)
    max_iters: maximum number of backward/forward sweeps
    trace: if True, record (iteration, residual) pairs on the solution
    strict: if True, refuse problems whose product G has zero entries;
     otherwise iterate anyway, since compatible marginals may still
     converge

    Each sweep runs phi backward from phi(N), sets phihat(0) =
    nu_0 / phi(0), runs phihat forward and then rescales phi(N) =
    nu_N / phihat(N), normalized to unit L1 norm. Every phi(t) is
    renormalized on the way back so long horizons and priors that are
    not row-stochastic neither overflow nor underflow; the factors are
    kept on the returned pair.

    Raises InfeasibleSupportError when a marginal charges states the prior
    cannot connect, NonConvergenceError when tol is not met.
    """
    if not tol > 0:
        raise ValueError("Tolerance must be positive.")
    if int(max_iters) != max_iters or max_iters < 1:
        raise ValueError("max_iters must be a positive integer.")

    report = check_feasibility(prob)
    if not report.feasible:
        if strict:
            raise InfeasibleSupportError(
                "Product of the prior kernels has %d zero entries."
                % len(report.zero_entries))
        logger.info("Positivity condition on G fails at %d entries; "
                    "iterating anyway.", len(report.zero_entries))
    _check_endpoint_support(prob)

    history = [] if trace else None
    phi_end = np.full(prob.n, 1.0 / prob.n)
    residual = np.inf
    for iteration in range(1, int(max_iters) + 1):
        phi, phihat, scales = _sweep(prob.kernels, prob.nu0, phi_end)
        residual = float(np.abs(phi[-1] * phihat[-1] - prob.nuN).sum())
        if trace:
            history.append((iteration, residual))
        if residual <= tol:
            break
        phi_end = _divide(prob.nuN, phihat[-1], 'final')
        phi_end = phi_end / phi_end.sum()
    else:
        raise NonConvergenceError(int(max_iters), residual, trace=history)
    logger.debug("Schroedinger system converged after %d iterations "
                 "(residual %g).", iteration, residual)

    pair = SchroedingerPair(phi, phihat, scales=scales)
    policy = assemble_policy(pair, prob.kernels, initial=prob.nu0)
    flow = marginal_flow(prob.nu0, policy)
    step_costs = [weighted_kernel_divergence(pi, m, p)
                  for pi, m, p in zip(policy, prob.kernels, flow)]
    full_objective = None
    if prob.mu0 is not None:
        full_objective = (sum(step_costs) +
                          relative_entropy(prob.nu0, prob.mu0))
    solution = BridgeSolution(
        policy, flow, step_costs, iteration,
        float(np.abs(flow[-1] - prob.nuN).sum()),
        full_objective=full_objective, trace=history)
    return pair, solution


def assemble_policy(pair, kernels, initial=None):
    """Returns pi*(t)_ij = m_ij(t) phi(t+1, j) / phi(t, i) for every step

    On a scaled pair the quotient is also divided by scales[t].

    Rows are stochastic by the backward recursion. A state with
    phi(t, i) = 0 should carry no mass on the flow p_t propagated from
    initial (default phi(0) o phihat(0)); its row falls back to the
    normalized prior row (all zeros when the prior row is empty).
    Raises ZeroPotentialError when such a state does carry mass.
    """
    kernels = [np.asarray(k, dtype=float) for k in kernels]
    if len(pair.phi) != len(kernels) + 1:
        raise ValueError("Potentials must cover N + 1 times for N kernels.")
    if initial is None:
        mass = pair.phi[0] * pair.phihat[0]
    else:
        mass = np.asarray(initial, dtype=float)
    policy = []
    for t, m in enumerate(kernels):
        phi_t, phi_next = pair.phi[t], pair.phi[t + 1]
        dead = phi_t <= 0
        if np.any(dead & (mass > 0)):
            raise ZeroPotentialError(
                "phi(%d, .) vanishes on state(s) %s that carry mass."
                % (t, np.nonzero(dead & (mass > 0))[0].tolist()))
        safe = np.where(dead, 1.0, phi_t)
        kernel = m * phi_next[None, :] / (pair.scales[t] * safe[:, None])
        if np.any(dead):
            prior_rows = m[dead]
            sums = prior_rows.sum(axis=1, keepdims=True)
            kernel[dead] = np.divide(prior_rows, sums,
                                     out=np.zeros_like(prior_rows),
                                     where=sums > 0)
        policy.append(as_nonneg_matrix(kernel))
        mass = kernel.T.dot(mass)
    return policy


def marginal_flow(initial, policy):
    """Returns p_0..p_N with p_0 = initial and p_t+1 = Pi(t)' p_t"""
    flow = [np.array(as_distribution(initial))]
    for t, kernel in enumerate(policy):
        kernel = np.asarray(kernel, dtype=float)
        if kernel.shape != (flow[-1].shape[0],) * 2:
            raise ValueError("Policy step %d has shape %r, expected %r."
                             % (t, kernel.shape, (flow[-1].shape[0],) * 2))
        flow.append(kernel.T.dot(flow[-1]))
    return flow


def schroedinger_residuals(pair, prob):
    """Max-norm residuals of both recursions and L1 boundary couplings

    The recursions are taken on the stored scale of each time slice.
    """
    s = pair.scales
    harmonic = max(np.abs(pair.phi[t] - m.dot(pair.phi[t + 1]) / s[t]).max()
                   for t, m in enumerate(prob.kernels))
    coharmonic = max(
        np.abs(pair.phihat[t + 1] - m.T.dot(pair.phihat[t]) / s[t]).max()
        for t, m in enumerate(prob.kernels))
    initial = np.abs(pair.phi[0] * pair.phihat[0] - prob.nu0).sum()
    final = np.abs(pair.phi[-1] * pair.phihat[-1] - prob.nuN).sum()
    return SchroedingerResiduals(float(harmonic), float(coharmonic),
                                 float(initial), float(final))
