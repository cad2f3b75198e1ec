#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------

"""
Stationary Schroedinger bridges
===============================

Infinite-horizon steering: among kernels Pi with target invariant law pi,
find the one minimizing the entropy rate sum_i pi(i) D(Pi_i. || m_i.)
relative to a time-invariant prior M. The problem reduces to a one-step
bridge with both marginals equal to pi, whose solution is
Pi* = Diag(phi_0)^-1 M Diag(phi_1).
"""

import logging
import warnings
from collections import namedtuple

import numpy as np
from scipy.linalg import svd

from bridgeflow.entropy import entropy_rate_objective
from bridgeflow.finite_bridge import (DEFAULT_MAX_ITERS, DEFAULT_TOL,
                                      BridgeProblem, InfeasibleSupportError,
                                      NonConvergenceError, SchroedingerPair,
                                      ZeroPotentialError, assemble_policy,
                                      solve)
from bridgeflow.graph_core import (adjacency, as_distribution,
                                   as_nonneg_matrix, is_fully_indecomposable,
                                   is_stochastic)

logger = logging.getLogger(__name__)

REVERSIBILITY_TOL = 1e-10
PRIOR_REVERSIBILITY_TOL = 1e-12
WITNESS_INVARIANCE_TOL = 1e-9


class NotFullyIndecomposableError(Exception):
    pass


class ZeroRowError(Exception):
    pass


class ReducibleKernelError(ValueError):
    pass


ReversibilityReport = namedtuple(
    'ReversibilityReport',
    ['status', 'prior_residual', 'solution_residual', 'mu'])

RandomWalk = namedtuple('RandomWalk', ['kernel', 'stationary'])


class StationaryProblem(object):
    """Time-invariant prior M and a strictly positive target law pi"""

    def __init__(self, prior, target, graph=None):
        self.prior = as_nonneg_matrix(prior, graph=graph)
        self.target = as_distribution(target)
        if self.target.shape[0] != self.prior.shape[0]:
            raise ValueError("Target has dimension %d, prior has %d."
                             % (self.target.shape[0], self.prior.shape[0]))
        if np.any(self.target <= 0):
            raise ValueError("Target distribution must be strictly positive.")

    @property
    def n(self):
        return self.target.shape[0]


class OneStepPotentials(object):
    def __init__(self, phi0, phi1, phihat0, phihat1):
        self.phi0 = np.asarray(phi0, dtype=float)
        self.phi1 = np.asarray(phi1, dtype=float)
        self.phihat0 = np.asarray(phihat0, dtype=float)
        self.phihat1 = np.asarray(phihat1, dtype=float)

    def rescaled(self, c):
        """Returns (c phi_0, c phi_1, phihat_0 / c, phihat_1 / c)"""
        if c <= 0:
            raise ValueError("Scale must be positive.")
        return OneStepPotentials(c * self.phi0, c * self.phi1,
                                 self.phihat0 / c, self.phihat1 / c)

    def as_pair(self):
        return SchroedingerPair([self.phi0, self.phi1],
                                [self.phihat0, self.phihat1])


class StationarySolution(object):
    """Optimal stationary kernel Pi* with invariance/reversibility residuals

    objective is the entropy-rate cost sum_i pi(i) D(Pi*_i. || m_i.).
    invariance_residual is ||Pi*' pi - pi||_1 and reversibility_residual
    max_ij |pi(i) Pi*_ij - pi(j) Pi*_ji|; reversible compares the latter
    with REVERSIBILITY_TOL.
    """

    def __init__(self, kernel, potentials, objective, target, iterations):
        self.kernel = kernel
        self.potentials = potentials
        self.objective = objective
        self.iterations = iterations
        self.invariance_residual = float(
            np.abs(kernel.T.dot(target) - target).sum())
        self.reversibility_residual = check_reversibility(kernel, target)
        self.reversible = self.reversibility_residual <= REVERSIBILITY_TOL


def stationary_kernel(prior, potentials):
    """Returns Diag(phi_0)^-1 M Diag(phi_1) for one-step potentials"""
    return assemble_policy(potentials.as_pair(), [prior])[0]


def solve_stationary(prob, tol=DEFAULT_TOL, max_iters=DEFAULT_MAX_ITERS,
                     strict=False):
    """Solves the stationary bridge of prob; returns a StationarySolution

    prob: StationaryProblem
    tol, max_iters: passed to the one-step Sinkhorn loop
    strict: if True, a prior that is not fully indecomposable raises
     NotFullyIndecomposableError; otherwise a RuntimeWarning is issued and
     the solve is attempted, since the condition is sufficient only

    Raises ZeroRowError when the prior has a state with no outgoing
    weight, NonConvergenceError when the one-step system does not settle.
    """
    empty = np.nonzero(prob.prior.sum(axis=1) == 0)[0]
    if empty.size:
        raise ZeroRowError("Prior has no outgoing weight from state(s) %s."
                           % empty.tolist())
    if not is_fully_indecomposable(prob.prior):
        msg = ("Prior is not fully indecomposable; a stationary bridge is "
               "not guaranteed to exist.")
        if strict:
            raise NotFullyIndecomposableError(msg)
        warnings.warn(msg, RuntimeWarning)

    bridge = BridgeProblem([prob.prior], prob.target, prob.target)
    pair, solution = solve(bridge, tol=tol, max_iters=max_iters)
    kernel = solution.policy[0]
    s = pair.scales[0]
    potentials = OneStepPotentials(s * pair.phi[0], pair.phi[1],
                                   pair.phihat[0] / s, pair.phihat[1])
    objective = entropy_rate_objective(kernel, prob.prior, prob.target)
    logger.debug("Stationary bridge solved in %d iterations, objective %g.",
                 solution.iterations, objective)
    return StationarySolution(kernel, potentials, objective, prob.target,
                              solution.iterations)


def check_reversibility(kernel, stat):
    """Returns max_ij |stat(i) k_ij - stat(j) k_ji|

    The residual of Diag(stat) K = K' Diag(stat); a kernel is deemed
    reversible with respect to stat when this is at most 1e-10.
    """
    kernel = np.asarray(kernel, dtype=float)
    stat = np.asarray(stat, dtype=float)
    if kernel.ndim != 2 or kernel.shape != (stat.shape[0],) * 2:
        raise ValueError("Kernel shape %r does not match distribution of "
                         "length %d." % (kernel.shape, stat.shape[0]))
    flux = stat[:, None] * kernel
    return float(np.abs(flux - flux.T).max())


def _gth_elimination(kernel):
    """Grassmann-Taksar-Heyman elimination; None on a zero pivot"""
    a = np.array(kernel, dtype=float)
    n = a.shape[0]
    for k in range(n - 1):
        pivot = a[k, k + 1:].sum()
        if pivot <= 0:
            return None
        a[k + 1:, k] /= pivot
        a[k + 1:, k + 1:] += np.outer(a[k + 1:, k], a[k, k + 1:])
    x = np.zeros(n)
    x[-1] = 1.0
    for k in range(n - 2, -1, -1):
        x[k] = x[k + 1:].dot(a[k + 1:, k])
    return x / x.sum()


def stationary_distribution(kernel):
    """Invariant law of a row-stochastic kernel

    Uses subtraction-free GTH elimination, accurate to relative precision
    in every entry. Chains with transient or closed subsets of states fall
    back to the null vector of K' - I from a singular value decomposition.
    Raises ReducibleKernelError when the invariant law is not unique.
    """
    kernel = as_nonneg_matrix(kernel)
    if not is_stochastic(kernel, atol=1e-10):
        raise ValueError("Kernel must be row-stochastic.")
    mu = _gth_elimination(kernel)
    if mu is not None:
        return as_distribution(mu)
    n = kernel.shape[0]
    _, sigma, vh = svd(kernel.T - np.eye(n))
    if n > 1 and sigma[-2] <= n * np.finfo(float).eps * max(sigma[0], 1.0):
        raise ReducibleKernelError(
            "Kernel has more than one invariant law; pass mu explicitly.")
    # the Perron vector has a single sign
    mu = np.abs(vh[-1])
    return as_distribution(mu / mu.sum())


def verify_reversibility_transfer(prob, sol, mu=None,
                                  atol=REVERSIBILITY_TOL):
    """Checks that a reversible prior yields a reversible optimal kernel

    When the prior M satisfies Diag(mu) M = M' Diag(mu) (within 1e-12), the
    stationary kernel Pi* must satisfy the same relation with respect to
    the target pi. mu defaults to the invariant law of M when M is
    row-stochastic; a non-stochastic prior needs an explicit mu.

    Returns ReversibilityReport(status, prior_residual, solution_residual,
    mu) with status one of 'Reversible', 'NotReversible' (the property
    fails, atol exceeded) or 'PriorNotReversible' (hypothesis does not
    hold; nothing is claimed about Pi*). A defaulted mu raises
    ReducibleKernelError when M has more than one invariant law.
    """
    if mu is None:
        if not is_stochastic(prob.prior, atol=1e-10):
            raise ValueError("A non-stochastic prior needs an explicit "
                             "reversing measure mu.")
        mu = stationary_distribution(prob.prior)
    mu = as_distribution(mu, probability=False)
    prior_residual = check_reversibility(prob.prior, mu)
    solution_residual = check_reversibility(sol.kernel, prob.target)
    if prior_residual > PRIOR_REVERSIBILITY_TOL:
        status = 'PriorNotReversible'
    elif solution_residual <= atol:
        status = 'Reversible'
    else:
        status = 'NotReversible'
        logger.warning("Reversible prior produced a kernel with "
                       "reversibility residual %g.", solution_residual)
    return ReversibilityReport(status, prior_residual, solution_residual, mu)


def max_entropy_rate_chain(g, target, tol=DEFAULT_TOL,
                           max_iters=DEFAULT_MAX_ITERS, strict=False):
    """Maximum-entropy-rate chain on g with invariant law target

    Solves the stationary bridge with the adjacency matrix as prior; since
    log a_ij = 0 on edges, the returned objective is minus the entropy
    rate of the chain.
    """
    prob = StationaryProblem(adjacency(g), target, graph=g)
    return solve_stationary(prob, tol=tol, max_iters=max_iters,
                            strict=strict)


def degree_random_walk(g):
    """Random walk pi_ij = a_ij / deg(i) on a symmetric graph

    Returns RandomWalk(kernel, stationary) where stationary is A 1
    normalized to a probability vector.
    """
    if not g.is_symmetric():
        raise ValueError("Degree random walk needs a symmetric graph.")
    a = np.array(adjacency(g))
    degrees = a.sum(axis=1)
    if np.any(degrees == 0):
        raise ZeroRowError("Vertex %s has no edges."
                           % np.nonzero(degrees == 0)[0].tolist())
    kernel = as_nonneg_matrix(a / degrees[:, None])
    return RandomWalk(kernel, as_distribution(degrees / degrees.sum()))


class ExistenceReport(object):
    """Whether some kernel on a graph has a given invariant law

    exists: a witness kernel was found (or the identity applies)
    certified: existence follows from a sufficient structural condition
     (all self-loops, or a fully indecomposable adjacency matrix) rather
     than from an empirical solve
    witness: a kernel with the target invariant, or None
    """

    def __init__(self, exists, certified, witness=None):
        self.exists = exists
        self.certified = certified
        self.witness = witness

    def __bool__(self):
        return self.exists

    __nonzero__ = __bool__

    def __repr__(self):
        return ("ExistenceReport(exists=%r, certified=%r)"
                % (self.exists, self.certified))


def invariant_distributions_exist(g, target, max_iters=10000):
    """Reports whether a stochastic kernel compatible with g leaves target
    invariant

    A fully indecomposable adjacency matrix certifies existence, so the
    report is positive even when the solve finds no witness in max_iters.
    """
    target = as_distribution(target)
    if target.shape[0] != g.n:
        raise ValueError("Target has dimension %d, graph has %d vertices."
                         % (target.shape[0], g.n))
    if np.any(target <= 0):
        raise ValueError("Target distribution must be strictly positive.")
    if g.has_all_self_loops():
        return ExistenceReport(True, True, as_nonneg_matrix(np.eye(g.n)))

    a = adjacency(g)
    certified = is_fully_indecomposable(a)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', RuntimeWarning)
            sol = solve_stationary(StationaryProblem(a, target),
                                   max_iters=max_iters)
    except (NonConvergenceError, InfeasibleSupportError, ZeroPotentialError,
            ZeroRowError) as e:
        if certified:
            logger.warning("Existence is certified but no witness kernel "
                           "was found: %s", e)
            return ExistenceReport(True, True)
        logger.debug("No invariant kernel found: %s", e)
        return ExistenceReport(False, False)
    if sol.invariance_residual > WITNESS_INVARIANCE_TOL:
        return ExistenceReport(certified, certified)
    return ExistenceReport(True, certified, sol.kernel)
