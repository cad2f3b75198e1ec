#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------

"""
Entropy functionals
===================

Relative entropy between distributions, transition kernels and Markovian
path measures, with the conventions 0 log 0 = 0, 0 log 0/0 = 0 and
p log p/0 = +inf (returned as ``numpy.inf``, never raised). Natural
logarithms throughout. The second argument need not be a probability
law, so divergences against unnormalized priors may be negative.
"""

from itertools import product
from math import log

import numpy as np
from scipy.special import entr, rel_entr

from bridgeflow.graph_core import (as_distribution, as_nonneg_matrix,
                                   is_stochastic)


class PathMeasure(object):
    """Markovian measure on paths (x_0, ..., x_N)

    The path (x_0..x_N) has mass initial(x_0) * prod_t kernels[t][x_t, x_t+1].
    Kernels may be general nonnegative matrices; probability measures have
    a probability initial law and row-stochastic kernels.
    """

    def __init__(self, initial, kernels, graph=None):
        self.initial = as_distribution(initial, probability=False)
        self.kernels = tuple(as_nonneg_matrix(k, graph=graph)
                             for k in kernels)
        if not self.kernels:
            raise ValueError("A path measure needs at least one kernel.")
        n = self.initial.shape[0]
        for t, k in enumerate(self.kernels):
            if k.shape[0] != n:
                raise ValueError("Kernel %d has dimension %d, expected %d."
                                 % (t, k.shape[0], n))

    @property
    def n(self):
        return self.initial.shape[0]

    @property
    def horizon(self):
        return len(self.kernels)

    def is_probability(self, atol=1e-10):
        return (abs(self.initial.sum() - 1.0) <= atol and
                all(is_stochastic(k, atol=atol) for k in self.kernels))

    def marginals(self):
        """Returns the one-time marginals p_0..p_N, p_t+1 = K(t)' p_t"""
        flow = [np.array(self.initial)]
        for k in self.kernels:
            flow.append(k.T.dot(flow[-1]))
        return flow


class EdgeDistribution(object):
    """Joint law p(i, j) of consecutive states, summing to 1"""

    def __init__(self, joint, atol=1e-12):
        joint = as_nonneg_matrix(joint)
        if abs(joint.sum() - 1.0) > atol:
            raise ValueError("Edge distribution sums to %r, not 1."
                             % float(joint.sum()))
        self.joint = joint

    def row_marginal(self):
        return self.joint.sum(axis=1)

    def column_marginal(self):
        return self.joint.sum(axis=0)


def weighted_kernel_divergence(pi, m, weights):
    """Returns sum_i weights(i) D(pi_i. || m_i.)

    Rows with zero weight are skipped, so an infinite row divergence only
    counts where the row carries mass. No stochasticity check is made.
    """
    pi, m, weights = np.asarray(pi), np.asarray(m), np.asarray(weights)
    rows = np.nonzero(weights > 0)[0]
    if rows.size == 0:
        return 0.0
    divergences = rel_entr(pi[rows], m[rows]).sum(axis=1)
    return float(np.sum(weights[rows] * divergences))


def relative_entropy(p, q):
    """Returns D(p || q) = sum_x p(x) log(p(x)/q(x))

    p, q: nonnegative vectors of equal length; q need not sum to one.
    Returns +inf when p charges a point q does not.
    """
    p = as_distribution(p, probability=False)
    q = as_distribution(q, probability=False)
    if p.shape != q.shape:
        raise ValueError("Dimension mismatch: %d vs %d."
                         % (p.shape[0], q.shape[0]))
    return float(np.sum(rel_entr(p, q)))


def path_relative_entropy(p, m):
    """Returns D(P || M) between two Markovian path measures

    Computed by the decomposition
        D(nu_0 || mu_0) + sum_t sum_x p_t(x) D(pi_x.(t) || m_x.(t))
    where p_t is the marginal flow of P. P must be a probability measure
    (the decomposition marginalizes its kernels); M may be any
    nonnegative Markovian measure.
    """
    if p.horizon != m.horizon or p.n != m.n:
        raise ValueError("Path measures differ in horizon or dimension.")
    if not p.is_probability():
        raise ValueError("The first path measure must be a probability "
                         "measure.")
    total = relative_entropy(p.initial, m.initial)
    if np.isinf(total):
        return total
    for p_t, pi, mk in zip(p.marginals(), p.kernels, m.kernels):
        total += weighted_kernel_divergence(pi, mk, p_t)
    return float(total)


def path_probability(measure, path):
    """Mass the measure assigns to one path (x_0, ..., x_N)"""
    if len(path) != measure.horizon + 1:
        raise ValueError("Path length %d does not match horizon %d."
                         % (len(path), measure.horizon))
    mass = measure.initial[path[0]]
    for t, k in enumerate(measure.kernels):
        mass *= k[path[t], path[t + 1]]
    return float(mass)


def path_sum_relative_entropy(p, m):
    """D(P || M) by exhaustive summation over all n^(N+1) paths

    Paths are visited in lexicographic order so the floating point result
    is reproducible. Exponential cost: only for small n and N.
    """
    if p.horizon != m.horizon or p.n != m.n:
        raise ValueError("Path measures differ in horizon or dimension.")
    total = 0.0
    for path in product(range(p.n), repeat=p.horizon + 1):
        p_mass = path_probability(p, path)
        if p_mass == 0:
            continue
        m_mass = path_probability(m, path)
        if m_mass == 0:
            return np.inf
        total += p_mass * log(p_mass / m_mass)
    return total


def entropy_rate_objective(pi, m, stat):
    """Returns sum_i D(pi_i. || m_i.) stat(i), the per-step stationary cost

    pi: row-stochastic kernel (within 1e-10)
    m: nonnegative prior kernel
    stat: probability vector weighting the rows
    """
    pi = as_nonneg_matrix(pi)
    m = as_nonneg_matrix(m)
    stat = as_distribution(stat)
    if pi.shape != m.shape or stat.shape[0] != pi.shape[0]:
        raise ValueError("Dimension mismatch between kernel, prior and "
                         "distribution.")
    if not is_stochastic(pi, atol=1e-10):
        raise ValueError("Kernel must be row-stochastic.")
    return weighted_kernel_divergence(pi, m, stat)


def edge_distribution(pi, stat):
    """Returns the EdgeDistribution p(i, j) = pi_ij stat(i)"""
    pi = as_nonneg_matrix(pi)
    stat = as_distribution(stat)
    return EdgeDistribution(stat[:, None] * pi)


def edge_identity_check(pi, m, stat, m0):
    """Returns (lhs, rhs) of the edge-distribution identity

    lhs = sum_ij p(i,j) log(p(i,j)/m(i,j)), p(i,j) = pi_ij stat(i),
          m(i,j) = m_ij m0(i)
    rhs = entropy_rate_objective(pi, m, stat) + D(stat || m0)

    Both sides are +inf on a support violation.
    """
    pi = as_nonneg_matrix(pi)
    m = as_nonneg_matrix(m)
    stat = as_distribution(stat)
    m0 = as_distribution(m0, probability=False)
    lhs = float(np.sum(rel_entr(stat[:, None] * pi, m0[:, None] * m)))
    rhs = entropy_rate_objective(pi, m, stat) + relative_entropy(stat, m0)
    if np.isinf(lhs) or np.isinf(rhs):
        return np.inf, np.inf
    return lhs, rhs


def entropy_rate(kernel, stat):
    """Shannon entropy rate -sum_i stat(i) sum_j p_ij log p_ij"""
    kernel = as_nonneg_matrix(kernel)
    stat = as_distribution(stat)
    return float(np.sum(stat * entr(kernel).sum(axis=1)))
