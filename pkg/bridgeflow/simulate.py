#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------

"""
Monte-Carlo checks of path measures and stationary kernels
==========================================================

Paths are drawn by inverse-CDF sampling, one vectorized draw per time step
for all paths at once, from a seeded ``numpy.random.Generator``. Row order
of every CDF is the state order, so a seed fixes the report bit for bit.
"""

import numpy as np

from bridgeflow.graph_core import (as_distribution, as_nonneg_matrix,
                                   is_stochastic)


class NonStochasticKernelError(ValueError):
    pass


class SampleReport(object):
    """Empirical one-time marginals of sampled paths and their L1 errors

    l1_errors[t] is ||empirical_marginals[t] - p_t||_1 against the exact
    propagated flow p_t.
    """

    def __init__(self, num_paths, empirical_marginals, l1_errors, seed,
                 generator):
        self.num_paths = num_paths
        self.empirical_marginals = empirical_marginals
        self.l1_errors = l1_errors
        self.seed = seed
        self.generator = generator

    def to_dict(self):
        return {'num_paths': self.num_paths,
                'empirical_marginals': [m.tolist()
                                        for m in self.empirical_marginals],
                'l1_errors': list(self.l1_errors),
                'seed': self.seed,
                'generator': self.generator}


def _check_count(count):
    if int(count) != count or count < 1:
        raise ValueError("Sample count must be a positive integer, got %r"
                         % (count,))
    return int(count)


def _row_cdfs(kernel):
    cdf = np.cumsum(kernel, axis=1)
    return cdf / cdf[:, -1:]


def _draw(cdf, states, rng):
    """Next state of every path: the first column whose CDF exceeds u"""
    u = rng.random(states.shape[0])
    return (u[:, None] >= cdf[states]).sum(axis=1)


def _check_kernel(kernel, t=None):
    if not is_stochastic(kernel, atol=1e-10):
        where = "" if t is None else " at step %d" % t
        raise NonStochasticKernelError("Kernel%s is not row-stochastic."
                                       % where)


def sample_paths(measure, count, seed=0):
    """Samples count paths of a probability PathMeasure

    Returns a SampleReport comparing the empirical marginal at every time
    with measure.marginals(). Raises NonStochasticKernelError when a kernel
    is not row-stochastic.
    """
    count = _check_count(count)
    initial = as_distribution(measure.initial, atol=1e-10)
    for t, kernel in enumerate(measure.kernels):
        _check_kernel(kernel, t)
    n = measure.n
    rng = np.random.default_rng(seed)

    states = _draw(_row_cdfs(initial[None, :]),
                   np.zeros(count, dtype=int), rng)
    empirical = [np.bincount(states, minlength=n) / count]
    for kernel in measure.kernels:
        states = _draw(_row_cdfs(kernel), states, rng)
        empirical.append(np.bincount(states, minlength=n) / count)

    exact = measure.marginals()
    errors = [float(np.abs(e - p).sum()) for e, p in zip(empirical, exact)]
    return SampleReport(count, empirical, errors, seed,
                        type(rng.bit_generator).__name__)


def empirical_flux(kernel, stat, count, seed=0):
    """Empirical edge frequencies of stationary one-step pairs (x, x')

    x is drawn from stat and x' from kernel[x]; entry (i, j) of the result
    is the fraction of pairs equal to (i, j), estimating stat(i) k_ij.
    """
    count = _check_count(count)
    kernel = as_nonneg_matrix(kernel)
    stat = as_distribution(stat, atol=1e-10)
    if stat.shape[0] != kernel.shape[0]:
        raise ValueError("Distribution has dimension %d, kernel has %d."
                         % (stat.shape[0], kernel.shape[0]))
    _check_kernel(kernel)
    n = kernel.shape[0]
    rng = np.random.default_rng(seed)
    x = _draw(_row_cdfs(stat[None, :]), np.zeros(count, dtype=int), rng)
    y = _draw(_row_cdfs(kernel), x, rng)
    pairs = np.bincount(x * n + y, minlength=n * n)
    return (pairs / count).reshape(n, n)
