#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------

"""
Cooling on networks
===================

Boltzmann laws pi_T(i) proportional to exp(-E_i/kT), Metropolis kernels
P(T) reversible with respect to them, and two ways of steering a chain to
the Boltzmann law of a lower effective temperature:

fast cooling
    a finite-horizon bridge from nu_0 to pi_Teff over N steps with prior
    P(T)
asymptotic cooling
    a stationary bridge with prior P(T) and target pi_Teff, whose kernel
    keeps pi_Teff invariant forever after
"""

import logging
from collections import namedtuple

import numpy as np

from bridgeflow.finite_bridge import (DEFAULT_MAX_ITERS, DEFAULT_TOL,
                                      BridgeProblem, marginal_flow, solve)
from bridgeflow.graph_core import (as_distribution, as_nonneg_matrix,
                                   is_indecomposable, is_stochastic,
                                   is_symmetric, uniform_proposal)
from bridgeflow.stationary_bridge import (PRIOR_REVERSIBILITY_TOL,
                                          StationaryProblem,
                                          check_reversibility,
                                          solve_stationary)

logger = logging.getLogger(__name__)

INVARIANCE_TOL = 1e-10
COOLED_REVERSIBILITY_TOL = 1e-9


class NotSymmetricError(ValueError):
    pass


class NotStochasticError(ValueError):
    pass


class CoolingCheckError(Exception):
    """The asymptotic kernel failed its invariance or reversibility check"""
    pass


CoolingSchedule = namedtuple('CoolingSchedule',
                             ['policy', 'flow', 'fast', 'stationary'])


class EnergyModel(object):
    """Energies E_i over the vertices at temperature kT (same units)"""

    def __init__(self, energies, kT):
        energies = np.array(energies, dtype=float)
        if energies.ndim != 1 or energies.shape[0] < 1:
            raise ValueError("Energies must be a non-empty vector.")
        if not np.all(np.isfinite(energies)):
            raise ValueError("Energies must be finite.")
        if not (np.isfinite(kT) and kT > 0):
            raise ValueError("Temperature kT must be positive, got %r" % kT)
        energies.setflags(write=False)
        self.energies = energies
        self.kT = float(kT)

    @property
    def n(self):
        return self.energies.shape[0]

    def at(self, kT):
        """Same energies at another temperature"""
        return EnergyModel(self.energies, kT)


class CoolingPlan(object):
    """Temperatures, proposal Q and (for fast cooling) the horizon N

    prior_kT: temperature of the prior P(T); None means the model's kT
    effective_kT: target temperature, at most prior_kT
    proposal: symmetric, row-stochastic, irreducible matrix Q
    horizon: number of steps for fast cooling
    """

    def __init__(self, prior_kT, effective_kT, proposal, horizon=None,
                 graph=None):
        if prior_kT is not None and not prior_kT > 0:
            raise ValueError("Prior temperature kT must be positive.")
        if not effective_kT > 0:
            raise ValueError("Effective temperature kT_eff must be "
                             "positive.")
        if prior_kT is not None and effective_kT > prior_kT:
            raise ValueError("Effective temperature kT_eff=%r exceeds the "
                             "prior temperature kT=%r."
                             % (effective_kT, prior_kT))
        if horizon is not None and (int(horizon) != horizon or horizon < 1):
            raise ValueError("Horizon N must be a positive integer.")
        proposal = as_nonneg_matrix(proposal, graph=graph)
        _check_proposal(proposal)
        if not is_indecomposable(proposal):
            raise ValueError("Proposal must be irreducible.")
        self.prior_kT = prior_kT
        self.effective_kT = float(effective_kT)
        self.proposal = proposal
        self.horizon = None if horizon is None else int(horizon)

    @classmethod
    def from_graph(cls, g, prior_kT, effective_kT, horizon=None):
        return cls(prior_kT, effective_kT, uniform_proposal(g),
                   horizon=horizon, graph=g)


def _check_proposal(q):
    if not is_symmetric(q, atol=1e-12):
        raise NotSymmetricError("Proposal matrix must be symmetric.")
    if not is_stochastic(q, atol=1e-12):
        raise NotStochasticError("Proposal matrix must be row-stochastic.")


def boltzmann(model):
    """Returns pi_T(i) = exp(-E_i/kT) / Z(T)

    Energies are shifted by their minimum first, which leaves the law
    unchanged and keeps the largest weight at exp(0) = 1.
    """
    shifted = model.energies - model.energies.min()
    weights = np.exp(-shifted / model.kT)
    return as_distribution(weights / weights.sum())


def metropolis(model, q):
    """Metropolis kernel of proposal q for the Boltzmann law of model

    Off-diagonal p_ij = q_ij min(exp((E_i - E_j)/kT), 1); the diagonal
    takes the rejected mass 1 - sum_{l != i} p_il.
    """
    q = as_nonneg_matrix(q)
    if q.shape[0] != model.n:
        raise ValueError("Proposal has dimension %d, model has %d states."
                         % (q.shape[0], model.n))
    _check_proposal(q)
    energies = model.energies
    exponent = np.minimum((energies[:, None] - energies[None, :]) / model.kT,
                          0.0)
    p = q * np.exp(exponent)
    np.fill_diagonal(p, 0.0)
    diagonal = 1.0 - p.sum(axis=1)
    if np.any(diagonal < -1e-12):
        raise NotStochasticError("Proposal rows exceed unit mass off the "
                                 "diagonal.")
    np.fill_diagonal(p, np.maximum(diagonal, 0.0))
    return as_nonneg_matrix(p)


def _prior_kernel(model, plan, prior):
    if plan.prior_kT is not None and not np.isclose(plan.prior_kT, model.kT):
        raise ValueError("Plan prior temperature %r does not match the "
                         "model temperature %r." % (plan.prior_kT, model.kT))
    if plan.effective_kT > model.kT:
        raise ValueError("Effective temperature kT_eff=%r exceeds kT=%r."
                         % (plan.effective_kT, model.kT))
    if prior is None:
        return metropolis(model, plan.proposal)
    return as_nonneg_matrix(prior)


def fast_cool(model, plan, nu0=None, prior=None, tol=DEFAULT_TOL,
              max_iters=DEFAULT_MAX_ITERS, trace=False):
    """Steers nu0 to the Boltzmann law at plan.effective_kT in N steps

    model: EnergyModel at the prior temperature
    plan: CoolingPlan with a horizon
    nu0: initial law, defaults to the Boltzmann law of model
    prior: prior kernel, defaults to metropolis(model, plan.proposal)

    Returns the BridgeSolution of the finite bridge with kernels P(T).
    """
    if plan.horizon is None:
        raise ValueError("Fast cooling needs a horizon N.")
    prior = _prior_kernel(model, plan, prior)
    if nu0 is None:
        nu0 = boltzmann(model)
    target = boltzmann(model.at(plan.effective_kT))
    prob = BridgeProblem.from_kernel(prior, plan.horizon, nu0, target)
    _, solution = solve(prob, tol=tol, max_iters=max_iters, trace=trace)
    return solution


def asymptotic_cool(model, plan, prior=None, tol=DEFAULT_TOL,
                    max_iters=DEFAULT_MAX_ITERS, strict=True):
    """Stationary kernel with prior P(T) and invariant law pi_Teff

    Checks the returned kernel leaves pi_Teff invariant (within 1e-10, or
    twice tol when that is looser) and,
    when the prior is reversible with respect to pi_T, that the kernel is
    reversible with respect to pi_Teff (within 1e-9). A failed check raises
    CoolingCheckError.
    """
    prior = _prior_kernel(model, plan, prior)
    target = boltzmann(model.at(plan.effective_kT))
    solution = solve_stationary(StationaryProblem(prior, target), tol=tol,
                                max_iters=max_iters, strict=strict)
    if solution.invariance_residual > max(INVARIANCE_TOL, 2 * tol):
        raise CoolingCheckError("Cooled kernel moves pi_Teff by %g in L1."
                                % solution.invariance_residual)
    prior_residual = check_reversibility(prior, boltzmann(model))
    if prior_residual <= PRIOR_REVERSIBILITY_TOL:
        if solution.reversibility_residual > COOLED_REVERSIBILITY_TOL:
            raise CoolingCheckError(
                "Reversible prior gave a cooled kernel with reversibility "
                "residual %g." % solution.reversibility_residual)
    else:
        logger.info("Prior is not reversible with respect to pi_T "
                    "(residual %g); reversibility not checked.",
                    prior_residual)
    return solution


def cool_pipeline(model, plan, nu0=None, extra_steps=50, prior=None,
                  tol=DEFAULT_TOL, max_iters=DEFAULT_MAX_ITERS):
    """Fast cooling over steps 0..N-1, then the asymptotic kernel from N on

    Returns CoolingSchedule(policy, flow, fast, stationary): the N +
    extra_steps kernels applied in turn, the marginal flow they produce
    from nu0, and the two underlying solutions.
    """
    if int(extra_steps) != extra_steps or extra_steps < 0:
        raise ValueError("extra_steps must be a nonnegative integer.")
    fast = fast_cool(model, plan, nu0=nu0, prior=prior, tol=tol,
                     max_iters=max_iters)
    stationary = asymptotic_cool(model, plan, prior=prior, tol=tol,
                                 max_iters=max_iters)
    tail = [stationary.kernel] * int(extra_steps)
    flow = list(fast.flow) + marginal_flow(fast.flow[-1], tail)[1:]
    return CoolingSchedule(list(fast.policy) + tail, flow, fast, stationary)
