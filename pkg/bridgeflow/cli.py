#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------

"""
Command-line interface
======================

``bridgeflow <subcommand> --in problem.json [--out result.json]`` reads a
JSON problem description, runs the matching solver and writes a JSON
result document. Subcommands: ``bridge``, ``stationary``, ``cool fast``,
``cool asymptotic``, ``check`` and ``simulate``.

Exit status: 0 success, 1 I/O or validation failure, 2 solver
non-convergence, 3 infeasible problem.

Problem documents share these fields:

n
    number of vertices
edges
    list of [i, j] pairs
weights
    one nonnegative weight per edge, in the order of ``edges``
matrix
    dense n x n prior, as a list of rows
options
    object with any of tol, max_iters, seed, strict, trace; command-line
    flags take precedence
"""

import argparse
import json
import logging
import sys
import warnings
from os import environ

import numpy as np

from bridgeflow import __version__
from bridgeflow.cooling import (CoolingCheckError, CoolingPlan, EnergyModel,
                                asymptotic_cool, boltzmann, fast_cool,
                                metropolis)
from bridgeflow.entropy import PathMeasure
from bridgeflow.finite_bridge import (DEFAULT_MAX_ITERS, DEFAULT_TOL,
                                      BridgeProblem, InfeasibleSupportError,
                                      NonConvergenceError, ZeroPotentialError,
                                      check_feasibility,
                                      schroedinger_residuals, solve)
from bridgeflow.graph_core import (Graph, adjacency, is_aperiodic,
                                   is_fully_indecomposable, is_indecomposable,
                                   is_stochastic, is_strongly_connected,
                                   period, uniform_proposal)
from bridgeflow.simulate import empirical_flux, sample_paths
from bridgeflow.stationary_bridge import (NotFullyIndecomposableError,
                                          ReducibleKernelError,
                                          StationaryProblem, ZeroRowError,
                                          solve_stationary,
                                          verify_reversibility_transfer)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NONCONVERGENCE = 2
EXIT_INFEASIBLE = 3

KINDS = ('finite_bridge', 'stationary', 'cool_fast', 'cool_asymptotic',
         'check', 'simulate')

_GRAPH_FIELDS = frozenset(['kind', 'n', 'edges', 'options'])
_FIELDS = {
    'finite_bridge': _GRAPH_FIELDS | set(['weights', 'matrix', 'kernels',
                                          'horizon', 'nu0', 'nuN', 'mu0']),
    'stationary': _GRAPH_FIELDS | set(['weights', 'matrix', 'target']),
    'cool_fast': _GRAPH_FIELDS | set(['energies', 'kT', 'kT_eff',
                                      'proposal', 'prior', 'horizon',
                                      'nu0']),
    'cool_asymptotic': _GRAPH_FIELDS | set(['energies', 'kT', 'kT_eff',
                                            'proposal', 'prior']),
    'check': _GRAPH_FIELDS | set(['weights', 'matrix', 'horizon']),
    'simulate': _GRAPH_FIELDS | set(['weights', 'matrix', 'kernels',
                                     'horizon', 'initial', 'target',
                                     'count']),
}
_OPTION_FIELDS = ('tol', 'max_iters', 'seed', 'strict', 'trace')

DEFAULT_COUNT = 10000


class SpecError(Exception):
    """A problem document was rejected

    diagnostics is a list of (pointer, message) pairs, pointer being a JSON
    pointer to the offending field ("" for the whole document).
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super(SpecError, self).__init__(
            "; ".join("%s: %s" % (p or '/', m) for p, m in self.diagnostics))


class ParseError(SpecError):
    pass


class ValidationError(SpecError):
    pass


class ProblemSpec(object):
    """A validated problem document

    kind: one of KINDS
    n: dimension
    graph: Graph or None
    values: validated numbers, vectors and matrices keyed by field
    options: solver options found in the document
    """

    def __init__(self, kind, n, graph, values, options):
        self.kind = kind
        self.n = n
        self.graph = graph
        self.values = values
        self.options = options


class _Reader(object):
    """Collects diagnostics while pulling typed values out of a document"""

    def __init__(self, doc):
        self.doc = doc
        self.diagnostics = []

    def error(self, pointer, message):
        self.diagnostics.append((pointer, message))

    def number(self, value, pointer, positive=False, nonnegative=False):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.error(pointer, "expected a number")
            return None
        value = float(value)
        if not np.isfinite(value):
            self.error(pointer, "must be finite")
            return None
        if positive and value <= 0:
            self.error(pointer, "must be positive")
            return None
        if nonnegative and value < 0:
            self.error(pointer, "negative weight %r" % value)
            return None
        return value

    def integer(self, value, pointer, minimum):
        if isinstance(value, bool) or not isinstance(value, int):
            self.error(pointer, "expected an integer")
            return None
        if value < minimum:
            self.error(pointer, "must be at least %d" % minimum)
            return None
        return value

    def flag(self, value, pointer):
        if not isinstance(value, bool):
            self.error(pointer, "expected true or false")
            return None
        return value

    def vector(self, value, pointer, n, nonnegative=True):
        if not isinstance(value, list):
            self.error(pointer, "expected an array")
            return None
        if len(value) != n:
            self.error(pointer, "expected %d entries, got %d"
                       % (n, len(value)))
            return None
        entries = [self.number(v, "%s/%d" % (pointer, i),
                               nonnegative=nonnegative)
                   for i, v in enumerate(value)]
        if any(e is None for e in entries):
            return None
        return np.array(entries)

    def distribution(self, value, pointer, n, positive=False):
        weights = self.vector(value, pointer, n)
        if weights is None:
            return None
        if abs(weights.sum() - 1.0) > 1e-12:
            self.error(pointer, "not a probability vector (sums to %r)"
                       % float(weights.sum()))
            return None
        if positive and np.any(weights <= 0):
            self.error(pointer, "must be strictly positive")
            return None
        return weights

    def matrix(self, value, pointer, n):
        if not isinstance(value, list) or len(value) != n:
            self.error(pointer, "expected an array of %d rows" % n)
            return None
        rows = [self.vector(row, "%s/%d" % (pointer, i), n)
                for i, row in enumerate(value)]
        if any(r is None for r in rows):
            return None
        return np.array(rows)


def _infer_dimension(reader, doc):
    if 'n' in doc:
        return reader.integer(doc['n'], '/n', 1)
    for key in ('matrix', 'energies'):
        if isinstance(doc.get(key), list) and doc[key]:
            return len(doc[key])
    kernels = doc.get('kernels')
    if isinstance(kernels, list) and kernels and isinstance(kernels[0], list):
        return len(kernels[0])
    reader.error('/n', "missing dimension n")
    return None


def _read_graph(reader, doc, n):
    if 'edges' not in doc:
        return None
    edges = doc['edges']
    if not isinstance(edges, list):
        reader.error('/edges', "expected an array of [i, j] pairs")
        return None
    pairs, seen, ok = [], set(), True
    for k, edge in enumerate(edges):
        pointer = '/edges/%d' % k
        if (not isinstance(edge, list) or len(edge) != 2 or
                not all(isinstance(v, int) and not isinstance(v, bool)
                        for v in edge)):
            reader.error(pointer, "expected an [i, j] pair of integers")
            ok = False
            continue
        i, j = edge
        if not (0 <= i < n and 0 <= j < n):
            reader.error(pointer, "endpoint outside [0, %d)" % n)
            ok = False
        elif (i, j) in seen:
            reader.error(pointer, "duplicate edge")
            ok = False
        seen.add((i, j))
        pairs.append((i, j))
    return Graph(n, pairs) if ok else None


def _read_prior(reader, doc, n, graph, required=True):
    """Single prior matrix from 'weights' (per edge) or 'matrix'"""
    given = [k for k in ('weights', 'matrix', 'kernels') if k in doc]
    if len(given) > 1:
        reader.error('/' + given[1], "give only one of %s"
                     % ", ".join(given))
        return None
    if 'weights' in doc:
        if 'edges' not in doc:
            reader.error('/weights', "weights need an edges list")
            return None
        weights = doc['weights']
        if not isinstance(weights, list) or len(weights) != len(doc['edges']):
            reader.error('/weights', "expected one weight per edge")
            return None
        values = [reader.number(w, '/weights/%d' % k, nonnegative=True)
                  for k, w in enumerate(weights)]
        if graph is None or any(v is None for v in values):
            return None
        m = np.zeros((n, n))
        for (i, j), v in zip(doc['edges'], values):
            m[i, j] = v
        return m
    if 'matrix' in doc:
        m = reader.matrix(doc['matrix'], '/matrix', n)
        if m is not None and graph is not None:
            for i, j in zip(*np.nonzero(m)):
                if (int(i), int(j)) not in graph.edges:
                    reader.error('/matrix/%d/%d' % (i, j),
                                 "weight on a pair that is not an edge")
                    return None
        return m
    if required:
        reader.error('/matrix', "missing prior: give weights or matrix")
    return None


def _read_kernels(reader, doc, n, graph):
    """Prior kernel sequence from 'kernels', or one prior times horizon"""
    if 'kernels' in doc:
        for key in ('weights', 'matrix'):
            if key in doc:
                reader.error('/' + key, "give only one of kernels, %s"
                             % key)
        kernels = doc['kernels']
        if not isinstance(kernels, list) or not kernels:
            reader.error('/kernels', "expected a non-empty array of "
                         "matrices")
            return None
        out = [reader.matrix(k, '/kernels/%d' % t, n)
               for t, k in enumerate(kernels)]
        if 'horizon' in doc and doc['horizon'] != len(kernels):
            reader.error('/horizon', "does not match the %d kernels given"
                         % len(kernels))
        return None if any(k is None for k in out) else out
    prior = _read_prior(reader, doc, n, graph)
    if 'horizon' not in doc:
        reader.error('/horizon', "missing horizon")
        return None
    horizon = reader.integer(doc['horizon'], '/horizon', 1)
    if prior is None or horizon is None:
        return None
    return [prior] * horizon


def _read_options(reader, doc):
    options = doc.get('options', {})
    if not isinstance(options, dict):
        reader.error('/options', "expected an object")
        return {}
    out = {}
    for key, value in sorted(options.items()):
        pointer = '/options/%s' % key
        if key not in _OPTION_FIELDS:
            reader.error(pointer, "unknown field")
        elif key == 'tol':
            out[key] = reader.number(value, pointer, positive=True)
        elif key == 'max_iters':
            out[key] = reader.integer(value, pointer, 1)
        elif key == 'seed':
            out[key] = reader.integer(value, pointer, 0)
        else:
            out[key] = reader.flag(value, pointer)
    return out


def _read_energy_model(reader, doc, n, graph, values):
    energies = reader.vector(doc.get('energies'), '/energies', n,
                             nonnegative=False)
    for key in ('kT', 'kT_eff'):
        if key not in doc:
            reader.error('/' + key, "missing temperature")
        else:
            values[key] = reader.number(doc[key], '/' + key, positive=True)
    if (values.get('kT') is not None and values.get('kT_eff') is not None and
            values['kT_eff'] > values['kT']):
        reader.error('/kT_eff', "must not exceed kT")
    values['energies'] = energies
    proposal = doc.get('proposal', 'uniform')
    if proposal == 'uniform':
        if graph is None:
            graph = Graph(n, [(i, j) for i in range(n) for j in range(n)])
        try:
            values['proposal'] = np.array(uniform_proposal(graph))
        except ValueError as e:
            reader.error('/edges', str(e))
    else:
        values['proposal'] = reader.matrix(proposal, '/proposal', n)
    if 'prior' in doc:
        values['prior'] = reader.matrix(doc['prior'], '/prior', n)


def parse_spec(text, kind=None):
    """Parses and validates a JSON problem document

    text: the document
    kind: expected kind (from the subcommand); when None the document's
     own "kind" field decides

    Returns a ProblemSpec. Raises ParseError for malformed JSON or a
    document that is not an object, ValidationError with every problem
    found otherwise.
    """
    try:
        doc = json.loads(text)
    except ValueError as e:
        raise ParseError([('', "invalid JSON: %s" % e)])
    if not isinstance(doc, dict):
        raise ParseError([('', "expected a JSON object")])

    reader = _Reader(doc)
    declared = doc.get('kind')
    if declared is not None and declared not in KINDS:
        raise ValidationError([('/kind', "unknown kind %r" % (declared,))])
    if kind is None:
        kind = declared
    if kind is None:
        raise ValidationError([('/kind', "missing problem kind")])
    if kind not in KINDS:
        raise ValueError("Unknown problem kind %r." % (kind,))
    if declared is not None and declared != kind:
        reader.error('/kind', "document is a %s problem, not %s"
                     % (declared, kind))
    for key in sorted(doc):
        if key not in _FIELDS[kind]:
            reader.error('/%s' % key, "unknown field")

    options = _read_options(reader, doc)
    n = _infer_dimension(reader, doc)
    if n is None:
        raise ValidationError(reader.diagnostics)
    graph = _read_graph(reader, doc, n)
    values = {}

    if kind == 'finite_bridge':
        values['kernels'] = _read_kernels(reader, doc, n, graph)
        for key in ('nu0', 'nuN'):
            values[key] = reader.distribution(doc.get(key), '/' + key, n)
        if 'mu0' in doc:
            values['mu0'] = reader.vector(doc['mu0'], '/mu0', n)
    elif kind == 'stationary':
        values['prior'] = _read_prior(reader, doc, n, graph)
        values['target'] = reader.distribution(doc.get('target'), '/target',
                                               n, positive=True)
    elif kind in ('cool_fast', 'cool_asymptotic'):
        _read_energy_model(reader, doc, n, graph, values)
        if kind == 'cool_fast':
            values['horizon'] = reader.integer(doc.get('horizon'),
                                               '/horizon', 1)
            if 'nu0' in doc:
                values['nu0'] = reader.distribution(doc['nu0'], '/nu0', n)
    elif kind == 'check':
        if graph is None and not ('weights' in doc or 'matrix' in doc):
            reader.error('/edges', "give edges or a matrix to check")
        values['prior'] = _read_prior(reader, doc, n, graph, required=False)
        if 'horizon' in doc:
            values['horizon'] = reader.integer(doc['horizon'], '/horizon', 1)
    elif kind == 'simulate':
        if 'initial' not in doc and 'target' not in doc:
            reader.error('/initial', "give initial (paths) or target "
                         "(flux)")
        if 'initial' in doc:
            values['kernels'] = _read_kernels(reader, doc, n, graph)
            values['initial'] = reader.distribution(doc['initial'],
                                                    '/initial', n)
        if 'target' in doc:
            if 'kernels' in doc:
                reader.error('/target', "flux needs a single matrix prior")
            else:
                values['prior'] = _read_prior(reader, doc, n, graph)
            values['target'] = reader.distribution(doc['target'],
                                                   '/target', n)
        values['count'] = reader.integer(doc.get('count', DEFAULT_COUNT),
                                         '/count', 1)

    if reader.diagnostics:
        raise ValidationError(reader.diagnostics)
    return ProblemSpec(kind, n, graph, values, options)


def _settings(spec, overrides):
    settings = {'tol': DEFAULT_TOL, 'max_iters': DEFAULT_MAX_ITERS,
                'seed': 0, 'strict': False, 'trace': False}
    settings.update(spec.options)
    settings.update((k, v) for k, v in (overrides or {}).items()
                    if v is not None)
    return settings


def _matrices(ms):
    return [np.asarray(m).tolist() for m in ms]


def _run_finite_bridge(spec, settings):
    v = spec.values
    prob = BridgeProblem(v['kernels'], v['nu0'], v['nuN'], mu0=v.get('mu0'),
                         graph=spec.graph)
    report = check_feasibility(prob)
    pair, sol = solve(prob, tol=settings['tol'],
                      max_iters=settings['max_iters'],
                      trace=settings['trace'], strict=settings['strict'])
    residuals = schroedinger_residuals(pair, prob)
    doc = {'policy': _matrices(sol.policy), 'flow': _matrices(sol.flow),
           'objective': sol.objective, 'step_costs': list(sol.step_costs),
           'iterations': sol.iterations, 'residual': sol.residual,
           'feasibility': {'positive': report.feasible,
                           'zero_entries': report.zero_entries},
           'schroedinger_residuals': dict(residuals._asdict())}
    if sol.full_objective is not None:
        doc['full_objective'] = sol.full_objective
    if sol.trace is not None:
        doc['trace'] = sol.trace
    return doc


def _stationary_document(sol):
    p = sol.potentials
    return {'kernel': sol.kernel.tolist(), 'objective': sol.objective,
            'iterations': sol.iterations,
            'invariance_residual': sol.invariance_residual,
            'reversibility_residual': sol.reversibility_residual,
            'reversible': sol.reversible,
            'potentials': {'phi0': p.phi0.tolist(), 'phi1': p.phi1.tolist(),
                           'phihat0': p.phihat0.tolist(),
                           'phihat1': p.phihat1.tolist()}}


def _run_stationary(spec, settings):
    prob = StationaryProblem(spec.values['prior'], spec.values['target'],
                             graph=spec.graph)
    sol = solve_stationary(prob, tol=settings['tol'],
                           max_iters=settings['max_iters'],
                           strict=settings['strict'])
    doc = _stationary_document(sol)
    if is_stochastic(prob.prior, atol=1e-10):
        # a diagnostic only; its failure leaves the solve's status alone
        try:
            report = verify_reversibility_transfer(prob, sol)
        except ReducibleKernelError as e:
            logger.info("Reversibility check skipped: %s", e)
            doc['reversibility_transfer'] = {'status': 'Unavailable',
                                             'message': str(e)}
        else:
            doc['reversibility_transfer'] = {
                'status': report.status,
                'prior_residual': report.prior_residual,
                'solution_residual': report.solution_residual}
    return doc


def _cooling_inputs(spec, horizon=None):
    v = spec.values
    model = EnergyModel(v['energies'], v['kT'])
    plan = CoolingPlan(v['kT'], v['kT_eff'], v['proposal'], horizon=horizon,
                       graph=spec.graph)
    prior = v.get('prior')
    if prior is None:
        prior = metropolis(model, plan.proposal)
    return model, plan, prior


def _run_cool_fast(spec, settings):
    model, plan, prior = _cooling_inputs(spec, spec.values['horizon'])
    target = boltzmann(model.at(plan.effective_kT))
    report = check_feasibility(BridgeProblem.from_kernel(
        prior, plan.horizon, target, target))
    sol = fast_cool(model, plan, nu0=spec.values.get('nu0'), prior=prior,
                    tol=settings['tol'], max_iters=settings['max_iters'],
                    trace=settings['trace'])
    doc = {'prior': prior.tolist(), 'target': target.tolist(),
           'policy': _matrices(sol.policy), 'flow': _matrices(sol.flow),
           'objective': sol.objective, 'iterations': sol.iterations,
           'residual': sol.residual,
           'feasibility': {'positive': report.feasible,
                           'zero_entries': report.zero_entries}}
    if sol.trace is not None:
        doc['trace'] = sol.trace
    return doc


def _run_cool_asymptotic(spec, settings):
    model, plan, prior = _cooling_inputs(spec)
    sol = asymptotic_cool(model, plan, prior=prior, tol=settings['tol'],
                          max_iters=settings['max_iters'],
                          strict=settings['strict'])
    doc = _stationary_document(sol)
    doc['prior'] = prior.tolist()
    doc['target'] = boltzmann(model.at(plan.effective_kT)).tolist()
    return doc


def _run_check(spec, settings):
    prior = spec.values.get('prior')
    graph = spec.graph
    if graph is None:
        graph = Graph.from_adjacency(prior)
    matrix = prior if prior is not None else adjacency(graph)
    connected = is_strongly_connected(graph)
    doc = {'n': graph.n, 'edges': len(graph.edges),
           'strongly_connected': connected,
           'period': period(graph) if connected else None,
           'aperiodic': is_aperiodic(graph) if connected else None,
           'symmetric': graph.is_symmetric(),
           'all_self_loops': graph.has_all_self_loops(),
           'indecomposable': is_indecomposable(matrix),
           'fully_indecomposable': is_fully_indecomposable(matrix)}
    if 'horizon' in spec.values:
        uniform = np.full(graph.n, 1.0 / graph.n)
        report = check_feasibility(BridgeProblem.from_kernel(
            matrix, spec.values['horizon'], uniform, uniform))
        doc['feasibility'] = {'horizon': spec.values['horizon'],
                              'positive': report.feasible,
                              'zero_entries': report.zero_entries}
    return doc


def _run_simulate(spec, settings):
    v = spec.values
    doc = {}
    if 'initial' in v:
        measure = PathMeasure(v['initial'], v['kernels'], graph=spec.graph)
        doc['paths'] = sample_paths(measure, v['count'],
                                    seed=settings['seed']).to_dict()
    if 'target' in v:
        doc['flux'] = empirical_flux(v['prior'], v['target'], v['count'],
                                     seed=settings['seed']).tolist()
        doc['seed'] = settings['seed']
    return doc


_RUNNERS = {
    'finite_bridge': _run_finite_bridge,
    'stationary': _run_stationary,
    'cool_fast': _run_cool_fast,
    'cool_asymptotic': _run_cool_asymptotic,
    'check': _run_check,
    'simulate': _run_simulate,
}


def run(spec, options=None):
    """Dispatches a ProblemSpec to its solver

    options: command-line overrides (tol, max_iters, seed, strict, trace);
     None values are ignored

    Returns (exit_code, document). The document always carries
    schema_version, kind and status; failures add a message and, for
    non-convergence, the iteration count and final residual.
    """
    settings = _settings(spec, options)
    doc = {'schema_version': SCHEMA_VERSION, 'kind': spec.kind}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always')
        try:
            doc.update(_RUNNERS[spec.kind](spec, settings))
            doc['status'] = 'ok'
            code = EXIT_OK
        except NonConvergenceError as e:
            doc.update(status='non_convergence', message=str(e),
                       iterations=e.iterations, residual=e.residual)
            if e.trace is not None:
                doc['trace'] = e.trace
            code = EXIT_NONCONVERGENCE
        except CoolingCheckError as e:
            doc.update(status='check_failed', message=str(e))
            code = EXIT_NONCONVERGENCE
        except (InfeasibleSupportError, ZeroRowError, ZeroPotentialError,
                NotFullyIndecomposableError) as e:
            doc.update(status='infeasible', message=str(e),
                       error=type(e).__name__)
            code = EXIT_INFEASIBLE
        except ValueError as e:
            doc.update(status='invalid', message=str(e))
            code = EXIT_INVALID
    for w in caught:
        logger.warning("%s", w.message)
    if caught:
        doc['warnings'] = [str(w.message) for w in caught]
    if code != EXIT_OK:
        logger.error("%s", doc['message'])
    return code, doc


def dumps(document):
    """Byte-stable JSON: sorted keys, shortest round-trip floats"""
    return json.dumps(document, sort_keys=True, indent=2) + '\n'


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with EXIT_INVALID; status 2 means non-convergence"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, "ERROR: %s\n" % message)


def _add_common_options(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument('--in', dest='input', metavar='PATH',
                        default=default,
                        help="problem JSON (default: standard input)")
    parser.add_argument('--out', dest='output', metavar='PATH',
                        default=default,
                        help="result JSON (default: standard output)")
    parser.add_argument('--tol', type=float, default=default,
                        help="L1 tolerance on the boundary marginals "
                             "(default %g)" % DEFAULT_TOL)
    parser.add_argument('--max-iters', dest='max_iters', type=int,
                        default=default,
                        help="maximum Sinkhorn sweeps (default %d)"
                             % DEFAULT_MAX_ITERS)
    parser.add_argument('--seed', type=int, default=default,
                        help="random seed for simulate (default 0)")
    parser.add_argument('--strict', action='store_const', const=True,
                        default=default,
                        help="refuse problems failing the structural "
                             "sufficient conditions")
    parser.add_argument('--trace', action='store_const', const=True,
                        default=default,
                        help="record the convergence trace")
    parser.add_argument('-v', '--verbose', action='count',
                        default=argparse.SUPPRESS if suppress else 0,
                        help="more logging (repeat for debug)")
    parser.add_argument('--log-level', dest='log_level', default=default,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help="logging level (default from "
                             "BRIDGEFLOW_LOG_LEVEL, else WARNING)")


def build_parser():
    parser = _ArgumentParser(
        prog='bridgeflow',
        description="Optimal steering of Markovian network flows.")
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    _add_common_options(parser, suppress=False)
    common = _ArgumentParser(add_help=False)
    _add_common_options(common, suppress=True)

    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True
    commands.add_parser('bridge', parents=[common],
                        help="finite-horizon Schroedinger bridge")
    commands.add_parser('stationary', parents=[common],
                        help="stationary bridge to a target invariant law")
    cool = commands.add_parser('cool', help="cooling to a lower temperature")
    modes = cool.add_subparsers(dest='mode', metavar='mode')
    modes.required = True
    modes.add_parser('fast', parents=[common],
                     help="finite-horizon cooling")
    modes.add_parser('asymptotic', parents=[common],
                     help="stationary cooling")
    commands.add_parser('check', parents=[common],
                        help="structural predicates and feasibility")
    commands.add_parser('simulate', parents=[common],
                        help="Monte-Carlo check of marginals and fluxes")
    return parser


def _kind(args):
    if args.command == 'bridge':
        return 'finite_bridge'
    if args.command == 'cool':
        return 'cool_' + args.mode
    return args.command


def _configure_logging(args):
    level = args.log_level or environ.get('BRIDGEFLOW_LOG_LEVEL', 'WARNING')
    level = getattr(logging, str(level).upper(), logging.WARNING)
    if args.verbose:
        level = min(level, logging.DEBUG if args.verbose > 1
                    else logging.INFO)
    logging.basicConfig(format='%(levelname)s: %(message)s', level=level,
                        stream=sys.stderr, force=True)


def main(argv=None):
    """Entry point of the bridgeflow executable; returns the exit status"""
    args = build_parser().parse_args(argv)
    _configure_logging(args)

    try:
        if args.input in (None, '-'):
            text = sys.stdin.read()
        else:
            with open(args.input) as f:
                text = f.read()
    except (IOError, OSError) as e:
        logger.error("cannot read problem: %s", e)
        return EXIT_INVALID

    try:
        spec = parse_spec(text, kind=_kind(args))
    except SpecError as e:
        for pointer, message in e.diagnostics:
            logger.error("%s: %s", pointer or '/', message)
        return EXIT_INVALID

    code, document = run(spec, {'tol': args.tol,
                                'max_iters': args.max_iters,
                                'seed': args.seed, 'strict': args.strict,
                                'trace': args.trace})
    try:
        if args.output is None:
            sys.stdout.write(dumps(document))
        else:
            with open(args.output, 'w') as f:
                f.write(dumps(document))
    except (IOError, OSError) as e:
        logger.error("cannot write result: %s", e)
        return EXIT_INVALID
    return code


if __name__ == '__main__':
    sys.exit(main())
