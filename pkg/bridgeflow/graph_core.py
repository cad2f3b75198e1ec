#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------

"""
Graph and matrix substrate
==========================

Directed graphs on the vertices 0..n-1, the nonnegative weight matrices
and distributions that live on them, and the structural predicates
(strong connectivity, period, indecomposability, full indecomposability)
the solvers rely on.

An entry of a matrix is structurally zero iff it is exactly 0.0; the
predicates here are combinatorial and never look at magnitudes.
"""

from collections import deque
from functools import reduce
from math import gcd

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import (connected_components,
                                  maximum_bipartite_matching)


class Graph(object):
    """Directed graph G = (X, E) with X = {0, ..., n-1}

    Instances are immutable: the edge set is stored as a frozenset of
    ordered (i, j) pairs.
    """

    def __init__(self, n, edges=()):
        if int(n) != n or n < 1:
            raise ValueError("Vertex count n must be a positive integer.")
        n = int(n)
        edge_set = set()
        for edge in edges:
            try:
                i, j = edge
            except (TypeError, ValueError):
                raise ValueError("Edges must be (i, j) pairs, got %r" % (edge,))
            if int(i) != i or int(j) != j:
                raise ValueError("Edge endpoints must be integers, got %r"
                                 % (edge,))
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError("Edge (%d, %d) has an endpoint outside "
                                 "[0, %d)." % (i, j, n))
            if (i, j) in edge_set:
                raise ValueError("Duplicate edge (%d, %d)." % (i, j))
            edge_set.add((i, j))
        self._n = n
        self._edges = frozenset(edge_set)

    @classmethod
    def from_adjacency(cls, matrix):
        """Returns the graph of the nonzero pattern of a square matrix"""
        matrix = np.asarray(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("Adjacency matrix must be square.")
        rows, cols = np.nonzero(matrix)
        return cls(matrix.shape[0], zip(rows.tolist(), cols.tolist()))

    @property
    def n(self):
        return self._n

    @property
    def edges(self):
        return self._edges

    def out_degrees(self):
        """Number of outgoing edges per vertex, self-loops included"""
        degrees = np.zeros(self._n, dtype=int)
        for i, _ in self._edges:
            degrees[i] += 1
        return degrees

    def is_symmetric(self):
        return all((j, i) in self._edges for i, j in self._edges)

    def has_all_self_loops(self):
        return all((i, i) in self._edges for i in range(self._n))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((self._n, self._edges))

    def __repr__(self):
        return "Graph(n=%d, edges=%r)" % (self._n, sorted(self._edges))


def as_nonneg_matrix(m, graph=None):
    """Returns a validated, read-only float copy of a nonnegative matrix

    m: square array-like of finite nonnegative weights m_ij
    graph: optional Graph; when given, the dimension must match and the
     support of m must lie within the graph's edges
    """
    arr = np.array(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError("Matrix must be square and non-empty, got shape %r"
                         % (arr.shape,))
    if not np.all(np.isfinite(arr)):
        raise ValueError("Matrix entries must be finite.")
    if np.any(arr < 0):
        raise ValueError("Matrix entries must be nonnegative.")
    if graph is not None:
        if graph.n != arr.shape[0]:
            raise ValueError("Matrix dimension %d does not match graph with "
                             "%d vertices." % (arr.shape[0], graph.n))
        for i, j in zip(*np.nonzero(arr)):
            if (int(i), int(j)) not in graph.edges:
                raise ValueError("Matrix has weight on (%d, %d), which is "
                                 "not an edge of the graph." % (i, j))
    arr.setflags(write=False)
    return arr


def as_distribution(weights, probability=True, atol=1e-12):
    """Returns a validated, read-only float copy of a distribution

    weights: 1-D array-like of finite nonnegative weights
    probability: if True the weights must also sum to 1 within atol
    """
    arr = np.array(weights, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError("Distribution must be a non-empty vector.")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Distribution weights must be finite.")
    if np.any(arr < 0):
        raise ValueError("Distribution weights must be nonnegative.")
    if probability and abs(arr.sum() - 1.0) > atol:
        raise ValueError("Weights sum to %r: not a probability vector."
                         % float(arr.sum()))
    arr.setflags(write=False)
    return arr


def is_stochastic(m, atol=1e-12):
    """True when m is nonnegative and every row sums to 1 within atol"""
    m = np.asarray(m, dtype=float)
    return bool(np.all(m >= 0) and
                np.all(np.abs(m.sum(axis=1) - 1.0) <= atol))


def is_symmetric(m, atol=0.0):
    m = np.asarray(m, dtype=float)
    return bool(np.all(np.abs(m - m.T) <= atol))


def adjacency(g):
    """Returns the 0/1 adjacency matrix A of g, a_ij = 1 iff (i, j) in E"""
    a = np.zeros((g.n, g.n))
    for i, j in g.edges:
        a[i, j] = 1.0
    return as_nonneg_matrix(a)


def _pattern_graph(m):
    return csr_matrix((np.asarray(m) != 0).astype(np.int8))


def strongly_connected_components(g):
    """Returns (count, labels) of the strongly connected components of g"""
    return connected_components(_pattern_graph(adjacency(g)), directed=True,
                                connection='strong')


def is_strongly_connected(g):
    """True iff every vertex reaches every other along directed edges"""
    count, _ = strongly_connected_components(g)
    return count == 1


def period(g):
    """Returns the gcd of all directed cycle lengths of g

    Uses breadth-first levels from vertex 0: for a strongly connected graph
    the period is the gcd of level(u) + 1 - level(v) over all edges (u, v).
    A graph without cycles (one vertex, no self-loop) has period 0.
    """
    if not is_strongly_connected(g):
        raise ValueError("Period is only defined for strongly connected "
                         "graphs.")
    successors = [[] for _ in range(g.n)]
    for i, j in sorted(g.edges):
        successors[i].append(j)
    level = [None] * g.n
    level[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in successors[u]:
            if level[v] is None:
                level[v] = level[u] + 1
                queue.append(v)
    return reduce(gcd, (abs(level[u] + 1 - level[v]) for u, v in g.edges), 0)


def is_aperiodic(g):
    """True iff the gcd of the directed cycle lengths of g is 1

    Raises ValueError when g is not strongly connected.
    """
    return period(g) == 1


def is_indecomposable(m):
    """True iff no simultaneous row/column permutation of m is block
    lower-triangular, i.e. the digraph of the nonzero pattern is strongly
    connected. A 1x1 matrix cannot be split and is always indecomposable.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("Matrix must be square.")
    if m.shape[0] == 1:
        return True
    count, _ = connected_components(_pattern_graph(m), directed=True,
                                    connection='strong')
    return count == 1


def _has_perfect_matching(pattern):
    matching = maximum_bipartite_matching(
        csr_matrix(pattern.astype(np.int8)), perm_type='column')
    return bool(np.all(matching >= 0))


def is_fully_indecomposable(m):
    """True iff no pair of permutations P, Q exposes a k x (n-k) zero block

    Tested through the first-order subpermanents: m (n >= 2) is fully
    indecomposable iff every (n-1) x (n-1) submatrix left by deleting one
    row and one column has a perfect matching on its nonzero pattern.
    For n = 1 the single entry must be positive.
    """
    pattern = np.asarray(m) != 0
    if pattern.ndim != 2 or pattern.shape[0] != pattern.shape[1]:
        raise ValueError("Matrix must be square.")
    n = pattern.shape[0]
    if n == 1:
        return bool(pattern[0, 0])
    # a row or column with fewer than two nonzeros leaves an empty line in
    # some minor
    if np.any(pattern.sum(axis=1) < 2) or np.any(pattern.sum(axis=0) < 2):
        return False
    if not _has_perfect_matching(pattern):
        return False
    for i in range(n):
        rows = np.delete(pattern, i, axis=0)
        for j in range(n):
            if not _has_perfect_matching(np.delete(rows, j, axis=1)):
                return False
    return True


def uniform_proposal(g):
    """Returns a symmetric row-stochastic proposal compatible with g

    q_ij = 1/d_max for every edge (i, j) with i != j, where d_max is the
    largest out-degree (self-loops counted); the remaining row mass sits on
    the diagonal. g must be symmetric, and every vertex left with mass on
    its diagonal must carry a self-loop.
    """
    if not g.is_symmetric():
        raise ValueError("A symmetric proposal needs a symmetric graph.")
    a = np.array(adjacency(g))
    d_max = a.sum(axis=1).max()
    if d_max == 0:
        raise ValueError("A proposal needs a graph with edges.")
    loops = np.diag(a) > 0
    np.fill_diagonal(a, 0.0)
    q = a / d_max
    rest = 1.0 - q.sum(axis=1)
    stuck = (rest > 1e-12) & ~loops
    if np.any(stuck):
        raise ValueError(
            "Vertex %s has fewer than %d neighbours and no self-loop; a "
            "uniform proposal would leave the graph."
            % (np.nonzero(stuck)[0].tolist(), int(d_max)))
    np.fill_diagonal(q, np.where(loops, rest, 0.0))
    return as_nonneg_matrix(q, graph=g)
