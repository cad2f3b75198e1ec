#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------

"""
Application controller for the bridgeflow executable
====================================================

Runs ``bridgeflow`` as an external process, for pipelines that keep each
solve in its own process or on another machine's PATH.
"""

import json
from os import close, remove
from os.path import exists
from tempfile import mkstemp

import collections
import collections.abc

# burrito 0.9.1 imports ``collections.Mapping``, removed in Python 3.10
if not hasattr(collections, 'Mapping'):
    collections.Mapping = collections.abc.Mapping

from burrito.parameters import FlagParameter, ValuedParameter
from burrito.util import CommandLineApplication, ResultPath

SUBCOMMANDS = ('bridge', 'stationary', 'cool fast', 'cool asymptotic',
               'check', 'simulate')


class BridgeFlow(CommandLineApplication):
    """bridgeflow application controller

    The subcommand is the input: it is appended after the parameters, so
    ``app('stationary')`` runs ``bridgeflow --in ... --out ... stationary``.
    """

    _command = 'bridgeflow'
    _parameters = {
        # problem JSON
        '--in': ValuedParameter('--', Name='in', Delimiter=' ', IsPath=True),
        # result JSON
        '--out': ValuedParameter('--', Name='out', Delimiter=' ',
                                 IsPath=True),
        '--tol': ValuedParameter('--', Name='tol', Delimiter=' '),
        '--max-iters': ValuedParameter('--', Name='max-iters', Delimiter=' '),
        '--seed': ValuedParameter('--', Name='seed', Delimiter=' '),
        # refuse problems failing the structural sufficient conditions
        '--strict': FlagParameter('--', Name='strict'),
        '--trace': FlagParameter('--', Name='trace'),
    }
    _input_handler = '_input_as_string'
    _suppress_stdout = True
    _suppress_stderr = False

    def _accept_exit_status(self, exit_status):
        """0 success, 2 non-convergence, 3 infeasible: all write a result"""
        return exit_status in (0, 2, 3)

    def _get_result_paths(self, data):
        return {'Result': ResultPath(Path=self.Parameters['--out'].Value,
                                     IsWritten=True)}

    def getHelp(self):
        return ("bridgeflow -h lists the subcommands; each reads a JSON "
                "problem (--in) and writes a JSON result (--out).\n")


def run_bridgeflow(spec, subcommand, tol=None, max_iters=None, seed=None,
                   strict=False, trace=False, HALT_EXEC=False):
    """ Runs bridgeflow on a problem and returns the parsed result document

        spec : problem document, a dict (serialized to a temp file)
        subcommand : one of SUBCOMMANDS
        tol, max_iters, seed : solver options, left to the problem
         document's options (or the defaults) when None
        strict, trace : turn on the matching flags

        The returned document carries "status"; non-convergent and
        infeasible problems return their document rather than raising.
    """
    if subcommand not in SUBCOMMANDS:
        raise ValueError("Unknown subcommand %r; expected one of %s"
                         % (subcommand, ", ".join(SUBCOMMANDS)))
    if tol is not None and not tol > 0:
        raise ValueError("Tolerance --tol must be positive.")
    if max_iters is not None and (int(max_iters) != max_iters or
                                  max_iters < 1):
        raise ValueError("--max-iters must be a positive integer.")
    if seed is not None and (int(seed) != seed or seed < 0):
        raise ValueError("--seed must be a nonnegative integer.")

    app = BridgeFlow(HALT_EXEC=HALT_EXEC)

    fd, spec_path = mkstemp(prefix='bridgeflow_spec_', suffix='.json')
    close(fd)
    fd, result_path = mkstemp(prefix='bridgeflow_result_', suffix='.json')
    close(fd)
    files_to_remove = [spec_path, result_path]

    try:
        with open(spec_path, 'w') as f:
            json.dump(spec, f)
        app.Parameters['--in'].on(spec_path)
        app.Parameters['--out'].on(result_path)
        if tol is not None:
            app.Parameters['--tol'].on(tol)
        if max_iters is not None:
            app.Parameters['--max-iters'].on(int(max_iters))
        if seed is not None:
            app.Parameters['--seed'].on(int(seed))
        if strict:
            app.Parameters['--strict'].on()
        if trace:
            app.Parameters['--trace'].on()

        result = app(subcommand)
        document = json.load(result['Result'])
        result.cleanUp()
    finally:
        for path in files_to_remove:
            if exists(path):
                remove(path)
    return document
