#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------

import collections
import collections.abc

# burrito 0.9.1 imports ``collections.Mapping``, removed in Python 3.10
if not hasattr(collections, 'Mapping'):
    collections.Mapping = collections.abc.Mapping
