#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------

__version__ = '0.1.0-dev'
