#!/usr/bin/env python

#-----------------------------------------------------------------------------
# Copyright (c) 2026--, bridgeflow development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file COPYING.txt, distributed with this software.
#-----------------------------------------------------------------------------

__version__ = '0.1.0-dev'

from setuptools import find_packages, setup
from setuptools.command.build_py import build_py

classes = """
    Development Status :: 1 - Planning
    License :: OSI Approved :: BSD License
    Topic :: Software Development :: Libraries
    Topic :: Scientific/Engineering
    Topic :: Scientific/Engineering :: Mathematics
    Programming Language :: Python
    Programming Language :: Python :: 3
    Operating System :: Unix
    Operating System :: POSIX
    Operating System :: MacOS :: MacOS X
"""
classifiers = [s.strip() for s in classes.split('\n') if s]

long_description = """Optimal steering of Markovian network flows:
finite-horizon and stationary Schroedinger bridges, and cooling of
Boltzmann distributions on graphs."""

setup(name='bridgeflow',
      cmdclass={'build_py': build_py},
      version=__version__,
      license='BSD',
      description=\
        'bridgeflow: Schroedinger bridges for Markov chains on networks',
      long_description=long_description,
      author="bridgeflow development team",
      maintainer="bridgeflow development team",
      packages=find_packages(),
      python_requires='>=3.8',
      install_requires=['numpy >= 1.17',
                        'scipy >= 1.4',
                        'burrito >= 0.9.1, < 1.0.0'],
      entry_points={
          'console_scripts': ['bridgeflow = bridgeflow.cli:main'],
      },
      classifiers=classifiers)
