"""
focklab - numerical laboratory for Fock-Sobolev spaces.

Stable kernels and special functions, Gaussian-weighted quadrature, the
F^{p,m} norms and projection, Carleson measure tests and empirical checks
of the inequalities of the theory, driven from a small command line.
"""

__version__ = "0.1.0"
__author__ = "focklab developers"

from focklab.config import LabConfig, get_config, reset_config

__all__ = ["LabConfig", "get_config", "reset_config"]
