"""
Test package for the Fock-Sobolev laboratory.

This package contains unit tests for the numerical modules, tests for the
persistence and publishing layers, and end-to-end tests of the CLI.
"""
