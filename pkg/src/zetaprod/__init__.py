"""Zeta-regularized trigonometric products over the zeros of the Riemann zeta function."""

from .zeros import ZeroTable, load_zero_table, validate  # noqa: F401

__version__ = "0.1.0"
