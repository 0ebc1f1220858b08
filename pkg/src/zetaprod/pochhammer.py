"""Zeta-Pochhammer symbol (x; q)_zeta = prod_{Im rho > 0} (1 - x q^{-rho}).

Only q on the unit circle is supported: q = exp(-i beta) with beta > 0, so
q^{-rho} = exp(i beta rho) = exp(i beta / 2) exp(-beta tau).  The product is
evaluated in log space and exponentiated once.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .summation import BoundedValue, log_one_minus_sum
from .zeros import ZeroTable

__all__ = ["PochhammerArgs", "zeta_pochhammer", "log_zeta_pochhammer"]


@dataclass(frozen=True)
class PochhammerArgs:
    x: complex
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "x", complex(self.x))
        object.__setattr__(self, "beta", float(self.beta))
        if not self.beta > 0.0:
            raise ValueError(f"beta must be positive, got {self.beta}")

    def check(self, table: ZeroTable) -> None:
        lead = abs(self.x) * math.exp(-self.beta * table.first)
        if not lead < 1.0:
            raise ValueError(f"|x| exp(-beta tau_1) = {lead} >= 1")


def log_zeta_pochhammer(table: ZeroTable, args: PochhammerArgs) -> BoundedValue:
    """sum over zeros of log(1 - x q^{-rho}), principal logs."""
    args.check(table)
    return log_one_minus_sum(table, args.x * cmath.exp(0.5j * args.beta), args.beta)


def zeta_pochhammer(table: ZeroTable, args: PochhammerArgs) -> BoundedValue:
    log_sum = log_zeta_pochhammer(table, args)
    value = cmath.exp(log_sum.value)
    return BoundedValue(value, abs(value) * math.expm1(log_sum.tail_bound))
