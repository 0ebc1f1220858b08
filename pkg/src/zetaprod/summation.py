"""Deterministic sums over zero tables with truncation tail bounds.

Every series and product over zeros in this package reduces to one of two
kernels, :func:`exp_sum` and :func:`log_one_minus_sum`.  Terms are generated in
fixed-width blocks (optionally on a thread pool) and accumulated with
``math.fsum`` on the real and imaginary parts separately.  ``fsum`` returns the
correctly rounded sum, so the result does not depend on block layout or on the
number of threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .zeros import ZeroTable

__all__ = [
    "BLOCK_WIDTH",
    "BoundedValue",
    "clog1p",
    "cexpm1",
    "compensated_sum",
    "density_tail",
    "exp_sum",
    "get_threads",
    "log_one_minus_sum",
    "map_blocks",
    "set_threads",
]

BLOCK_WIDTH = 16384
_threads = 1


def set_threads(n: int) -> None:
    """Number of worker threads for term generation (0 = one per CPU)."""
    global _threads
    if n < 0:
        raise ValueError("thread count must be nonnegative")
    import os

    _threads = n or (os.cpu_count() or 1)


def get_threads() -> int:
    return _threads


@dataclass(frozen=True)
class BoundedValue:
    """A truncated sum together with an absolute bound on the omitted tail."""

    value: complex
    tail_bound: float

    def __post_init__(self):
        if not (self.tail_bound >= 0.0 and math.isfinite(self.tail_bound)):
            raise ValueError(f"tail bound must be finite and nonnegative, got {self.tail_bound}")
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "tail_bound", float(self.tail_bound))

    def __abs__(self) -> float:
        return abs(self.value)

    def scaled(self, factor: complex) -> "BoundedValue":
        return BoundedValue(self.value * factor, self.tail_bound * abs(factor))

    def __add__(self, other: "BoundedValue") -> "BoundedValue":
        return BoundedValue(self.value + other.value, self.tail_bound + other.tail_bound)

    def __neg__(self) -> "BoundedValue":
        return BoundedValue(-self.value, self.tail_bound)

    def agrees_with(self, other: "BoundedValue", rel_slack: float = 1e-14) -> bool:
        """True if the values differ by no more than the summed tail bounds.

        ``rel_slack`` (relative to the larger magnitude) absorbs rounding in the
        two evaluation routes; tail bounds alone say nothing about rounding.
        """
        gap = abs(self.value - other.value)
        scale = max(abs(self.value), abs(other.value))
        return gap <= self.tail_bound + other.tail_bound + rel_slack * scale


def clog1p(u):
    """log(1 + u) for complex u, accurate for tiny |u| (principal branch)."""
    u = np.asarray(u, dtype=np.complex128)
    x, y = u.real, u.imag
    # |1+u|^2 - 1 = 2x + x^2 + y^2
    re = 0.5 * np.log1p(2.0 * x + x * x + y * y)
    im = np.arctan2(y, 1.0 + x)
    return re + 1j * im


def cexpm1(w):
    """exp(w) - 1 for complex w, accurate for tiny |w|."""
    w = np.asarray(w, dtype=np.complex128)
    x, y = w.real, w.imag
    s = np.sin(0.5 * y)
    re = np.expm1(x) * np.cos(y) - 2.0 * s * s
    im = np.exp(x) * np.sin(y)
    return re + 1j * im


def compensated_sum(terms) -> complex:
    """Correctly rounded sum of complex terms, independent of their grouping."""
    terms = np.asarray(terms, dtype=np.complex128)
    if not np.all(np.isfinite(terms)):
        raise OverflowError("non-finite term in summation")
    return complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))


def map_blocks(fn, tau: np.ndarray) -> np.ndarray:
    """Apply the vectorized term function ``fn`` to fixed-width blocks of ``tau``.

    Blocks are reassembled in table order, so the output is identical for any
    thread count.
    """
    starts = range(0, tau.size, BLOCK_WIDTH)
    blocks = [tau[i:i + BLOCK_WIDTH] for i in starts]
    if _threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=_threads) as pool:
            parts = list(pool.map(fn, blocks))
    else:
        parts = [fn(b) for b in blocks]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.complex128)


def density_tail(a: float, t: float) -> float:
    """Upper bound for sum_{tau_n > t} exp(-a tau_n).

    Twice the counting-density integral (1/2pi) int_t^inf e^{-a u} log(u/2pi) du,
    bounded in closed form by (1/(pi a)) e^{-a t} (log t + 1/(a t)).  The
    1/(a t) piece is the exponential-integral remainder and only matters when
    a*t is small.
    """
    a = float(a)
    t = float(t)
    if not a > 0.0:
        raise ValueError(f"density_tail needs a > 0, got {a}")
    if not t > 1.0:
        raise ValueError(f"density_tail needs t > 1, got {t}")
    at = a * t
    if at > 745.0:
        return 0.0
    return math.exp(-at) * (math.log(t) + 1.0 / at) / (math.pi * a)


def exp_sum(table: ZeroTable, a: complex) -> BoundedValue:
    """sum_n exp(-a tau_n) over the table, with the density tail beyond its end."""
    a = complex(a)
    if not a.real > 0.0:
        raise ValueError(f"exp_sum needs Re(a) > 0, got {a}")
    terms = map_blocks(lambda t: np.exp(-a * t), table.ordinates)
    return BoundedValue(compensated_sum(terms), density_tail(a.real, table.t_max))


def log_one_minus_sum(table: ZeroTable, c: complex, a: float) -> BoundedValue:
    """sum_n log(1 - c exp(-a tau_n)) with principal logarithms.

    Requires |c| exp(-a tau_1) < 1, which keeps every factor in the right half
    plane.  The tail uses |log(1 - w)| <= |w| / (1 - |w|).
    """
    c = complex(c)
    a = float(a)
    if not a > 0.0:
        raise ValueError(f"log_one_minus_sum needs a > 0, got {a}")
    lead = abs(c) * math.exp(-a * table.first)
    if not lead < 1.0:
        raise ValueError(f"|c| exp(-a tau_1) = {lead} >= 1: factor may vanish or wrap")
    if c == 0:
        return BoundedValue(0j, 0.0)
    terms = map_blocks(lambda t: clog1p(-c * np.exp(-a * t)), table.ordinates)
    bound = density_tail(a, table.t_max) * abs(c) / (1.0 - lead)
    return BoundedValue(compensated_sum(terms), bound)
