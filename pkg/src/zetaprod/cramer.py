"""Cramer's V and phi functions and the Laurent data of phi near zero.

    phi(s) = sum_{tau > 0} exp(-s tau)             (Re s > 0)
    V(s)   = sum_{Im rho > 0} exp(s rho)           (Im s > 0)

so V(s) = exp(s/2) phi(-i s).  Cramer showed that

    V(s) - (1/2 pi i) (log s / (1 - e^{-s}) + (gamma + log 2pi - i pi/2) / s)

is holomorphic at s = 0.  Composing with V(i alpha s) = exp(i alpha s/2) phi(alpha s)
splits phi(alpha s) for s > 0 into a coefficient of log s and a meromorphic
part whose Laurent coefficients c_{-1}, c_0, c_1 feed the regularized products.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .summation import BoundedValue, cexpm1, exp_sum
from .zeros import ZeroTable

__all__ = [
    "CONSTANTS",
    "Constants",
    "FitConditionError",
    "LaurentCoeffs",
    "TruncationRangeError",
    "c_minus1_closed_form",
    "cramer_remainder",
    "cramer_singular",
    "default_grid",
    "extract_laurent_coeffs",
    "phi",
    "phi_singular_model",
    "v_func",
    "C0_CLOSED_FORM",
]

TWO_PI = 2.0 * math.pi
# below this exp(-alpha s tau_max) tail is < ~1e-12 for 1e5 zeros
TRUNCATION_EXPONENT = 35.0
C0_CLOSED_FORM = 7.0 / 8.0


class TruncationRangeError(ValueError):
    """The zero table is too short for the requested small-s evaluation."""


class FitConditionError(ValueError):
    """Least-squares design matrix too ill-conditioned to trust."""


@dataclass(frozen=True)
class Constants:
    euler_gamma: float = float(np.euler_gamma)
    log_two_pi: float = math.log(TWO_PI)

    @property
    def cramer_c(self) -> complex:
        return complex(self.euler_gamma + self.log_two_pi, -math.pi / 2.0)


CONSTANTS = Constants()


def c_minus1_closed_form(alpha: float) -> float:
    """-(gamma + log 2 pi alpha) / (2 pi alpha)."""
    return -(CONSTANTS.euler_gamma + math.log(TWO_PI * alpha)) / (TWO_PI * alpha)


def phi(table: ZeroTable, s: complex) -> BoundedValue:
    s = complex(s)
    if not s.real > 0.0:
        raise ValueError(f"phi needs Re(s) > 0, got {s}")
    return exp_sum(table, s)


def v_func(table: ZeroTable, s: complex) -> BoundedValue:
    """V(s) = exp(s/2) * phi(-i s); the tail bound is scaled by |exp(s/2)|."""
    s = complex(s)
    if not s.imag > 0.0:
        raise ValueError(f"V needs Im(s) > 0, got {s}")
    # -i*s formed exactly, so v_func(i z) and exp(iz/2) phi(z) share every rounding
    inner = phi(table, complex(s.imag, -s.real))
    return inner.scaled(cmath.exp(s / 2.0))


def _one_minus_exp_neg(s: complex) -> complex:
    return complex(-cexpm1(-s))


def cramer_singular(s: complex) -> complex:
    """(1/2 pi i) (log s / (1 - e^{-s}) + (gamma + log 2pi - i pi/2) / s), principal log."""
    s = complex(s)
    if s == 0:
        raise ZeroDivisionError("cramer_singular is singular at s = 0")
    k = s.imag / TWO_PI
    if abs(s.real) < 1e-12 * max(1.0, abs(s)) and round(k) != 0 \
            and abs(k - round(k)) < 1e-12 * max(1.0, abs(k)):
        raise ZeroDivisionError(f"cramer_singular has a pole at s = {s} (2 pi i multiple)")
    return (cmath.log(s) / _one_minus_exp_neg(s) + CONSTANTS.cramer_c / s) / (2j * math.pi)


def cramer_remainder(table: ZeroTable, s: complex) -> BoundedValue:
    """V(s) minus Cramer's singular model; holomorphic near s = 0."""
    v = v_func(table, s)
    return BoundedValue(v.value - cramer_singular(s), v.tail_bound)


def phi_singular_model(alpha: float, s: float) -> tuple[complex, complex]:
    """Split Cramer's model for phi(alpha s), s > 0, into (log_part, mero_singular).

    phi(alpha s) = log_part * log s + mero_singular + (holomorphic), using
    log(i alpha s) = log s + log(i alpha).  log_part equals -1/(4 pi sin(alpha s/2)).
    """
    if not alpha > 0.0 or not s > 0.0:
        raise ValueError("phi_singular_model needs alpha > 0 and s > 0")
    x = 1j * alpha * s
    if not alpha * s < TWO_PI:
        raise ValueError("alpha*s must stay below the first pole at 2 pi")
    shift = cmath.exp(-x / 2.0)
    denom = _one_minus_exp_neg(x)
    log_part = shift / (2j * math.pi * denom)
    mero = shift * (cmath.log(1j * alpha) / denom + CONSTANTS.cramer_c / x) / (2j * math.pi)
    return log_part, mero


@dataclass
class LaurentCoeffs:
    """Fitted c_{-1}, c_0, c_1 of the meromorphic part of phi(alpha s)."""

    alpha: float
    c_minus1: complex
    c_0: complex
    c_1: complex
    residual_norm: float
    s_grid: list
    condition: float = float("nan")
    # one-sigma-like spreads from refitting on sub-grids (c_1 has no closed form)
    c_1_uncertainty: float = float("nan")
    c_0_uncertainty: float = float("nan")
    c_minus1_uncertainty: float = float("nan")
    extra: dict = field(default_factory=dict)


def default_grid(table: ZeroTable, alpha: float, points: int = 8) -> list[float]:
    """Geometric grid (ratio 1/2, decreasing) starting at the truncation floor."""
    s_min = TRUNCATION_EXPONENT / (alpha * table.t_max)
    return [s_min * 2.0 ** (points - 1 - k) for k in range(points)]


def _meromorphic_part(table: ZeroTable, alpha: float, s: float) -> complex:
    log_part, _ = phi_singular_model(alpha, s)
    return phi(table, alpha * s).value - log_part * math.log(s)


def _fit(s: np.ndarray, p: np.ndarray, terms: int = 4):
    # rows scaled by s: s P(s) = c_{-1} + c_0 s + c_1 s^2 + c_2 s^3 (+ ...)
    scale = s.max()
    u = s / scale
    design = np.vander(u, terms, increasing=True).astype(np.complex128)
    rhs = s * p
    coef, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    resid = float(np.linalg.norm(design @ coef - rhs))
    cond = float(np.linalg.cond(design))
    coef = coef / scale ** np.arange(terms)
    return coef, resid, cond


def extract_laurent_coeffs(table: ZeroTable, alpha: float, grid=None,
                           max_condition: float = 1e8) -> LaurentCoeffs:
    """Least-squares fit of c_{-1}/s + c_0 + c_1 s + c_2 s^2 to the meromorphic part.

    c_2 is a guard term absorbing curvature of the holomorphic remainder and
    is not reported.  Uncertainties come from refitting with the largest and
    the smallest grid point dropped.
    """
    if not alpha > 0.0:
        raise ValueError("alpha must be positive")
    if grid is None:
        grid = default_grid(table, alpha)
    s = np.asarray(sorted((float(x) for x in grid), reverse=True))
    if s.size < 6:
        raise ValueError("grid needs at least 6 points")
    if np.any(s <= 0.0) or np.any(np.diff(s) >= 0.0):
        raise ValueError("grid must be positive and strictly decreasing")
    if alpha * s[-1] * table.t_max < TRUNCATION_EXPONENT * (1.0 - 1e-12):
        raise TruncationRangeError(
            f"alpha*s_min*tau_max = {alpha * s[-1] * table.t_max:.3g} < {TRUNCATION_EXPONENT}")

    p = np.array([_meromorphic_part(table, alpha, x) for x in s])
    coef, resid, cond = _fit(s, p)
    if cond > max_condition:
        raise FitConditionError(f"condition number {cond:.3g} exceeds {max_condition:.3g}")

    spreads = np.zeros(3)
    if s.size >= 7:
        for sl in (slice(1, None), slice(None, -1)):
            alt, _, _ = _fit(s[sl], p[sl])
            spreads = np.maximum(spreads, np.abs(alt[:3] - coef[:3]))
    return LaurentCoeffs(
        alpha=float(alpha),
        c_minus1=complex(coef[0]),
        c_0=complex(coef[1]),
        c_1=complex(coef[2]),
        residual_norm=resid,
        s_grid=[float(x) for x in s],
        condition=cond,
        c_minus1_uncertainty=float(spreads[0]),
        c_0_uncertainty=float(spreads[1]),
        c_1_uncertainty=float(spreads[2]),
    )
