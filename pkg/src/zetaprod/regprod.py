"""Zeta-regularized trigonometric products over the zeros of zeta.

Two families of sequences indexed by the zeros rho = 1/2 + i tau:

* sine:  prod_k sin(alpha_k rho - z_k)
* exp:   prod_k (exp(-i(alpha_k rho - z_k)) - omega_k)

For each family this module evaluates the quadratic regularization polynomial
(F or F~), the auxiliary series f(k) / f~(k) both as a series in V and as a
log-product over zeros, the regularized products S and S~ by two independent
assembly routes, the discrepancies, the associated zeta functions L and L~ at
real s > 0, and a numerical estimate of the O(s) coefficient of
exp(-s A') L(s) - V(i alpha s), which is what the closed forms claim to equal.

Complex powers follow the factorization

    sin(w)^{-s} := (-2i)^s exp(i s w) (1 - exp(2 i w))^{-s}

with principal logarithms of (-2i) and of (1 - u), |u| < 1, rather than the
principal power of sin(w) itself.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from . import cramer
from .cramer import CONSTANTS, TRUNCATION_EXPONENT, TruncationRangeError
from .cramer import v_func
from .pochhammer import PochhammerArgs, log_zeta_pochhammer
from .summation import (BoundedValue, cexpm1, clog1p, compensated_sum, density_tail,
                        log_one_minus_sum, map_blocks)
from .zeros import ZeroTable

__all__ = [
    "LOG_MINUS_2I",
    "AdjudicationResult",
    "C1Mode",
    "DiscrepancyReport",
    "ExpParams",
    "LinearTermEstimate",
    "MissingC1Error",
    "RegProduct",
    "SineParams",
    "S_exp",
    "S_sine",
    "L_direct",
    "L_tilde_direct",
    "adjudicate_sign_c0",
    "discrepancy_exp",
    "discrepancy_sine",
    "f_product",
    "f_series",
    "f_tilde_product",
    "f_tilde_series",
    "kw_coefficients",
    "kw_linear_reconciliation",
    "lt_direct_fit",
    "lt_extract",
    "poly_F",
    "poly_F_tilde",
]

TWO_PI = 2.0 * math.pi
LOG_MINUS_2I = complex(math.log(2.0), -math.pi / 2.0)
SERIES_TAIL_TARGET = 1e-12
MAX_SERIES_TERMS = 5000


class MissingC1Error(KeyError):
    """Numeric c_1 mode without a value for the required alpha."""


# ---------------------------------------------------------------- parameters

def _check_z(z: complex, k: int) -> None:
    if not (0.0 <= z.real < TWO_PI):
        raise ValueError(f"z_{k} = {z}: need 0 <= Re(z) < 2 pi")
    if z.imag > 0.0:
        raise ValueError(f"z_{k} = {z}: need Im(z) <= 0")


@dataclass(frozen=True)
class SineParams:
    alphas: tuple
    zs: tuple

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        zs = tuple(complex(z) for z in self.zs)
        if len(alphas) == 0 or len(alphas) != len(zs):
            raise ValueError("alphas and zs must be non-empty and of equal length")
        for k, (a, z) in enumerate(zip(alphas, zs), 1):
            if not (a > 0.0 and math.isfinite(a)):
                raise ValueError(f"alpha_{k} = {a}: need alpha > 0")
            _check_z(z, k)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "zs", zs)

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def alpha(self) -> float:
        return math.fsum(self.alphas)

    @property
    def z(self) -> complex:
        return complex(math.fsum(z.real for z in self.zs), math.fsum(z.imag for z in self.zs))

    def factor(self, k: int) -> "SineParams":
        return SineParams((self.alphas[k],), (self.zs[k],))


@dataclass(frozen=True)
class ExpParams(SineParams):
    omegas: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        omegas = tuple(complex(w) for w in self.omegas)
        if len(omegas) != len(self.alphas):
            raise ValueError("omegas must match alphas in length")
        for k, w in enumerate(omegas, 1):
            if abs(w) > 1.0:
                raise ValueError(f"omega_{k} = {w}: need |omega| <= 1")
        object.__setattr__(self, "omegas", omegas)

    def factor(self, k: int) -> "ExpParams":
        return ExpParams((self.alphas[k],), (self.zs[k],), (self.omegas[k],))


@dataclass(frozen=True)
class C1Mode:
    """How the unknown constant c_1(alpha) enters F and F~.

    ``omit`` drops it: every value carrying c_1 is then only known up to an
    additive constant per distinct alpha, and results are flagged.  ``numeric``
    looks c_1(alpha) up in ``values``, which :meth:`resolve` fills from the
    fitted Laurent coefficients of phi(alpha s).
    """

    mode: str = "omit"
    values: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("omit", "numeric"):
            raise ValueError(f"unknown c1 mode {self.mode!r}")

    @classmethod
    def omit(cls) -> "C1Mode":
        return cls("omit")

    @classmethod
    def numeric(cls, values: Mapping | None = None) -> "C1Mode":
        return cls("numeric", dict(values or {}))

    @property
    def flagged(self) -> bool:
        return self.mode == "omit"

    def lookup(self, alpha: float) -> complex:
        if self.mode == "omit":
            return 0j
        for key, val in self.values.items():
            if math.isclose(float(key), alpha, rel_tol=1e-12, abs_tol=0.0):
                return complex(val)
        raise MissingC1Error(f"no numeric c_1 for alpha = {alpha}")

    def resolve(self, table: ZeroTable, alphas: Sequence[float]) -> "C1Mode":
        """Fill in missing c_1(alpha) values by Laurent extraction."""
        if self.mode == "omit":
            return self
        values = dict(self.values)
        for a in alphas:
            try:
                self.lookup(a)
            except MissingC1Error:
                values[float(a)] = cramer.extract_laurent_coeffs(table, a).c_1
        return replace(self, values=values)


def _alphas_needed(p: SineParams) -> list[float]:
    return sorted(set(p.alphas) | {p.alpha})


# --------------------------------------------------------------- polynomials

def _kappa(alpha: float) -> float:
    return (CONSTANTS.euler_gamma + math.log(TWO_PI * alpha)) / (4.0 * math.pi * alpha)


def sine_shift(p: SineParams) -> complex:
    """A = n log(-2i) - i z + i alpha / 2."""
    return p.n * LOG_MINUS_2I - 1j * p.z + 0.5j * p.alpha


def exp_shift(p: SineParams) -> complex:
    """A~ = i alpha / 2 - i z."""
    return 0.5j * p.alpha - 1j * p.z


def _quadratic(alpha: float, shift: complex, sign_c0: int, c1: C1Mode) -> complex:
    if sign_c0 not in (1, -1):
        raise ValueError("sign_c0 must be +1 or -1")
    return -_kappa(alpha) * shift * shift + sign_c0 * cramer.C0_CLOSED_FORM * shift \
        + c1.lookup(alpha)


def poly_F(p: SineParams, sign_c0: int = 1, c1: C1Mode = C1Mode()) -> complex:
    """F = -((gamma + log 2 pi alpha)/(4 pi alpha)) A^2 + sign_c0 (7/8) A + c_1(alpha)."""
    return _quadratic(p.alpha, sine_shift(p), sign_c0, c1)


def poly_F_tilde(p: SineParams, sign_c0: int = 1, c1: C1Mode = C1Mode()) -> complex:
    """F~ with A~ = i alpha/2 - i z in place of A; omega does not enter."""
    return _quadratic(p.alpha, exp_shift(p), sign_c0, c1)


def kw_coefficients(alpha: float) -> tuple[complex, complex]:
    """(A_alpha, B_alpha) of the single-factor sine product in the x variable."""
    if not alpha > 0.0:
        raise ValueError("alpha must be positive")
    g = CONSTANTS.euler_gamma + math.log(TWO_PI * alpha)
    a_coef = alpha * g / (4.0 * math.pi)
    b_coef = g / (2j * math.pi) * (0.5j * alpha + LOG_MINUS_2I) + 7j * alpha / 8.0
    return complex(a_coef), b_coef


def kw_linear_reconciliation(alpha: float, tol: float = 1e-12) -> dict:
    """Which (sign_c0, overall negation) makes poly_F's x-coefficient equal B_alpha.

    poly_F at n = 1, z = alpha x is a quadratic in x; its linear coefficient
    is read off exactly as (F(1) - F(-1)) / 2.
    """
    _, b_alpha = kw_coefficients(alpha)
    out = {}
    for sign in (1, -1):
        def f_at(x):
            # formal evaluation: z = alpha x is outside the Re(z) >= 0 domain for x < 0
            shift = LOG_MINUS_2I - 1j * alpha * x + 0.5j * alpha
            return _quadratic(alpha, shift, sign, C1Mode.omit())

        lin = 0.5 * (f_at(1.0) - f_at(-1.0))
        for negate in (False, True):
            cand = -lin if negate else lin
            out[(sign, negate)] = abs(cand - b_alpha) <= tol * max(1.0, abs(b_alpha))
    return out


# ----------------------------------------------------------- auxiliary series

def _geometric_terms(first_bound: float, ratio: float, partial_scale: float) -> int:
    """Smallest M with first_bound * ratio^M / ((M + 1)(1 - ratio)) below target."""
    if first_bound == 0.0 or ratio == 0.0:
        return 1
    target = SERIES_TAIL_TARGET * min(1.0, max(partial_scale, 1e-300))
    m = 1
    while m < MAX_SERIES_TERMS:
        if first_bound * ratio**m / ((m + 1) * (1.0 - ratio)) < target:
            return m
        m += 1
    raise ArithmeticError(f"series ratio {ratio} too close to 1")


def _v_series(table: ZeroTable, weight: complex, step: float, m_terms: int | None):
    """sum_{m>=1} weight^m V(i m step) / m with tail bound.

    |V(i m step)| <= exp(-(m-1) step tau_1) K with K = |phi(step)| + tail, since
    every tau >= tau_1; the m-tail is then geometric with ratio
    |weight| exp(-step tau_1).
    """
    if weight == 0:
        return BoundedValue(0j, 0.0), 0
    base = v_func(table, 1j * step)
    k_bound = abs(base.value) + base.tail_bound
    ratio = abs(weight) * math.exp(-step * table.first)
    first = abs(weight) * k_bound
    if m_terms is None:
        m_terms = _geometric_terms(first, ratio, first)
    if m_terms < 1:
        raise ValueError("need at least one series term")
    values = []
    tails = 0.0
    for m in range(1, m_terms + 1):
        v = base if m == 1 else v_func(table, 1j * m * step)
        w = weight**m / m
        values.append(v.value * w)
        tails += v.tail_bound * abs(w)
    geo = first * ratio**m_terms / ((m_terms + 1) * (1.0 - ratio))
    return BoundedValue(compensated_sum(values), tails + geo), m_terms


def f_series(table: ZeroTable, alpha_k: float, z_k: complex,
             M: int | None = None) -> BoundedValue:
    """f(k) = sum_{m>=1} V(2 i m alpha_k) exp(-2 i m z_k) / m."""
    alpha_k = float(alpha_k)
    z_k = complex(z_k)
    SineParams((alpha_k,), (z_k,))
    value, _ = _v_series(table, cmath.exp(-2j * z_k), 2.0 * alpha_k, M)
    return value


def f_product(table: ZeroTable, alpha_k: float, z_k: complex) -> BoundedValue:
    """f(k) = -sum_rho log(1 - exp(2 i (alpha_k rho - z_k)))."""
    SineParams((alpha_k,), (z_k,))
    c = cmath.exp(-2j * complex(z_k) + 1j * alpha_k)
    return -log_one_minus_sum(table, c, 2.0 * alpha_k)


def f_tilde_series(table: ZeroTable, alpha_k: float, z_k: complex, omega_k: complex,
                   M: int | None = None) -> BoundedValue:
    """f~(k) = sum_{m>=1} omega_k^m exp(-i m z_k) V(i m alpha_k) / m."""
    ExpParams((alpha_k,), (z_k,), (omega_k,))
    value, _ = _v_series(table, complex(omega_k) * cmath.exp(-1j * complex(z_k)),
                         float(alpha_k), M)
    return value


def f_tilde_product(table: ZeroTable, alpha_k: float, z_k: complex,
                    omega_k: complex) -> BoundedValue:
    """f~(k) = -sum_rho log(1 - omega_k exp(i (alpha_k rho - z_k)))."""
    ExpParams((alpha_k,), (z_k,), (omega_k,))
    c = complex(omega_k) * cmath.exp(-1j * complex(z_k) + 0.5j * alpha_k)
    return -log_one_minus_sum(table, c, float(alpha_k))


# ------------------------------------------------------- regularized products

@dataclass
class RegProduct:
    """A regularized product assembled two ways.

    ``value`` is exp(-F) times the zeta-Pochhammer symbols; ``alt_value`` is
    exp(-F - sum_k f(k)) with f(k) from the V-series.  ``c1_flagged`` marks a
    value known only up to the factor exp(-c_1(alpha)).
    """

    value: complex
    tail_bound: float
    alt_value: complex
    alt_tail_bound: float
    F: complex
    log_pochhammer: list
    c1_flagged: bool

    @property
    def route_gap(self) -> float:
        return abs(self.value - self.alt_value) / max(abs(self.value), abs(self.alt_value))

    def core(self) -> complex:
        """exp(F) * value, i.e. the plain product of Pochhammer symbols."""
        return cmath.exp(math.fsum(lp.value.real for lp in self.log_pochhammer)
                         + 1j * math.fsum(lp.value.imag for lp in self.log_pochhammer))


def _assemble(F: complex, logs: list[BoundedValue], series: list[BoundedValue],
              flagged: bool) -> RegProduct:
    log_total = sum((lp.value for lp in logs), 0j)
    bound_total = math.fsum(lp.tail_bound for lp in logs)
    value = cmath.exp(-F + log_total)
    f_total = sum((f.value for f in series), 0j)
    f_bound = math.fsum(f.tail_bound for f in series)
    alt = cmath.exp(-F - f_total)
    return RegProduct(value, abs(value) * math.expm1(bound_total), alt,
                      abs(alt) * math.expm1(f_bound), F, logs, flagged)


def S_sine(table: ZeroTable, p: SineParams, sign_c0: int = 1,
           c1: C1Mode = C1Mode()) -> RegProduct:
    """exp(-F) prod_k (exp(-2 i z_k); exp(-2 i alpha_k))_zeta."""
    c1 = c1.resolve(table, [p.alpha])
    F = poly_F(p, sign_c0, c1)
    logs = [log_zeta_pochhammer(table, PochhammerArgs(cmath.exp(-2j * z), 2.0 * a))
            for a, z in zip(p.alphas, p.zs)]
    series = [f_series(table, a, z) for a, z in zip(p.alphas, p.zs)]
    return _assemble(F, logs, series, c1.flagged)


def S_exp(table: ZeroTable, p: ExpParams, sign_c0: int = 1,
          c1: C1Mode = C1Mode()) -> RegProduct:
    """exp(-F~) prod_k (omega_k exp(-i z_k); exp(-i alpha_k))_zeta."""
    c1 = c1.resolve(table, [p.alpha])
    F = poly_F_tilde(p, sign_c0, c1)
    logs = [log_zeta_pochhammer(table, PochhammerArgs(w * cmath.exp(-1j * z), a))
            for a, z, w in zip(p.alphas, p.zs, p.omegas)]
    series = [f_tilde_series(table, a, z, w) for a, z, w in zip(p.alphas, p.zs, p.omegas)]
    return _assemble(F, logs, series, c1.flagged)


# -------------------------------------------------------------- discrepancies

@dataclass
class DiscrepancyReport:
    per_factor_F: list
    combined_F: complex
    discrepancy: complex
    c1_mode: C1Mode
    note: str = ""

    @property
    def flagged(self) -> bool:
        return self.c1_mode.flagged and len(self.per_factor_F) >= 2


def _discrepancy(p: SineParams, poly, sign_c0: int, c1: C1Mode) -> DiscrepancyReport:
    per = [poly(p.factor(k), sign_c0, c1) for k in range(p.n)]
    combined = poly(p, sign_c0, c1)
    disc = sum(per, 0j) - combined
    note = ""
    if c1.flagged and p.n >= 2:
        note = ("c1 omitted: result misses sum_k c1(alpha_k) - c1(alpha), "
                "known only up to an additive constant")
    return DiscrepancyReport(per, combined, disc, c1, note)


def discrepancy_sine(table: ZeroTable | None, p: SineParams, sign_c0: int = 1,
                     c1: C1Mode = C1Mode()) -> DiscrepancyReport:
    """sum_k F(z_k; alpha_k) - F(z; alpha)."""
    if table is not None:
        c1 = c1.resolve(table, _alphas_needed(p))
    return _discrepancy(p, poly_F, sign_c0, c1)


def discrepancy_exp(table: ZeroTable | None, p: ExpParams, sign_c0: int = 1,
                    c1: C1Mode = C1Mode()) -> DiscrepancyReport:
    """sum_k F~(z_k; alpha_k) - F~(z; alpha)."""
    if table is not None:
        c1 = c1.resolve(table, _alphas_needed(p))
    return _discrepancy(p, poly_F_tilde, sign_c0, c1)


# --------------------------------------------------- associated zeta functions

def _sine_log_binomials(p: SineParams, tau: np.ndarray) -> np.ndarray:
    """sum_k log(1 - exp(2 i (alpha_k rho - z_k))) for each zero."""
    out = np.zeros(tau.shape, dtype=np.complex128)
    for a, z in zip(p.alphas, p.zs):
        c = cmath.exp(-2j * z + 1j * a)
        out += clog1p(-c * np.exp(-2.0 * a * tau))
    return out


def _exp_log_binomials(p: ExpParams, tau: np.ndarray) -> np.ndarray:
    """sum_k log(1 - omega_k exp(i (alpha_k rho - z_k))) for each zero."""
    out = np.zeros(tau.shape, dtype=np.complex128)
    for a, z, w in zip(p.alphas, p.zs, p.omegas):
        if w == 0:
            continue
        c = w * cmath.exp(-1j * z + 0.5j * a)
        out += clog1p(-c * np.exp(-a * tau))
    return out


def _family(p: SineParams, family: str | None = None):
    """(log-binomial function, prefactor exponent A', decay rates) for a family."""
    if family is None:
        family = "exp" if isinstance(p, ExpParams) else "sine"
    if family == "sine":
        return (lambda tau: _sine_log_binomials(p, tau), p.n * LOG_MINUS_2I - 1j * p.z,
                [2.0 * a for a in p.alphas])
    if family == "exp":
        if not isinstance(p, ExpParams):
            raise TypeError("exp family needs ExpParams")
        return (lambda tau: _exp_log_binomials(p, tau), -1j * p.z,
                [a for a in p.alphas])
    raise ValueError(f"unknown family {family!r}")


def _l_value(table: ZeroTable, p: SineParams, s: float, family: str) -> BoundedValue:
    s = float(s)
    if not s > 0.0:
        raise ValueError("L is evaluated for real s > 0 only")
    logs_of, a_prime, rates = _family(p, family)
    alpha = p.alpha
    phase = cmath.exp(0.5j * alpha * s)

    def terms(tau):
        return phase * np.exp(-alpha * s * tau - s * logs_of(tau))

    total = compensated_sum(map_blocks(terms, table.ordinates))
    prefactor = cmath.exp(s * a_prime)
    # beyond tau_max: |(1-u)^{-s}| <= exp(s |u| / (1 - |u|)) with |u| <= exp(-rate tau_max)
    us = [math.exp(-r * table.t_max) for r in rates]
    growth = math.exp(s * sum(u / (1.0 - u) for u in us))
    tail = abs(prefactor) * density_tail(alpha * s, table.t_max) * growth
    return BoundedValue(prefactor * total, tail)


def L_direct(table: ZeroTable, p: SineParams, s: float) -> BoundedValue:
    """L(s) = sum_rho prod_k sin(alpha_k rho - z_k)^{-s}, factorized branch."""
    return _l_value(table, p, s, "sine")


def L_tilde_direct(table: ZeroTable, p: ExpParams, s: float) -> BoundedValue:
    """L~(s) = sum_rho prod_k (exp(-i(alpha_k rho - z_k)) - omega_k)^{-s}."""
    return _l_value(table, p, s, "exp")


# ------------------------------------------------------- linear-term oracles

@dataclass
class LinearTermEstimate:
    """Richardson estimate of lim_{s->0} D(s)/s."""

    phi_estimate: complex
    extrapolation_error: float
    tail_bound: float
    s_grid: list
    d_values: list
    tableau: list
    converged: bool


DEFAULT_LT_GRID = (0.01, 0.005, 0.0025, 0.00125, 0.000625)


MAX_LT_STRETCH = 4.0


def default_lt_grid(table: ZeroTable, alpha: float) -> list[float]:
    """DEFAULT_LT_GRID, stretched upward (at most 4x) if the table cannot reach it.

    Beyond that the O(s) remainder spoils the extrapolation, so the unstretched
    grid is returned and the range check downstream refuses it.
    """
    floor = TRUNCATION_EXPONENT / (alpha * table.t_max)
    scale = max(1.0, floor / DEFAULT_LT_GRID[-1])
    if scale > MAX_LT_STRETCH:
        scale = 1.0
    return [x * scale for x in DEFAULT_LT_GRID]


def _check_grid(table: ZeroTable, alpha: float, grid: Sequence[float], minimum: int):
    s = sorted((float(x) for x in grid), reverse=True)
    if len(s) < minimum:
        raise ValueError(f"grid needs at least {minimum} points")
    if s[-1] <= 0.0 or len(set(s)) != len(s):
        raise ValueError("grid must be positive and distinct")
    reach = alpha * s[-1] * table.t_max
    if reach < TRUNCATION_EXPONENT * (1.0 - 1e-12):
        raise TruncationRangeError(
            f"insufficient truncation range: alpha*s_min*tau_max = {reach:.3g} "
            f"< {TRUNCATION_EXPONENT}")
    return s


def d_function(table: ZeroTable, p: SineParams, s: float,
               family: str | None = None) -> BoundedValue:
    """D(s) = exp(-s A') L(s) - V(i alpha s).

    Both sums run over the same zeros, so D is evaluated zero by zero as
    exp(i alpha s rho) * expm1(-s sum_k log(1 - u_k)); subtracting the two
    full sums would cancel all significant digits (V ~ 1/s, D ~ s e^{-2 alpha tau_1}).
    """
    logs_of, _, rates = _family(p, family)
    alpha = p.alpha
    s = float(s)
    phase = cmath.exp(0.5j * alpha * s)

    def terms(tau):
        return phase * np.exp(-alpha * s * tau) * cexpm1(-s * logs_of(tau))

    value = compensated_sum(map_blocks(terms, table.ordinates))
    # |expm1(w)| <= 2|w| for |w| <= 1 and |log(1-u)| <= 2|u| for |u| <= 1/2
    tail = 4.0 * len(rates) * s * density_tail(alpha * s + min(rates), table.t_max)
    return BoundedValue(value, tail)


def _neville_at_zero(xs: Sequence[float], ys: Sequence[complex]) -> list[list[complex]]:
    """Polynomial extrapolation tableau to x = 0 (Richardson for ratio-2 grids)."""
    table = [list(ys)]
    for j in range(1, len(xs)):
        prev = table[-1]
        row = []
        for i in range(len(prev) - 1):
            x_far, x_near = xs[i], xs[i + j]
            row.append((x_far * prev[i + 1] - x_near * prev[i]) / (x_far - x_near))
        table.append(row)
    return table


def lt_extract(table: ZeroTable, p: SineParams, family: str | None = None,
               s_grid: Sequence[float] | None = None,
               rel_tol: float = 1e-3) -> LinearTermEstimate:
    """Estimate Phi in exp(-s A') L(s) = V(i alpha s) + s Phi + O(s^2).

    Phi should equal sum_k f(k) (sine) or sum_k f~(k) (exp).
    """
    if s_grid is None:
        s_grid = default_lt_grid(table, p.alpha)
    s = _check_grid(table, p.alpha, s_grid, 3)
    ds = [d_function(table, p, x, family) for x in s]
    g = [d.value / x for d, x in zip(ds, s)]
    tab = _neville_at_zero(s, g)
    est = tab[-1][0]
    err = abs(tab[-1][0] - tab[-2][0]) if len(tab) > 1 else math.inf
    tail = max(d.tail_bound / x for d, x in zip(ds, s))
    converged = err <= rel_tol * abs(est) or (est == 0 and err == 0)
    return LinearTermEstimate(complex(est), float(err), float(tail), s,
                              [d.value for d in ds], tab, bool(converged))


@dataclass
class LinearTermFit:
    """Laurent fit of the meromorphic part of L itself."""

    lt: complex
    c_minus1: complex
    c_0: complex
    residual_norm: float
    s_grid: list


DIRECT_FIT_POINTS = 10
DIRECT_FIT_RATIO = 0.6
DIRECT_FIT_TERMS = 6


def direct_fit_grid(table: ZeroTable, alpha: float) -> list[float]:
    """Decreasing geometric grid (ratio 0.6, 10 points) from the truncation floor."""
    s_min = TRUNCATION_EXPONENT / (alpha * table.t_max)
    n = DIRECT_FIT_POINTS
    return [s_min * DIRECT_FIT_RATIO ** -(n - 1 - k) for k in range(n)]


def lt_direct_fit(table: ZeroTable, p: SineParams, family: str | None = None,
                  grid: Sequence[float] | None = None) -> LinearTermFit:
    """Linear term of L(s) fitted directly, independently of any closed form.

    The log s part of L is exp(s A) * log_part(s) with A = A' + i alpha/2, as
    inherited from phi(alpha s); subtracting it leaves the meromorphic part,
    whose s^1 coefficient is the linear term.  exp(s A) makes the higher
    Laurent coefficients larger than for phi alone, so the fit carries three
    guard terms on a denser grid that stays below s ~ 0.05.
    """
    alpha = p.alpha
    if grid is None:
        grid = direct_fit_grid(table, alpha)
    s = np.asarray(_check_grid(table, alpha, grid, DIRECT_FIT_TERMS + 2))
    fam = family or ("exp" if isinstance(p, ExpParams) else "sine")
    _, a_prime, _ = _family(p, fam)
    shift = a_prime + 0.5j * alpha
    vals = []
    for x in s:
        lv = _l_value(table, p, x, fam).value
        log_part, _ = cramer.phi_singular_model(alpha, x)
        vals.append(lv - cmath.exp(x * shift) * log_part * math.log(x))
    coef, resid, _ = cramer._fit(s, np.asarray(vals), DIRECT_FIT_TERMS)
    return LinearTermFit(complex(coef[2]), complex(coef[0]), complex(coef[1]), resid,
                         [float(x) for x in s])


# ------------------------------------------------------------ sign adjudication

@dataclass
class AdjudicationResult:
    """Outcome of reconciling closed-form LT differences with numeric ones."""

    winner: int | None
    matching_signs: list
    mismatches: dict
    pairs: list
    numeric_deltas: list
    tolerance: float

    @property
    def decided(self) -> bool:
        return self.winner is not None


def _numeric_lt(coeffs: cramer.LaurentCoeffs, shift: complex, phi_hat: complex) -> complex:
    # LT of exp(sA) phi_alpha(s) = A^2 c_{-1}/2 + A c_0 + c_1, plus the O(s) part Phi
    return 0.5 * shift * shift * coeffs.c_minus1 + shift * coeffs.c_0 + coeffs.c_1 + phi_hat


def adjudicate_sign_c0(table: ZeroTable, pairs: Sequence[tuple], tol: float = 1e-3,
                       coeffs: Mapping | None = None, method: str = "composition",
                       s_grid: Sequence[float] | None = None) -> AdjudicationResult:
    """Decide which sign of the c_0 term reproduces numeric linear-term differences.

    ``pairs`` holds (alpha, z, z') triples of single-factor sine problems.
    With ``method="composition"`` the numeric linear term is assembled from
    fitted Laurent coefficients of phi(alpha s) and :func:`lt_extract`; with
    ``method="direct"`` it is fitted from L(s) itself by :func:`lt_direct_fit`.
    c_1 cancels in every difference.
    """
    coeffs = dict(coeffs or {})
    deltas = []
    for alpha, z, zp in pairs:
        p, q = SineParams((alpha,), (z,)), SineParams((alpha,), (zp,))
        if method == "composition":
            if alpha not in coeffs:
                coeffs[alpha] = cramer.extract_laurent_coeffs(table, alpha)
            lc = coeffs[alpha]
            lt_p = _numeric_lt(lc, sine_shift(p), lt_extract(table, p, "sine", s_grid).phi_estimate)
            lt_q = _numeric_lt(lc, sine_shift(q), lt_extract(table, q, "sine", s_grid).phi_estimate)
        elif method == "direct":
            lt_p = lt_direct_fit(table, p, "sine").lt
            lt_q = lt_direct_fit(table, q, "sine").lt
        else:
            raise ValueError(f"unknown method {method!r}")
        deltas.append(lt_p - lt_q)

    mismatches = {}
    for sign in (1, -1):
        errs = []
        for (alpha, z, zp), delta in zip(pairs, deltas):
            p, q = SineParams((alpha,), (z,)), SineParams((alpha,), (zp,))
            closed = (poly_F(p, sign) + f_product(table, alpha, z).value) \
                - (poly_F(q, sign) + f_product(table, alpha, zp).value)
            errs.append(abs(closed - delta))
        mismatches[sign] = errs
    matching = [sign for sign, errs in mismatches.items() if max(errs) <= tol]
    winner = matching[0] if len(matching) == 1 else None
    return AdjudicationResult(winner, matching, mismatches, list(pairs), deltas, tol)
