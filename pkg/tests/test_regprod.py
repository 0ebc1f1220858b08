import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaprod import regprod
from zetaprod.cramer import CONSTANTS, TruncationRangeError, v_func
from zetaprod.regprod import (
    LOG_MINUS_2I,
    C1Mode,
    ExpParams,
    MissingC1Error,
    SineParams,
    S_exp,
    S_sine,
    L_direct,
    L_tilde_direct,
    d_function,
    discrepancy_exp,
    discrepancy_sine,
    f_product,
    f_series,
    f_tilde_product,
    f_tilde_series,
    kw_coefficients,
    kw_linear_reconciliation,
    lt_extract,
    poly_F,
    poly_F_tilde,
)

GAMMA_LOG = CONSTANTS.euler_gamma + math.log(2 * math.pi)

z_strategy = st.builds(complex, st.floats(0.0, 6.28), st.floats(-1.5, 0.0))
alpha_strategy = st.floats(0.2, 3.0)


def test_params_domain():
    with pytest.raises(ValueError):
        SineParams((1.0,), (0.3 + 1e-9j,))
    with pytest.raises(ValueError):
        SineParams((1.0,), (2 * math.pi,))
    with pytest.raises(ValueError):
        SineParams((0.0,), (0j,))
    with pytest.raises(ValueError):
        SineParams((1.0, 2.0), (0j,))
    with pytest.raises(ValueError):
        ExpParams((1.0,), (0j,), (1.01,))
    p = SineParams((1, 2), (0.3 - 0.1j, 1.0 - 0.2j))
    assert p.n == 2 and p.alpha == 3 and p.z == pytest.approx(1.3 - 0.3j)


def test_poly_F_vanishing_A():
    # formal evaluation point z = -i n log(-2i) + alpha/2 (outside the domain)
    alpha = 1.5
    z = -1j * LOG_MINUS_2I + alpha / 2
    shift = LOG_MINUS_2I - 1j * z + 0.5j * alpha
    assert abs(shift) < 1e-15
    c1 = C1Mode.numeric({alpha: 0.25 - 0.5j})
    assert regprod._quadratic(alpha, shift, 1, c1) == pytest.approx(0.25 - 0.5j, abs=1e-14)


def test_poly_F_independent_evaluation():
    p = SineParams((1.0,), (0j,))
    with mpmath.workdps(30):
        a = mpmath.log(-2j) + 0.5j
        ref = -(mpmath.euler + mpmath.log(2 * mpmath.pi)) / (4 * mpmath.pi) * a**2 \
            + mpmath.mpf(7) / 8 * a
    assert poly_F(p, 1, C1Mode.omit()) == pytest.approx(complex(ref), rel=1e-14)


def test_poly_F_quadratic_coefficient_matches_A_alpha():
    alpha = 1.7
    a_alpha, _ = kw_coefficients(alpha)

    def F(x):
        return regprod._quadratic(alpha, LOG_MINUS_2I - 1j * alpha * x + 0.5j * alpha, 1,
                                  C1Mode.omit())

    second = 0.5 * (F(1.0) - 2 * F(0.0) + F(-1.0))
    assert second == pytest.approx(a_alpha, rel=1e-13)
    assert kw_coefficients(1.0)[0] == pytest.approx(GAMMA_LOG / (4 * math.pi), rel=1e-15)


@given(st.floats(math.exp(-CONSTANTS.euler_gamma) / (2 * math.pi) * 1.001, 100))
def test_A_alpha_positive(alpha):
    a, _ = kw_coefficients(alpha)
    assert a.imag == 0 and a.real > 0


def test_kw_linear_reconciliation_is_unique():
    for alpha in (0.5, 1.0, 2.0):
        hits = [k for k, ok in kw_linear_reconciliation(alpha).items() if ok]
        # quadratic parts agree, but the published B_alpha is the negated
        # x-coefficient of F (sign +1), cross term included
        assert hits == [(1, True)]


def test_poly_F_tilde_examples():
    p = ExpParams((1.2,), (0.6,), (0.5,))
    assert poly_F_tilde(p, 1, C1Mode.numeric({1.2: 3.0})) == pytest.approx(3.0, abs=1e-15)

    def F(x):
        return poly_F_tilde(ExpParams((1.0,), (x,), (0,)), 1, C1Mode.omit())

    # quadratic part in x is +(gamma+log 2pi)/(4pi) (x - 1/2)^2
    second = 0.5 * (F(1.0) - 2 * F(0.5) + F(0.0)) / 0.25
    assert second == pytest.approx(GAMMA_LOG / (4 * math.pi), rel=1e-12)


@given(st.lists(st.tuples(alpha_strategy, z_strategy), min_size=1, max_size=4))
def test_F_minus_F_tilde_doubled(items):
    alphas, zs = zip(*items)
    p = SineParams(alphas, zs)
    a = regprod.sine_shift(p)
    a2 = 0.5j * (2 * p.alpha) - 1j * (2 * p.z)
    # A~ at doubled arguments is 2(A - n log(-2i)) ... A - A~_2/2 = n log(-2i)
    assert a - 0.5 * a2 == pytest.approx(p.n * LOG_MINUS_2I, abs=1e-12)


def test_missing_c1():
    with pytest.raises(MissingC1Error):
        poly_F(SineParams((1.0,), (0j,)), 1, C1Mode.numeric())
    with pytest.raises(ValueError):
        C1Mode("guess")


def test_sign_parameter():
    with pytest.raises(ValueError):
        poly_F(SineParams((1.0,), (0j,)), 0)


def test_f_series_truncation(table):
    one = f_series(table, 1.0, 0j, M=1)
    many = f_series(table, 1.0, 0j, M=30)
    # the bound is tight here; allow last-bit rounding of the partial sums
    assert abs(one.value - many.value) <= one.tail_bound + 1e-15 * abs(many.value)


ORDER_SWAP = [(1.0, 0.3 - 0.1j), (0.5, 0.0), (2.0, 6.2 - 0.01j), (0.3, 3.0 - 1.0j)]


@pytest.mark.parametrize("alpha,z", ORDER_SWAP)
def test_order_swap_sine(table, alpha, z):
    a, b = f_series(table, alpha, z), f_product(table, alpha, z)
    assert a.agrees_with(b)
    assert a.tail_bound <= 1e-10 and b.tail_bound <= 1e-10


def test_order_swap_exp(table):
    a, b = f_tilde_series(table, 1.0, 0.3 - 0.1j, 0.5), f_tilde_product(table, 1.0, 0.3 - 0.1j, 0.5)
    assert a.agrees_with(b)


def test_f_monotone_in_imaginary_part(table):
    vals = [abs(f_product(table, 1.0, complex(0.3, -y)).value) for y in (0, 0.5, 1, 2)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_f_product_factor_identity(table1k):
    alpha, z = 1.0, 0.3 - 0.1j
    f = f_product(table1k, alpha, z)
    with mpmath.workdps(30):
        prod = mpmath.mpf(1)
        for t in table1k.ordinates:
            w = alpha * (mpmath.mpf(0.5) + 1j * mpmath.mpf(float(t))) - z
            prod *= -2j * mpmath.exp(1j * w) * mpmath.sin(w)
    assert cmath.exp(-f.value) == pytest.approx(complex(prod), rel=1e-13)


def test_f_near_two_pi(table):
    assert math.isfinite(abs(f_product(table, 1.0, 2 * math.pi - 1e-9).value))


def test_f_tilde_zero_omega(table):
    assert f_tilde_product(table, 1.0, 0.3, 0).value == 0
    assert f_tilde_series(table, 1.0, 0.3, 0).value == 0


def test_f_tilde_matches_f_at_doubled(table):
    alpha, z = 0.7, 0.4 - 0.2j
    a = f_tilde_product(table, 2 * alpha, 2 * z, 1.0)
    b = f_product(table, alpha, z)
    assert a.value == pytest.approx(b.value, rel=1e-13)


def test_assembly_routes(table):
    p = SineParams((1.0, 2.0), (0.3 - 0.1j, 1.0 - 0.2j))
    r = S_sine(table, p, 1, C1Mode.omit())
    assert r.route_gap <= 1e-12
    assert r.c1_flagged


def test_n1_shape(table):
    alpha, x = 0.8, 0.25
    p = SineParams((alpha,), (alpha * x,))
    r = S_sine(table, p)
    poch = cmath.exp(regprod.log_zeta_pochhammer(
        table, regprod.PochhammerArgs(cmath.exp(-2j * alpha * x), 2 * alpha)).value)
    assert r.value == pytest.approx(cmath.exp(-r.F) * poch, rel=1e-14)


def test_S_exp_zero_omega(table):
    p = ExpParams((1.0,), (0.4,), (0,))
    r = S_exp(table, p)
    assert r.value == cmath.exp(-r.F)
    assert r.tail_bound == 0


@settings(max_examples=10, deadline=None)
@given(st.lists(st.tuples(alpha_strategy, st.builds(complex, st.floats(0.0, 3.1),
                                                     st.floats(-1.0, 0.0))),
                min_size=1, max_size=3))
def test_cross_family(table, items):
    alphas, zs = zip(*items)
    p = SineParams(alphas, zs)
    q = ExpParams(tuple(2 * a for a in alphas), tuple(2 * z for z in zs), (1.0,) * p.n)
    s = S_sine(table, p)
    t = S_exp(table, q)
    lhs = t.value * cmath.exp(t.F)
    rhs = s.value * cmath.exp(s.F)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


def test_domain_shift_rejected(table):
    with pytest.raises(ValueError):
        S_sine(table, SineParams((1.0,), (0.3 + 1e-6j,)))


@given(alpha_strategy, z_strategy, st.complex_numbers(max_magnitude=1.0))
def test_n1_discrepancy_exactly_zero(alpha, z, w):
    assert discrepancy_sine(None, SineParams((alpha,), (z,))).discrepancy == 0
    assert discrepancy_exp(None, ExpParams((alpha,), (z,), (w,))).discrepancy == 0
    c1 = C1Mode.numeric({alpha: 0.3 + 0.1j})
    assert discrepancy_sine(None, SineParams((alpha,), (z,)), -1, c1).discrepancy == 0


@given(st.lists(st.tuples(alpha_strategy, z_strategy), min_size=2, max_size=4))
def test_discrepancy_identity(items):
    alphas, zs = zip(*items)
    rep = discrepancy_sine(None, SineParams(alphas, zs))
    assert rep.discrepancy == sum(rep.per_factor_F, 0j) - rep.combined_F
    assert rep.flagged and rep.note


def test_discrepancy_n2_numeric(table):
    p = SineParams((1.0, 1.0), (0j, 0j))
    rep = discrepancy_sine(table, p, 1, C1Mode.numeric())
    c1 = rep.c1_mode
    f1 = poly_F(SineParams((1.0,), (0j,)), 1, c1)
    f2 = poly_F(p, 1, c1)
    assert rep.discrepancy == 2 * f1 - f2
    assert rep.per_factor_F[0] == rep.per_factor_F[1]
    assert not rep.flagged


def test_L_reciprocal_sine(table100):
    p = SineParams((1.0,), (0j,))
    got = L_direct(table100, p, 1.0).value
    rho = 0.5 + 1j * table100.ordinates
    ref = np.sum(1 / np.sin(rho))
    assert got == pytest.approx(complex(ref), rel=1e-12)


def test_L_tilde_reciprocal(table100):
    p = ExpParams((1.0,), (0.3,), (0.5,))
    got = L_tilde_direct(table100, p, 1.0).value
    rho = 0.5 + 1j * table100.ordinates
    ref = np.sum(1 / (np.exp(-1j * (rho - 0.3)) - 0.5))
    assert got == pytest.approx(complex(ref), rel=1e-12)


def test_L_tilde_zero_omega(table):
    p = ExpParams((1.3,), (0.2,), (0,))
    s = 0.01
    got = L_tilde_direct(table, p, s).value
    ref = cmath.exp(-1j * s * p.z) * v_func(table, 1j * p.alpha * s).value
    assert got == pytest.approx(ref, rel=1e-13)


def test_L_dominance(table100):
    p = SineParams((1.0,), (0j,))
    total = L_direct(table100, p, 5.0).value
    first = L_direct(table100.prefix(1), p, 5.0).value
    t1, t2 = table100.ordinates[:2]
    assert abs(total / first - 1) < 2 * math.exp(-5 * (t2 - t1))


def test_L_branch_convention(table100):
    # with Re(w) = alpha/2 - Re(z) < -pi/2 the arguments of (-2i), e^{iw} and
    # (1 - e^{2iw}) add up past -pi, so the principal power of sin(w) picks a
    # different branch; L_direct must use the factorized one
    z = 3.0
    p = SineParams((1.0,), (z,))
    tau = table100.ordinates[:5]
    w = 0.5 + 1j * tau - z
    s = 0.5
    factorized = np.exp(s * LOG_MINUS_2I) * np.exp(1j * s * w) * (1 - np.exp(2j * w)) ** (-s)
    principal = np.sin(w) ** (-s)
    assert not np.allclose(factorized, principal)
    got = L_direct(table100.prefix(5), p, s).value
    assert got == pytest.approx(complex(factorized.sum()), rel=1e-12)
    assert got != pytest.approx(complex(principal.sum()), rel=1e-6)


def test_refinement_L_tilde(table10k, table):
    p = ExpParams((1.0,), (0.3,), (0.5j,))
    coarse = L_tilde_direct(table10k, p, 0.05)
    fine = L_tilde_direct(table, p, 0.05)
    assert abs(fine.value - coarse.value) <= coarse.tail_bound + 1e-12 * abs(fine.value)


def test_d_function_fused_matches_mpmath(table100):
    # D(s) = exp(-sA') L(s) - V(i alpha s) by literal subtraction at high precision
    p = SineParams((1.0,), (0.3 - 0.1j,))
    s = 0.5
    got = d_function(table100, p, s).value
    with mpmath.workdps(60):
        a = mpmath.mpf(1)
        z = mpmath.mpc(0.3, -0.1)
        aprime = mpmath.log(-2j) - 1j * z
        L = mpmath.mpf(0)
        V = mpmath.mpf(0)
        for t in table100.ordinates:
            rho = mpmath.mpf(0.5) + 1j * mpmath.mpf(float(t))
            w = a * rho - z
            L += mpmath.exp(s * mpmath.log(-2j)) * mpmath.exp(1j * s * w) \
                * mpmath.exp(-s * mpmath.log(1 - mpmath.exp(2j * w)))
            V += mpmath.exp(1j * a * s * rho)
        ref = mpmath.exp(-s * aprime) * L - V
    assert got == pytest.approx(complex(ref), rel=1e-10)


def test_lt_insufficient_range(table100):
    with pytest.raises(TruncationRangeError, match="insufficient truncation range"):
        lt_extract(table100, SineParams((1.0,), (0.3 - 0.1j,)))


@pytest.mark.parametrize("alphas,zs", [((1.0,), (0.3 - 0.1j,)),
                                       ((1.0, 2.0), (0j, 0.5 - 0.1j))])
def test_lt_sine(table, alphas, zs):
    p = SineParams(alphas, zs)
    est = lt_extract(table, p, "sine")
    target = sum(f_product(table, a, z).value for a, z in zip(alphas, zs))
    assert abs(est.phi_estimate - target) <= 1e-3 * abs(target)
    assert est.converged


def test_lt_exp_zero_omega_identically(table):
    p = ExpParams((1.0, 0.5), (0.3, 0.1 - 0.2j), (0, 0))
    est = lt_extract(table, p, "exp")
    assert all(d == 0 for d in est.d_values)
    assert est.phi_estimate == 0


def test_lt_exp(table):
    p = ExpParams((1.0,), (0.3 - 0.1j,), (0.5,))
    est = lt_extract(table, p, "exp")
    target = f_tilde_product(table, 1.0, 0.3 - 0.1j, 0.5).value
    assert abs(est.phi_estimate - target) <= 1e-3 * abs(target)
