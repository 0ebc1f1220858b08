import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaprod import summation
from zetaprod.summation import (
    BoundedValue,
    cexpm1,
    clog1p,
    compensated_sum,
    density_tail,
    exp_sum,
    log_one_minus_sum,
)

small = st.complex_numbers(max_magnitude=1e-3, allow_nan=False, allow_infinity=False)


@given(small)
def test_clog1p_against_mpmath(u):
    ref = complex(mpmath.log1p(mpmath.mpc(u.real, u.imag)))
    got = complex(clog1p(u))
    assert abs(got - ref) <= 4e-16 * max(abs(ref), 1e-300)


@given(small)
def test_cexpm1_against_mpmath(w):
    ref = complex(mpmath.expm1(mpmath.mpc(w.real, w.imag)))
    got = complex(cexpm1(w))
    assert abs(got - ref) <= 4e-16 * max(abs(ref), 1e-300)


def test_bounded_value_invariants():
    with pytest.raises(ValueError):
        BoundedValue(1.0, -1.0)
    with pytest.raises(ValueError):
        BoundedValue(1.0, math.inf)
    b = BoundedValue(1 + 1j, 0.5) + BoundedValue(1, 0.25)
    assert b.value == 2 + 1j and b.tail_bound == 0.75


def test_compensated_sum_is_order_free():
    rng = np.random.default_rng(1)
    x = rng.standard_normal(1000) * 10.0 ** rng.integers(-10, 10, 1000)
    z = x + 1j * x[::-1]
    assert compensated_sum(z) == compensated_sum(z[::-1])
    with pytest.raises(OverflowError):
        compensated_sum([1.0, math.inf])


def test_exp_sum_first_zero_dominance(table100):
    got = exp_sum(table100, 10).value
    t1, t2 = (mpmath.mpf(float(x)) for x in table100.ordinates[:2])
    ref = mpmath.exp(-10 * t1)
    assert abs(got / complex(ref) - 1) < 1e-15      # delta well below double precision
    assert float(mpmath.exp(-10 * (t2 - t1))) < 1e-29


def test_exp_sum_domain(table100):
    with pytest.raises(ValueError):
        exp_sum(table100, 1j)
    with pytest.raises(ValueError):
        exp_sum(table100, -1)


def test_exp_sum_refinement(table100, table):
    coarse, fine = exp_sum(table100, 1), exp_sum(table, 1)
    assert abs(fine.value - coarse.value) <= coarse.tail_bound


@pytest.mark.parametrize("n", [100, 1000, 10_000])
def test_monotone_refinement_prefixes(table, n):
    p = table.prefix(n)
    for a in (0.5, 1.0, 2.0 + 3j):
        assert abs(exp_sum(table, a).value - exp_sum(p, a).value) <= exp_sum(p, a).tail_bound


def _log_suffix(tau, a):
    # log sum exp(-a tau), without underflow
    x = -a * tau
    top = x.max()
    return top + math.log(math.fsum(np.exp(x - top).tolist()))


def _log_density_tail(a, t):
    return -a * t + math.log(math.log(t) + 1 / (a * t)) - math.log(math.pi * a)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 0.01, 0.001])
@pytest.mark.parametrize("k", [100, 1000, 10_000])
def test_density_tail_soundness(table, a, k):
    t_k = table.ordinates[k - 1]
    # compared in log space: e^{-a tau} underflows for a * tau > 745
    assert _log_suffix(table.ordinates[k:], a) <= _log_density_tail(a, t_k)
    tail = math.fsum(np.exp(-a * table.ordinates[k:]).tolist())
    assert tail <= density_tail(a, t_k)


def test_density_tail_suffix_oracle(table):
    t1000 = table.ordinates[999]
    direct = math.fsum(np.exp(-table.ordinates[1000:]).tolist())
    assert direct <= density_tail(1.0, t1000)


@given(st.floats(0.01, 50), st.floats(14.0, 1e5))
def test_density_tail_monotone(a, t):
    assert density_tail(a * 1.5, t) <= density_tail(a, t)
    assert density_tail(a, 2 * t) < density_tail(a, t) or density_tail(a, t) == 0.0


def test_density_tail_domain():
    with pytest.raises(ValueError):
        density_tail(0.0, 20.0)
    with pytest.raises(ValueError):
        density_tail(1.0, 0.5)


def test_log_one_minus_zero(table100):
    r = log_one_minus_sum(table100, 0, 1.0)
    assert r.value == 0 and r.tail_bound == 0


def test_log_one_minus_boundary(table100):
    a = 0.1
    with pytest.raises(ValueError):
        log_one_minus_sum(table100, math.exp(2 * a * table100.first), a)


def test_log_one_minus_series_oracle(table):
    # sum log(1 - e^{-2 tau}) = -sum_m exp_sum(2m) / m
    got = log_one_minus_sum(table, 1.0, 2.0)
    parts = [exp_sum(table, 2.0 * m) for m in range(1, 6)]
    series = sum((-p.value / m for m, p in enumerate(parts, 1)), 0j)
    bound = sum(p.tail_bound / m for m, p in enumerate(parts, 1)) + got.tail_bound
    assert abs(got.value - series) <= bound + 1e-15 * abs(series)


def test_log_one_minus_against_mpmath(table100):
    c, a = cmath.exp(-0.6j) * 1e4, 0.7
    got = log_one_minus_sum(table100, c, a).value
    with mpmath.workdps(40):
        cc = mpmath.mpc(c.real, c.imag)
        ref = mpmath.fsum(mpmath.log(1 - cc * mpmath.exp(-a * mpmath.mpf(float(t))))
                          for t in table100.ordinates)
    assert abs(got - complex(ref)) <= 1e-15 * abs(complex(ref)) + 1e-300


@settings(max_examples=10, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(-3.0, 3.0))
def test_thread_count_invariance(table, a, b):
    summation.set_threads(1)
    one = exp_sum(table, complex(a, b))
    lone = log_one_minus_sum(table, cmath.exp(1j * b), a)
    summation.set_threads(4)
    try:
        assert exp_sum(table, complex(a, b)) == one
        assert log_one_minus_sum(table, cmath.exp(1j * b), a) == lone
    finally:
        summation.set_threads(1)
