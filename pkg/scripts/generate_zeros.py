#!/usr/bin/env python3
"""Generate a table of the first N zeta-zero ordinates (Odlyzko text format).

Offline stand-in for downloading a published table.  Zeros are bracketed with a
vectorized Riemann-Siegel Z (leading correction only), counted against Rosser
blocks of good Gram points, and polished with mpmath's double-precision
``siegelz`` (error around 1e-10 for t < 1e5).

    python scripts/generate_zeros.py --count 100000 --out data/zeros_100k.txt
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import mpmath
import numpy as np

TWO_PI = 2.0 * math.pi


def theta(t):
    t = np.asarray(t, dtype=float)
    return (t / 2.0) * np.log(t / TWO_PI) - t / 2.0 - math.pi / 8.0 \
        + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t**3)


def theta_prime(t):
    return 0.5 * np.log(np.asarray(t, dtype=float) / TWO_PI)


def gram_points(n_lo: int, n_hi: int) -> np.ndarray:
    """g_n for n in [n_lo, n_hi] (theta(g_n) = n*pi), by vectorized Newton."""
    n = np.arange(n_lo, n_hi + 1, dtype=float)
    target = n * math.pi
    # asymptotic initial guess via the Lambert-W form of theta ~ t/2 log(t/2pi e)
    g = TWO_PI * np.exp(1.0 + np.real(_lambertw((8 * n + 1) / (8 * math.e))))
    for _ in range(40):
        step = (theta(g) - target) / theta_prime(g)
        g -= step
        if np.max(np.abs(step)) < 1e-12:
            break
    return g


def _lambertw(x):
    from scipy.special import lambertw

    return lambertw(x)


def z_rs(t: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Riemann-Siegel Z with the C0 correction, vectorized over t."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    for lo in range(0, t.size, chunk):
        tt = t[lo:lo + chunk]
        a = np.sqrt(tt / TWO_PI)
        big_n = np.floor(a).astype(int)
        p = a - big_n
        th = theta(tt)
        nmax = int(big_n.max())
        k = np.arange(1, nmax + 1, dtype=float)
        terms = np.cos(th[:, None] - tt[:, None] * np.log(k)[None, :]) / np.sqrt(k)[None, :]
        terms[k[None, :] > big_n[:, None]] = 0.0
        main = 2.0 * terms.sum(axis=1)
        c0 = np.cos(TWO_PI * (p * p - p - 1.0 / 16.0)) / np.cos(TWO_PI * p)
        sign = np.where(big_n % 2 == 1, 1.0, -1.0)
        out[lo:lo + chunk] = main + sign * a**-0.5 * c0
    return out


def z_exact(t: float) -> float:
    return float(mpmath.fp.siegelz(t))


def find_zeros(count: int, subdiv: int = 6, log=print) -> np.ndarray:
    # enough Gram points to pass the count-th zero (N(g_n) ~ n + 1)
    n_hi = count + 50
    g = gram_points(-1, n_hi)
    ns = np.arange(-1, n_hi + 1)
    zg = z_rs(g)
    low = g < 300.0
    zg[low] = [z_exact(x) for x in g[low]]
    doubtful = np.abs(zg) < 1e-3
    zg[doubtful] = [z_exact(x) for x in g[doubtful]]
    good = np.sign(zg) == np.where(ns % 2 == 0, 1.0, -1.0)
    good_idx = np.flatnonzero(good)
    log(f"gram points: {g.size}, good: {good_idx.size}")

    brackets = []
    for a, b in zip(good_idx[:-1], good_idx[1:]):
        expected = int(b - a)
        found = _brackets_between(g[a], g[b], expected * subdiv, zg[a], zg[b])
        mult = 8
        while len(found) < expected:
            if mult > 4096:
                raise RuntimeError(f"cannot separate zeros in [{g[a]}, {g[b]}]")
            found = _brackets_between(g[a], g[b], expected * subdiv * mult, zg[a], zg[b],
                                      exact=True)
            mult *= 4
        if len(found) != expected:
            raise RuntimeError(f"Rosser block [{g[a]}, {g[b]}]: {len(found)} != {expected}")
        brackets.extend(found)
        if len(brackets) >= count + 1:
            break
    # zeros below the first good Gram point
    first = _brackets_between(10.0, g[good_idx[0]], 64, z_exact(10.0), zg[good_idx[0]],
                              exact=True)
    brackets = first + brackets
    brackets = brackets[:count]
    lo = np.array([b[0] for b in brackets])
    hi = np.array([b[1] for b in brackets])
    return _refine(lo, hi, log)


def _brackets_between(a, b, npts, za, zb, exact=False):
    ts = np.linspace(a, b, npts + 1)
    if exact or a < 300.0:
        zs = np.array([za] + [z_exact(x) for x in ts[1:-1]] + [zb])
    else:
        zs = z_rs(ts)
        zs[0], zs[-1] = za, zb
    idx = np.flatnonzero(np.sign(zs[:-1]) != np.sign(zs[1:]))
    return [(ts[i], ts[i + 1]) for i in idx]


def _refine(lo: np.ndarray, hi: np.ndarray, log) -> np.ndarray:
    # vectorized bisection on the cheap Z, then two accurate evaluations per zero
    zlo = z_rs(lo)
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        zm = z_rs(mid)
        left = np.sign(zm) == np.sign(zlo)
        lo = np.where(left, mid, lo)
        zlo = np.where(left, zm, zlo)
        hi = np.where(left, hi, mid)
    root = 0.5 * (lo + hi)
    start = time.time()
    out = np.empty_like(root)
    for i, r in enumerate(root):
        h = 1e-6
        # secant polish with the accurate Z, twice
        for _ in range(2):
            z1, z2 = z_exact(r - h), z_exact(r + h)
            r = r - h - z1 * (2 * h) / (z2 - z1)
            h = 1e-7
        out[i] = r
        if i % 10000 == 0:
            log(f"  polished {i}/{root.size} ({time.time() - start:.0f}s)")
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100000)
    ap.add_argument("--out", required=True)
    ap.add_argument("--digits", type=int, default=9)
    args = ap.parse_args(argv)

    zeros = find_zeros(args.count, log=lambda m: print(m, file=sys.stderr))
    if np.any(np.diff(zeros) <= 0):
        raise RuntimeError("ordinates not strictly increasing")
    with open(args.out, "w") as fh:
        for z in zeros:
            fh.write(f"{z:.{args.digits}f}\n")
    print(f"wrote {zeros.size} zeros to {args.out}; last = {zeros[-1]:.{args.digits}f}",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
