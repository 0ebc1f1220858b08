#!/usr/bin/env python3
"""Numerical experiments behind the verification suite.

    python scripts/experiments.py holomorphy      # remainder along the pi/4 ray
    python scripts/experiments.py c1-profile      # c_1(alpha) on a grid of alpha
    python scripts/experiments.py adjudicate      # both adjudication methods, per pair
    python scripts/experiments.py density-tail    # bound vs actual suffix sums

All commands take ``--zeros FILE`` (default: the bundled 1e5-zero cache).
"""

from __future__ import annotations

import cmath
import math
from importlib import resources

import click
import numpy as np

from zetaprod import cramer, regprod
from zetaprod.summation import density_tail
from zetaprod.verify import (ADJUDICATION_PAIRS, HOLOMORPHY_RADII, holomorphy_scan,
                             remainder_convergence_order)
from zetaprod.zeros import load_zero_table


def _table(path):
    path = path or str(resources.files("zetaprod") / "data" / "zeros_100k.zrt")
    return load_zero_table(path)


@click.group()
def main():
    """Experiments on the first 1e5 zeros."""


zeros_opt = click.option("--zeros", "path", default=None, help="Zero table.")


@main.command()
@zeros_opt
def holomorphy(path):
    """Remainder V - Cramer model along s = r e^{i pi/4}."""
    table = _table(path)
    radii = HOLOMORPHY_RADII + (0.025, 0.0125, 0.00625)
    ray = cmath.exp(0.25j * math.pi)
    click.echo("r,re,im,abs,tail_bound")
    for r in radii:
        v = cramer.cramer_remainder(table, r * ray)
        click.echo(f"{r!r},{v.value.real!r},{v.value.imag!r},{abs(v.value)!r},{v.tail_bound!r}")
    for label, rr in (("r in [0.05, 1]", HOLOMORPHY_RADII),
                      ("r in [0.00625, 0.05]", (0.05, 0.025, 0.0125, 0.00625))):
        click.echo(f"slope of |R| vs log r, {label}: {holomorphy_scan(table, rr)[2]:+.4f}")
    click.echo(f"convergence order of R(r) - R(r/2): {remainder_convergence_order(table):.3f}")


@main.command("c1-profile")
@zeros_opt
@click.option("--alphas", default="0.25,0.5,0.75,1,1.5,2,3", show_default=True)
def c1_profile(path, alphas):
    """Fitted c_{-1}, c_0, c_1 for several alpha."""
    table = _table(path)
    click.echo("alpha,c_minus1_rel_err,c0_minus_7/8,re_c1,im_c1,c1_spread")
    for a in (float(x) for x in alphas.split(",")):
        lc = cramer.extract_laurent_coeffs(table, a)
        ref = cramer.c_minus1_closed_form(a)
        click.echo(f"{a},{abs(lc.c_minus1 - ref) / abs(ref):.2e},{abs(lc.c_0 - 0.875):.2e},"
                   f"{lc.c_1.real:.8f},{lc.c_1.imag:.1e},{lc.c_1_uncertainty:.1e}")


@main.command()
@zeros_opt
def adjudicate(path):
    """Per-pair mismatches of both signs, composition and direct-fit routes."""
    table = _table(path)
    for method in ("composition", "direct"):
        res = regprod.adjudicate_sign_c0(table, ADJUDICATION_PAIRS, 1e-3, method=method)
        click.echo(f"{method}: winner {res.winner}")
        for i, pair in enumerate(ADJUDICATION_PAIRS):
            click.echo(f"  {pair}: +1 -> {res.mismatches[1][i]:.2e}, "
                       f"-1 -> {res.mismatches[-1][i]:.2e}")


@main.command("density-tail")
@zeros_opt
def density_tail_cmd(path):
    """density_tail(a, tau_k) against the summed remainder of the table."""
    table = _table(path)
    click.echo("a,k,log_suffix_sum,log_bound,log_ratio")
    for a in (0.001, 0.01, 0.5, 1.0, 2.0):
        for k in (100, 1000, 10_000):
            t_k = table.ordinates[k - 1]
            x = -a * table.ordinates[k:]
            log_suffix = x.max() + math.log(math.fsum(np.exp(x - x.max()).tolist()))
            log_bound = -a * t_k + math.log(math.log(t_k) + 1 / (a * t_k)) - math.log(math.pi * a)
            click.echo(f"{a},{k},{log_suffix:.4f},{log_bound:.4f},{log_suffix - log_bound:.4f}")
    click.echo(f"(density_tail itself returns 0 once a*T > 745: e.g. {density_tail(2.0, 1e3)})")


if __name__ == "__main__":
    main()
