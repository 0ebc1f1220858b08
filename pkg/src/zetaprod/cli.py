"""Command-line interface.

    zetaprod zeros validate --file zeros1
    zetaprod cramer coeffs --alpha 1
    zetaprod regprod sine --alphas 1,2 --zs "0.3,-0.1;1.0,-0.2" --c1 numeric
    zetaprod regprod scan --family sine --quantity discrepancy --alphas 1,1 --zs "0,0;0,0" \\
        --param alpha1 --from 0.5 --to 2 --steps 100 --out scan.csv
    zetaprod verify all --out report.json

The zero table comes from ``--zeros``, else ``$ZETAPROD_ZEROS``, else the
bundled cache of the first 10^5 ordinates.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import click

from . import cramer, regprod, summation
from .pochhammer import PochhammerArgs, zeta_pochhammer
from .regprod import C1Mode, ExpParams, SineParams
from .verify import TOLERANCE_PROFILES, holomorphy_scan, run_verify_suite, to_jsonable
from .zeros import ZeroTableError, fetch_zeros, load_zero_table, validate

ENV_ZEROS = "ZETAPROD_ZEROS"
BUNDLED = "zeros_100k.zrt"


@dataclass
class Config:
    zeros_path: str | None = None
    zeros_limit: int | None = None
    tolerance_profile: str = "default"
    output_format: str = "json"
    parallelism: int = 1
    out: str | None = None

    def resolve_zeros_path(self) -> Path:
        if self.zeros_path:
            return Path(self.zeros_path)
        env = os.environ.get(ENV_ZEROS)
        if env:
            return Path(env)
        return Path(str(resources.files("zetaprod") / "data" / BUNDLED))

    def table(self, limit: int | None = None):
        try:
            return load_zero_table(self.resolve_zeros_path(), limit or self.zeros_limit)
        except ZeroTableError as exc:
            raise click.ClickException(str(exc)) from exc


# ------------------------------------------------------------------ parsing

def parse_complex(text: str) -> complex:
    """'RE,IM' or 'RE' -> complex."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise click.BadParameter(f"expected RE,IM, got {text!r}")


def parse_complex_list(text: str) -> list[complex]:
    return [parse_complex(item) for item in text.split(";") if item.strip()]


def parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def parse_sign(text: str) -> int:
    value = int(text)
    if value not in (1, -1):
        raise click.BadParameter("sign must be +1 or -1")
    return value


# ------------------------------------------------------------------ output

def emit(cfg: Config, payload, out: str | None = None, text: str | None = None) -> None:
    target = out or cfg.out
    if cfg.output_format == "text" and text is not None:
        body = text if text.endswith("\n") else text + "\n"
    else:
        body = json.dumps(to_jsonable(payload), indent=2, allow_nan=False) + "\n"
    if target:
        Path(target).write_text(body)
    else:
        click.echo(body, nl=False)


def emit_csv(cfg: Config, header, rows, out: str | None = None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    target = out or cfg.out
    if target:
        Path(target).write_text(buf.getvalue())
    else:
        click.echo(buf.getvalue(), nl=False)


def bounded(bv) -> dict:
    return {"value": bv.value, "tail_bound": bv.tail_bound}


# ------------------------------------------------------------------ root

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--zeros", "zeros_path", type=click.Path(dir_okay=False), default=None,
              help=f"Zero table (text or ZRT1 cache); default ${ENV_ZEROS} or bundled 1e5 table.")
@click.option("--limit", type=click.IntRange(min=1), default=None,
              help="Use only the first N ordinates.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write output to FILE instead of stdout.")
@click.option("--format", "output_format", type=click.Choice(["json", "csv", "text"]),
              default="json", show_default=True, help="Output format.")
@click.option("--profile", type=click.Choice(sorted(TOLERANCE_PROFILES)), default="default",
              show_default=True, help="Tolerance profile for verification.")
@click.option("--threads", type=click.IntRange(min=0), default=1, show_default=True,
              help="Worker threads (0 = one per CPU).")
@click.pass_context
def cli(ctx, zeros_path, limit, out, output_format, profile, threads):
    """Zeta-regularized products over the zeros of the Riemann zeta function."""
    summation.set_threads(threads)
    ctx.obj = Config(zeros_path, limit, profile, output_format, summation.get_threads(), out)


# ------------------------------------------------------------------ zeros

@cli.group()
def zeros():
    """Fetch and validate zero tables."""


@zeros.command("fetch")
@click.option("--url", required=True, help="URL of a plain-text zero list.")
@click.option("--out", "dest", required=True, type=click.Path(dir_okay=False),
              help="Destination file (directory must exist).")
def zeros_fetch(url, dest):
    """Download a zero table verbatim."""
    try:
        path = fetch_zeros(url, dest)
    except (ConnectionError, OSError) as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(str(path))


@zeros.command("validate")
@click.option("--file", "path", required=True, type=click.Path(dir_okay=False),
              help="Zero table to check.")
@click.option("--limit", type=click.IntRange(min=1), default=None, help="First N ordinates.")
@click.pass_obj
def zeros_validate(cfg: Config, path, limit):
    """Monotonicity, first zero and counting-function checks."""
    try:
        table = load_zero_table(path, limit)
    except ZeroTableError as exc:
        raise click.ClickException(str(exc)) from exc
    rep = validate(table)
    payload = {"source": table.source, "count": table.count,
               "monotone_ok": rep.monotone_ok, "first_zero_ok": rep.first_zero_ok,
               "max_counting_deviation": rep.max_counting_deviation,
               "duplicate_count": rep.duplicate_count, "ok": rep.ok}
    emit(cfg, payload, text="\n".join(f"{k}: {v}" for k, v in payload.items()))
    if not rep.ok:
        sys.exit(1)


@zeros.command("cache")
@click.option("--file", "path", required=True, type=click.Path(dir_okay=False),
              help="Text zero table to convert.")
@click.option("--out", "dest", required=True, type=click.Path(dir_okay=False),
              help="ZRT1 cache to write.")
def zeros_cache(path, dest):
    """Convert a text table to the binary ZRT1 cache."""
    from .zeros import write_cache

    write_cache(load_zero_table(path), dest)
    click.echo(dest)


# ------------------------------------------------------------------ cramer

@cli.group("cramer")
def cramer_group():
    """Cramer's V and phi functions."""


@cramer_group.command("phi")
@click.option("--s", "s_text", required=True, help="Argument RE,IM with RE > 0.")
@click.pass_obj
def cramer_phi(cfg: Config, s_text):
    """phi(s) = sum exp(-s tau)."""
    s = parse_complex(s_text)
    value = cramer.phi(cfg.table(), s)
    emit(cfg, {"s": s, **bounded(value)}, text=f"phi({s}) = {value.value!r} +- {value.tail_bound:.3e}")


@cramer_group.command("v")
@click.option("--s", "s_text", required=True, help="Argument RE,IM with IM > 0.")
@click.pass_obj
def cramer_v(cfg: Config, s_text):
    """V(s) = sum exp(s rho)."""
    s = parse_complex(s_text)
    value = cramer.v_func(cfg.table(), s)
    emit(cfg, {"s": s, **bounded(value)}, text=f"V({s}) = {value.value!r} +- {value.tail_bound:.3e}")


@cramer_group.command("remainder-scan")
@click.option("--ray-angle", type=float, default=math.pi / 4, show_default=True,
              help="Angle of the ray s = r e^{i A} (radians, in (0, pi)).")
@click.option("--decades", type=click.IntRange(min=1), default=4, show_default=True,
              help="Binary decades: r = 1, 1/2, ..., 2^-K.")
@click.option("--out", "dest", type=click.Path(dir_okay=False), default=None, help="CSV file.")
@click.pass_obj
def cramer_remainder_scan(cfg: Config, ray_angle, decades, dest):
    """|V(s) - Cramer singular model| along a ray towards 0."""
    radii = [2.0 ** -k for k in range(decades + 1)]
    rs, vals, slope = holomorphy_scan(cfg.table(), radii, ray_angle)
    rows = [[repr(float(r)), repr(v.value.real), repr(v.value.imag), repr(abs(v.value)),
             repr(v.tail_bound)] for r, v in zip(rs, vals)]
    emit_csv(cfg, ["r", "re", "im", "abs", "bound"], rows, dest)
    click.echo(f"slope of |remainder| vs log r: {slope:.6f}", err=True)


@cramer_group.command("coeffs")
@click.option("--alpha", type=float, required=True, help="alpha > 0.")
@click.option("--out", "dest", type=click.Path(dir_okay=False), default=None, help="JSON file.")
@click.pass_obj
def cramer_coeffs(cfg: Config, alpha, dest):
    """Laurent coefficients c_{-1}, c_0, c_1 of the meromorphic part of phi(alpha s)."""
    lc = cramer.extract_laurent_coeffs(cfg.table(), alpha)
    payload = {
        "alpha": alpha, "c_minus1": lc.c_minus1, "c_0": lc.c_0, "c_1": lc.c_1,
        "c_1_uncertainty": lc.c_1_uncertainty, "residual_norm": lc.residual_norm,
        "s_grid": lc.s_grid, "c_minus1_closed_form": cramer.c_minus1_closed_form(alpha),
        "c_0_closed_form": cramer.C0_CLOSED_FORM,
    }
    emit(cfg, payload, dest)


# ------------------------------------------------------------------ pochhammer

@cli.group()
def poch():
    """Zeta-Pochhammer symbol."""


@poch.command("eval")
@click.option("--x", "x_text", required=True, help="x as RE,IM.")
@click.option("--beta", type=float, required=True, help="q = exp(-i beta), beta > 0.")
@click.option("--zeros", "n_zeros", type=click.IntRange(min=1), default=None,
              help="Number of zeros to use.")
@click.option("--out", "dest", type=click.Path(dir_okay=False), default=None, help="JSON file.")
@click.pass_obj
def poch_eval(cfg: Config, x_text, beta, n_zeros, dest):
    """(x; e^{-i beta})_zeta."""
    args = PochhammerArgs(parse_complex(x_text), beta)
    value = zeta_pochhammer(cfg.table(n_zeros), args)
    emit(cfg, {"x": args.x, "beta": beta, **bounded(value)}, dest)


# ------------------------------------------------------------------ regprod

def _params(family: str, alphas: str, zs: str, omegas: str | None):
    a = parse_floats(alphas)
    z = parse_complex_list(zs)
    if family == "sine":
        return SineParams(tuple(a), tuple(z))
    w = parse_complex_list(omegas) if omegas else [0j] * len(a)
    return ExpParams(tuple(a), tuple(z), tuple(w))


def _c1_mode(cfg: Config, mode: str, table, p) -> C1Mode:
    if mode == "omit":
        return C1Mode.omit()
    return C1Mode.numeric().resolve(table, sorted(set(p.alphas) | {p.alpha}))


def _product_payload(p, result, sign_c0, c1) -> dict:
    payload = {
        "alphas": list(p.alphas), "zs": list(p.zs),
        "value": result.value, "tail_bound": result.tail_bound,
        "alt_value": result.alt_value, "route_gap": result.route_gap,
        "F": result.F, "log_pochhammer": [bounded(b) for b in result.log_pochhammer],
        "sign_c0": sign_c0, "c1_mode": c1.mode, "c1_flagged": result.c1_flagged,
    }
    if isinstance(p, ExpParams):
        payload["omegas"] = list(p.omegas)
    return payload


def regprod_options(fn):
    for opt in reversed([
        click.option("--alphas", required=True, help="Comma-separated alpha_k > 0."),
        click.option("--zs", required=True, help="Semicolon-separated z_k as RE,IM."),
        click.option("--c1", "c1_mode", type=click.Choice(["numeric", "omit"]), default="omit",
                     show_default=True, help="Fit c_1(alpha) numerically or drop it."),
        click.option("--sign-c0", "sign_text", default="+1", show_default=True,
                     help="Sign of the 7/8 term: +1 or -1."),
        click.option("--out", "dest", type=click.Path(dir_okay=False), default=None,
                     help="Output file."),
    ]):
        fn = opt(fn)
    return fn


@cli.group("regprod")
def regprod_group():
    """Regularized products S, S~, discrepancies and checks."""


@regprod_group.command("sine")
@regprod_options
@click.pass_obj
def regprod_sine(cfg: Config, alphas, zs, c1_mode, sign_text, dest):
    """S = regularized prod over zeros of prod_k sin(alpha_k rho - z_k)."""
    p = _params("sine", alphas, zs, None)
    table = cfg.table()
    sign = parse_sign(sign_text)
    c1 = _c1_mode(cfg, c1_mode, table, p)
    emit(cfg, _product_payload(p, regprod.S_sine(table, p, sign, c1), sign, c1), dest)


@regprod_group.command("exp")
@regprod_options
@click.option("--omegas", default=None, help="Semicolon-separated omega_k as RE,IM, |omega| <= 1.")
@click.pass_obj
def regprod_exp(cfg: Config, alphas, zs, c1_mode, sign_text, dest, omegas):
    """S~ = regularized prod of prod_k (exp(-i(alpha_k rho - z_k)) - omega_k)."""
    p = _params("exp", alphas, zs, omegas)
    table = cfg.table()
    sign = parse_sign(sign_text)
    c1 = _c1_mode(cfg, c1_mode, table, p)
    emit(cfg, _product_payload(p, regprod.S_exp(table, p, sign, c1), sign, c1), dest)


@regprod_group.command("discrepancy")
@click.option("--family", type=click.Choice(["sine", "exp"]), default="sine", show_default=True,
              help="Sequence family.")
@regprod_options
@click.option("--omegas", default=None, help="omega_k (exp family).")
@click.pass_obj
def regprod_discrepancy(cfg: Config, family, alphas, zs, c1_mode, sign_text, dest, omegas):
    """sum_k F(z_k; alpha_k) - F(z; alpha)."""
    p = _params(family, alphas, zs, omegas)
    table = cfg.table() if c1_mode == "numeric" else None
    sign = parse_sign(sign_text)
    c1 = C1Mode.numeric() if c1_mode == "numeric" else C1Mode.omit()
    fn = regprod.discrepancy_sine if family == "sine" else regprod.discrepancy_exp
    rep = fn(table, p, sign, c1)
    emit(cfg, {"family": family, "per_factor_F": rep.per_factor_F, "combined_F": rep.combined_F,
               "discrepancy": rep.discrepancy, "c1_mode": rep.c1_mode.mode,
               "c1_values": {repr(k): v for k, v in rep.c1_mode.values.items()},
               "flagged": rep.flagged, "note": rep.note}, dest)


@regprod_group.command("verify-lt")
@click.option("--family", type=click.Choice(["sine", "exp"]), default="sine", show_default=True,
              help="Sequence family.")
@click.option("--alphas", required=True, help="Comma-separated alpha_k > 0.")
@click.option("--zs", required=True, help="Semicolon-separated z_k as RE,IM.")
@click.option("--omegas", default=None, help="omega_k (exp family).")
@click.option("--s-grid", default=None, help="Comma-separated s values (default: built-in).")
@click.option("--out", "dest", type=click.Path(dir_okay=False), default=None, help="JSON file.")
@click.pass_obj
def regprod_verify_lt(cfg: Config, family, alphas, zs, omegas, s_grid, dest):
    """Compare the numeric O(s) coefficient of L with sum_k f(k)."""
    p = _params(family, alphas, zs, omegas)
    table = cfg.table()
    grid = parse_floats(s_grid) if s_grid else None
    try:
        est = regprod.lt_extract(table, p, family, grid)
    except cramer.TruncationRangeError as exc:
        raise click.ClickException(str(exc)) from exc
    if family == "sine":
        target = sum(regprod.f_product(table, a, z).value for a, z in zip(p.alphas, p.zs))
    else:
        target = sum(regprod.f_tilde_product(table, a, z, w).value
                     for a, z, w in zip(p.alphas, p.zs, p.omegas))
    rel = abs(est.phi_estimate - target) / abs(target) if target else abs(est.phi_estimate)
    emit(cfg, {"family": family, "phi_estimate": est.phi_estimate, "sum_f": target,
               "relative_error": rel, "extrapolation_error": est.extrapolation_error,
               "converged": est.converged, "s_grid": est.s_grid}, dest)


SCAN_QUANTITIES = ("S", "F", "discrepancy")


def parse_param_path(p, path: str) -> tuple[str, int]:
    """'alpha2' -> ('alpha', 1); the index is checked against ``p``."""
    m = re.fullmatch(r"(alpha|re_z|im_z|abs_omega)(\d+)", path)
    if not m:
        raise click.BadParameter(f"unknown scan parameter {path!r}", param_hint="--param")
    kind, k = m.group(1), int(m.group(2)) - 1
    if not 0 <= k < p.n:
        raise click.BadParameter(f"{path}: index out of range 1..{p.n}", param_hint="--param")
    if kind == "abs_omega" and not isinstance(p, ExpParams):
        raise click.BadParameter("abs_omega needs --family exp", param_hint="--param")
    return kind, k


def _with_param(p, path: str, value: float):
    """Copy of ``p`` with one real degree of freedom replaced."""
    kind, k = parse_param_path(p, path)
    alphas, zs = list(p.alphas), list(p.zs)
    omegas = list(getattr(p, "omegas", ()))
    if kind == "alpha":
        alphas[k] = value
    elif kind == "re_z":
        zs[k] = complex(value, zs[k].imag)
    elif kind == "im_z":
        zs[k] = complex(zs[k].real, value)
    else:
        w = omegas[k]
        omegas[k] = value * (w / abs(w) if w else 1.0)
    if isinstance(p, ExpParams):
        return ExpParams(tuple(alphas), tuple(zs), tuple(omegas))
    return SineParams(tuple(alphas), tuple(zs))


def run_scan(table, family: str, quantity: str, base, path: str, start: float, stop: float,
             steps: int, sign_c0: int = 1, c1: C1Mode = C1Mode(), threads: int = 1):
    """One CSV row per grid point: parameter, Re, Im, bound, error."""
    if steps < 1:
        raise ValueError("steps must be positive")
    parse_param_path(base, path)
    grid = [start + (stop - start) * i / (steps - 1) for i in range(steps)] if steps > 1 \
        else [start]

    def row(x):
        try:
            p = _with_param(base, path, x)
            if quantity == "S":
                r = (regprod.S_sine if family == "sine" else regprod.S_exp)(table, p, sign_c0, c1)
                val, bound = r.value, r.tail_bound
            elif quantity == "F":
                poly = regprod.poly_F if family == "sine" else regprod.poly_F_tilde
                val, bound = poly(p, sign_c0, c1.resolve(table, [p.alpha])), 0.0
            else:
                fn = regprod.discrepancy_sine if family == "sine" else regprod.discrepancy_exp
                val, bound = fn(table, p, sign_c0, c1).discrepancy, 0.0
            return [repr(float(x)), repr(val.real), repr(val.imag), repr(bound), ""]
        except click.BadParameter:
            raise
        except (ValueError, ArithmeticError) as exc:
            return [repr(float(x)), "", "", "", f"error: {exc}"]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(row, grid))
    return [row(x) for x in grid]


@regprod_group.command("scan")
@click.option("--family", type=click.Choice(["sine", "exp"]), default="sine", show_default=True,
              help="Sequence family.")
@click.option("--quantity", type=click.Choice(SCAN_QUANTITIES), default="S", show_default=True,
              help="What to evaluate at each grid point.")
@click.option("--alphas", required=True, help="Base alpha_k.")
@click.option("--zs", required=True, help="Base z_k as RE,IM;...")
@click.option("--omegas", default=None, help="Base omega_k (exp family).")
@click.option("--param", "path", required=True,
              help="alphaK, re_zK, im_zK or abs_omegaK (1-based K).")
@click.option("--from", "start", type=float, required=True, help="First parameter value.")
@click.option("--to", "stop", type=float, required=True, help="Last parameter value.")
@click.option("--steps", type=click.IntRange(min=1), default=100, show_default=True,
              help="Number of grid points.")
@click.option("--c1", "c1_mode", type=click.Choice(["numeric", "omit"]), default="omit",
              show_default=True, help="Fit c_1(alpha) numerically or drop it.")
@click.option("--sign-c0", "sign_text", default="+1", show_default=True,
              help="Sign of the 7/8 term.")
@click.option("--out", "dest", type=click.Path(dir_okay=False), default=None, help="CSV file.")
@click.pass_obj
def regprod_scan(cfg: Config, family, quantity, alphas, zs, omegas, path, start, stop, steps,
                 c1_mode, sign_text, dest):
    """Plot-ready CSV over one real parameter."""
    base = _params(family, alphas, zs, omegas)
    parse_param_path(base, path)
    table = cfg.table()
    c1 = C1Mode.numeric() if c1_mode == "numeric" else C1Mode.omit()
    rows = run_scan(table, family, quantity, base, path, start, stop, steps,
                    parse_sign(sign_text), c1, cfg.parallelism)
    emit_csv(cfg, [path, "re", "im", "bound", "error"], rows, dest)


# ------------------------------------------------------------------ verify

@cli.group("verify")
def verify_group():
    """Numerical verification suite."""


@verify_group.command("all")
@click.option("--out", "dest", type=click.Path(dir_okay=False), default=None,
              help="Report file (JSON).")
@click.pass_obj
def verify_all(cfg: Config, dest):
    """Run every check; exit status 1 if any unflagged check fails."""
    try:
        table = cfg.table()
    except click.ClickException:
        raise
    report = run_verify_suite(table, cfg.tolerance_profile)
    if cfg.output_format == "text":
        emit(cfg, None, dest, text="\n".join(report.summary_lines()))
    else:
        body = report.to_json() + "\n"
        target = dest or cfg.out
        if target:
            Path(target).write_text(body)
        else:
            click.echo(body, nl=False)
    for line in report.summary_lines():
        click.echo(line, err=True)
    sys.exit(report.exit_code)


def main(argv=None):
    return cli.main(args=argv, prog_name="zetaprod")


if __name__ == "__main__":
    main()
