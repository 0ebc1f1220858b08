"""End-to-end numerical verification of the regularized-product formulas.

Every threshold lives in :data:`TOLERANCE_PROFILES` and is copied into each
report.  Checks never abort the suite: an exception becomes a failed check,
and a zero table too short for a check marks it ``flagged``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import cramer, regprod
from .cramer import TruncationRangeError
from .regprod import ExpParams, SineParams
from .zeros import ZeroTable, validate

__all__ = [
    "ADJUDICATION_PAIRS",
    "Check",
    "TOLERANCE_PROFILES",
    "VerificationReport",
    "holomorphy_scan",
    "remainder_convergence_order",
    "run_verify_suite",
    "sample_exp_params",
    "sample_sine_params",
    "to_jsonable",
]

TOLERANCE_PROFILES = {
    "default": {
        "table_counting_deviation": 2.0,
        "laurent_c_minus1_rel": 1e-4,
        "laurent_c0_abs": 1e-3,
        "holomorphy_slope": 0.05,
        "holomorphy_order": 0.9,
        "order_swap_bound_max": 1e-10,
        "order_swap_rel_slack": 1e-14,
        "assembly_rel": 1e-12,
        "lt_rel": 1e-3,
        "adjudication_abs": 1e-3,
        "cross_family_rel": 1e-12,
    },
    "strict": {
        "table_counting_deviation": 1.5,
        "laurent_c_minus1_rel": 1e-5,
        "laurent_c0_abs": 1e-4,
        "holomorphy_slope": 0.025,
        "holomorphy_order": 0.95,
        "order_swap_bound_max": 1e-12,
        "order_swap_rel_slack": 1e-14,
        "assembly_rel": 1e-13,
        "lt_rel": 1e-4,
        "adjudication_abs": 1e-4,
        "cross_family_rel": 1e-13,
    },
}

LAURENT_ALPHAS = (0.5, 1.0, 2.0)
HOLOMORPHY_RADII = (1.0, 0.5, 0.25, 0.125, 0.0625, 0.05)
SAMPLE_SEED = 20240611

# (alpha, z, z') single-factor sine problems differing only in z
ADJUDICATION_PAIRS = (
    (1.0, 0.3 - 0.1j, 1.0 - 0.2j),
    (0.5, 0.0j, 0.8 - 0.3j),
    (2.0, 0.2 + 0.0j, 1.5 - 0.05j),
)

LT_SINE_CASES = (
    SineParams((1.0,), (0.3 - 0.1j,)),
    SineParams((1.0, 2.0), (0.0j, 0.5 - 0.1j)),
)
LT_EXP_CASES = (
    ExpParams((1.0,), (0.3 - 0.1j,), (0.5,)),
    ExpParams((1.0, 2.0), (0.3 - 0.1j, 1.0 - 0.2j), (0.5, 0.8j)),
)


@dataclass
class Check:
    name: str
    status: str
    measured_error: float | None
    bound_or_tolerance: float | None
    details: str = ""


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    adjudicated_sign_c0: int | None = None
    c1_table: dict = field(default_factory=dict)
    profile: str = "default"
    tolerances: dict = field(default_factory=dict)
    table_source: str = ""
    table_count: int = 0

    @property
    def failed(self) -> list:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_dict(self) -> dict:
        out = {
            "profile": self.profile,
            "table": {"source": self.table_source, "count": self.table_count},
            "tolerances": self.tolerances,
            "checks": [asdict(c) for c in self.checks],
            "c1_table": {repr(a): to_jsonable(v) for a, v in sorted(self.c1_table.items())},
        }
        if self.adjudicated_sign_c0 is not None:
            out["adjudicated_sign_c0"] = self.adjudicated_sign_c0
        return to_jsonable(out)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False, allow_nan=False)

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            err = "-" if c.measured_error is None else f"{c.measured_error:.3e}"
            tol = "-" if c.bound_or_tolerance is None else f"{c.bound_or_tolerance:.3e}"
            lines.append(f"{c.status.upper():7s} {c.name:40s} err={err} tol={tol} {c.details}")
        return lines


def to_jsonable(obj):
    """Complex numbers as {"re", "im"}; non-finite floats as strings."""
    if isinstance(obj, complex):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.complexfloating,)):
        return to_jsonable(complex(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------- samplers

def sample_sine_params(rng: np.random.Generator, n: int, re_max: float = 2 * math.pi,
                       im_min: float = -1.0) -> SineParams:
    alphas = rng.uniform(0.25, 3.0, n)
    zs = rng.uniform(0.0, re_max, n) * (1.0 - 1e-12) + 1j * rng.uniform(im_min, 0.0, n)
    return SineParams(tuple(alphas), tuple(zs))


def sample_exp_params(rng: np.random.Generator, n: int, re_max: float = 2 * math.pi,
                      im_min: float = -1.0) -> ExpParams:
    base = sample_sine_params(rng, n, re_max, im_min)
    radii = rng.uniform(0.0, 1.0, n)
    angles = rng.uniform(-math.pi, math.pi, n)
    return ExpParams(base.alphas, base.zs, tuple(radii * np.exp(1j * angles)))


# ------------------------------------------------------------- individual checks

def holomorphy_scan(table: ZeroTable, radii=HOLOMORPHY_RADII, angle: float = math.pi / 4):
    """|V - singular model| along s = r e^{i angle}; returns (radii, values, slope).

    The slope is the least-squares slope of |remainder| against log r.  A
    1/s or log s singularity left in the remainder would make it >= 1 in size.
    """
    rs = np.asarray(radii, dtype=float)
    vals = [cramer.cramer_remainder(table, r * complex(math.cos(angle), math.sin(angle)))
            for r in rs]
    mags = np.array([abs(v.value) for v in vals])
    slope = float(np.polyfit(np.log(rs), mags, 1)[0])
    return rs, vals, slope


def remainder_convergence_order(table: ZeroTable, radii=HOLOMORPHY_RADII,
                                angle: float = math.pi / 4) -> float:
    """Order q in |R(r_i) - R(r_{i+1})| ~ r_i^q along the ray.

    A holomorphic remainder with R'(0) != 0 gives q = 1; a surviving log s
    term gives q = 0 and a 1/s term q < 0.
    """
    rs = np.asarray(radii, dtype=float)
    ray = complex(math.cos(angle), math.sin(angle))
    vals = np.array([cramer.cramer_remainder(table, r * ray).value for r in rs])
    steps = np.abs(np.diff(vals))
    return float(np.polyfit(np.log(rs[:-1]), np.log(steps), 1)[0])


def _check(name: str, err: float, tol: float, details: str = "") -> Check:
    ok = err <= tol
    return Check(name, "pass" if ok else "fail", float(err), float(tol), details)


def _rel(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


class _Suite:
    def __init__(self, table: ZeroTable, profile: str):
        if profile not in TOLERANCE_PROFILES:
            raise ValueError(f"unknown tolerance profile {profile!r}")
        self.table = table
        self.tol = TOLERANCE_PROFILES[profile]
        self.report = VerificationReport(profile=profile, tolerances=dict(self.tol),
                                         table_source=table.source, table_count=table.count)
        self.coeffs: dict[float, cramer.LaurentCoeffs] = {}

    def run(self, name: str, fn: Callable[[], list]) -> None:
        try:
            self.report.checks.extend(fn())
        except TruncationRangeError as exc:
            self.report.checks.append(
                Check(name, "flagged", None, None, f"insufficient truncation range: {exc}"))
        except Exception as exc:  # recorded, never aborts the suite
            self.report.checks.append(
                Check(name, "fail", None, None, f"{type(exc).__name__}: {exc}"))

    def skip(self, name: str, why: str) -> None:
        self.report.checks.append(Check(name, "flagged", None, None, f"skipped: {why}"))

    # -- checks, in suite order

    def table_validation(self):
        rep = validate(self.table)
        tol = self.tol["table_counting_deviation"]
        ok = rep.monotone_ok and rep.first_zero_ok and rep.duplicate_count == 0 \
            and rep.max_counting_deviation <= tol
        details = (f"monotone={rep.monotone_ok} first_zero={rep.first_zero_ok} "
                   f"duplicates={rep.duplicate_count}")
        return [Check("table_validation", "pass" if ok else "fail",
                      rep.max_counting_deviation, tol, details)]

    def holomorphy(self):
        _, _, slope = holomorphy_scan(self.table)
        order = remainder_convergence_order(self.table)
        tol = self.tol["holomorphy_order"]
        return [
            _check("cramer_holomorphy_slope", abs(slope), self.tol["holomorphy_slope"],
                   "radii " + ",".join(f"{r:g}" for r in HOLOMORPHY_RADII)),
            Check("cramer_remainder_convergence_order", "pass" if order >= tol else "fail",
                  order, tol, "order q of |R(r) - R(r/2)| ~ r^q (1 = holomorphic)"),
        ]

    def laurent(self):
        out = []
        for alpha in LAURENT_ALPHAS:
            lc = cramer.extract_laurent_coeffs(self.table, alpha)
            self.coeffs[alpha] = lc
            self.report.c1_table[alpha] = lc.c_1
            expected = cramer.c_minus1_closed_form(alpha)
            out.append(_check(f"laurent_c_minus1[alpha={alpha:g}]",
                              abs(lc.c_minus1 - expected) / abs(expected),
                              self.tol["laurent_c_minus1_rel"]))
            out.append(_check(f"laurent_c0[alpha={alpha:g}]",
                              abs(lc.c_0 - cramer.C0_CLOSED_FORM), self.tol["laurent_c0_abs"],
                              f"c1={lc.c_1.real:.6f}{lc.c_1.imag:+.2e}i "
                              f"(+-{lc.c_1_uncertainty:.1e})"))
        return out

    def order_swap(self):
        rng = np.random.default_rng(SAMPLE_SEED)
        slack = self.tol["order_swap_rel_slack"]
        out = []
        for family in ("sine", "exp"):
            worst_gap, worst_bound = 0.0, 0.0
            agree = True
            for _ in range(20):
                if family == "sine":
                    p = sample_sine_params(rng, 1)
                    a = regprod.f_series(self.table, p.alphas[0], p.zs[0])
                    b = regprod.f_product(self.table, p.alphas[0], p.zs[0])
                else:
                    p = sample_exp_params(rng, 1)
                    a = regprod.f_tilde_series(self.table, p.alphas[0], p.zs[0], p.omegas[0])
                    b = regprod.f_tilde_product(self.table, p.alphas[0], p.zs[0], p.omegas[0])
                agree &= a.agrees_with(b, slack)
                allowed = a.tail_bound + b.tail_bound + slack * max(abs(a.value), abs(b.value))
                gap = abs(a.value - b.value)
                if allowed > 0:
                    worst_gap = max(worst_gap, gap / allowed)
                worst_bound = max(worst_bound, a.tail_bound, b.tail_bound)
            limit = self.tol["order_swap_bound_max"]
            status = "pass" if agree and worst_bound <= limit else "fail"
            out.append(Check(f"order_swap_{family}", status, worst_bound, limit,
                             f"20 samples; worst gap/allowed = {worst_gap:.3f}"))
        return out

    def assembly(self):
        rng = np.random.default_rng(SAMPLE_SEED + 1)
        out = []
        for family in ("sine", "exp"):
            worst = 0.0
            for n in (1, 2, 3):
                for _ in range(3):
                    if family == "sine":
                        r = regprod.S_sine(self.table, sample_sine_params(rng, n))
                    else:
                        r = regprod.S_exp(self.table, sample_exp_params(rng, n))
                    worst = max(worst, r.route_gap)
            out.append(_check(f"assembly_equivalence_{family}", worst, self.tol["assembly_rel"],
                              "Pochhammer route vs exp(-F - sum f), c1 omitted"))
        return out

    def linear_term(self):
        out = []
        tol = self.tol["lt_rel"]
        for p in LT_SINE_CASES:
            est = regprod.lt_extract(self.table, p, "sine")
            target = sum(regprod.f_product(self.table, a, z).value for a, z in zip(p.alphas, p.zs))
            out.append(_check(f"lt_extract_sine[n={p.n}]", _rel(est.phi_estimate, target), tol,
                              f"Phi={est.phi_estimate:.6e} extrapolation_err="
                              f"{est.extrapolation_error:.1e}"))
        for p in LT_EXP_CASES:
            est = regprod.lt_extract(self.table, p, "exp")
            target = sum(regprod.f_tilde_product(self.table, a, z, w).value
                         for a, z, w in zip(p.alphas, p.zs, p.omegas))
            out.append(_check(f"lt_extract_exp[n={p.n}]", _rel(est.phi_estimate, target), tol,
                              f"Phi={est.phi_estimate:.6e}"))
        zero = ExpParams((1.0, 2.0), (0.3 - 0.1j, 1.0 - 0.2j), (0.0, 0.0))
        est = regprod.lt_extract(self.table, zero, "exp")
        worst = max(abs(d) for d in est.d_values)
        out.append(Check("lt_extract_exp_omega_zero", "pass" if worst == 0.0 else "fail",
                         worst, 0.0, "D(s) must vanish identically"))
        return out

    def adjudication(self):
        tol = self.tol["adjudication_abs"]
        out = []
        res = regprod.adjudicate_sign_c0(self.table, ADJUDICATION_PAIRS, tol, self.coeffs)
        details = ", ".join(f"sign {s:+d}: max mismatch {max(e):.2e}"
                            for s, e in res.mismatches.items())
        if res.decided:
            self.report.adjudicated_sign_c0 = res.winner
            out.append(Check("sign_adjudication", "pass",
                             max(res.mismatches[res.winner]), tol,
                             f"winner {res.winner:+d}; {details}"))
        else:
            out.append(Check("sign_adjudication", "fail", None, tol,
                             f"matching signs {res.matching_signs}; {details}"))
        direct = regprod.adjudicate_sign_c0(self.table, ADJUDICATION_PAIRS, tol,
                                            method="direct")
        d_details = ", ".join(f"sign {s:+d}: max mismatch {max(e):.2e}"
                              for s, e in direct.mismatches.items())
        agree = direct.decided and direct.winner == res.winner
        out.append(Check("sign_adjudication_direct_fit", "pass" if agree else "fail",
                         max(direct.mismatches[direct.winner]) if direct.decided else None,
                         tol, f"winner {direct.winner}; {d_details}"))
        kw = regprod.kw_linear_reconciliation(1.0)
        hits = [k for k, v in kw.items() if v]
        out.append(Check("kw_linear_coefficient", "pass" if len(hits) == 1 else "fail",
                         float(len(hits)), 1.0,
                         f"B_alpha matched by (sign_c0, negated) = {hits}"))
        return out

    def cross_family(self):
        rng = np.random.default_rng(SAMPLE_SEED + 2)
        worst = 0.0
        for i in range(10):
            n = 1 + i % 3
            p = sample_sine_params(rng, n, re_max=math.pi, im_min=-0.5)
            doubled = ExpParams(tuple(2 * a for a in p.alphas), tuple(2 * z for z in p.zs),
                                (1.0,) * n)
            s = regprod.S_sine(self.table, p)
            st = regprod.S_exp(self.table, doubled)
            lhs = st.value * np.exp(st.F)
            rhs = s.value * np.exp(s.F)
            worst = max(worst, _rel(complex(lhs), complex(rhs)))
        return [_check("cross_family_identity", worst, self.tol["cross_family_rel"],
                       "10 samples")]

    def discrepancy(self):
        rng = np.random.default_rng(SAMPLE_SEED + 3)
        worst = 0.0
        for _ in range(10):
            for r in (regprod.discrepancy_sine(None, sample_sine_params(rng, 1)),
                      regprod.discrepancy_exp(None, sample_exp_params(rng, 1))):
                worst = max(worst, abs(r.discrepancy))
        return [Check("discrepancy_n1_zero", "pass" if worst == 0.0 else "fail", worst, 0.0,
                      "both families, 10 samples each")]


def run_verify_suite(table: ZeroTable, profile: str = "default") -> VerificationReport:
    suite = _Suite(table, profile)
    suite.run("table_validation", suite.table_validation)
    dependent = [
        ("cramer_holomorphy_slope", suite.holomorphy),
        ("laurent_recovery", suite.laurent),
        ("order_swap", suite.order_swap),
        ("assembly_equivalence", suite.assembly),
        ("lt_extract", suite.linear_term),
        ("sign_adjudication", suite.adjudication),
        ("cross_family_identity", suite.cross_family),
        ("discrepancy_n1_zero", suite.discrepancy),
    ]
    if suite.report.checks[-1].status != "pass":
        for name, _ in dependent:
            suite.skip(name, "zero table failed validation")
        return suite.report
    for name, fn in dependent:
        suite.run(name, fn)
    return suite.report
