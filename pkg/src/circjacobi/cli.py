"""Command-line interface: ``circjacobi {coeffs,verify,density,ft,zeros}``.

Parameters are rationals written ``a/b`` or the literal ``sym`` for a
symbolic value. Symbolic objects are written as JSON, numeric grids as CSV
(or JSON with ``--format json``). Floats are decimal strings at the working
precision. The exit status is 0 exactly when every requested check passes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional

import mpmath as mp
from gmpy2 import mpq

from . import loop_engine as le
from . import numeric_oracle as no
from . import ode_engine as oe
from . import polyprops as pp
from .exactalg import ParamScalar, poly_to_json
from .exactalg.gaussian import as_mpq

SYM = "sym"


@dataclass
class RunConfig:
    command: str
    order: int
    beta: object  # mpq or SYM
    p: object
    q: object
    digits: int
    fmt: str
    out: Optional[str]


def parse_param(text: str):
    text = text.strip()
    if text == SYM:
        return SYM
    try:
        return as_mpq(text)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"expected a rational 'a/b' or '{SYM}', got {text!r}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


@lru_cache(maxsize=8)
def _table(order: int) -> le.CoefficientTable:
    return le.compute_table(order)


# --------------------------------------------------------------------------- coeffs
def _specialize(f: ParamScalar, cfg: RunConfig) -> ParamScalar:
    values = {}
    if cfg.beta != SYM:
        values["kappa"] = cfg.beta / 2
    if cfg.p != SYM:
        values["p"] = cfg.p
    if cfg.q != SYM:
        values["q"] = cfg.q
    return f.subs(**values) if values else f


def _numeric(f: ParamScalar, pi_power: int, digits: int) -> Optional[dict]:
    if any(any(e) for e, _ in f.items()):
        return None
    c = f.constant_value()
    with mp.workdps(digits + 5):
        scale = (2 * mp.pi) ** pi_power
        re = mp.mpf(int(c.re.numerator)) / int(c.re.denominator) * scale
        im = mp.mpf(int(c.im.numerator)) / int(c.im.denominator) * scale
        return {"re": mp.nstr(re, digits), "im": mp.nstr(im, digits)}


def coefficient_records(cfg: RunConfig) -> List[dict]:
    table = _table(max(cfg.order, 0))
    recs = []
    for j in range(cfg.order + 1):
        rec = {"order": j, "pi_power": -j}
        for name, src in (("alpha", table.alphas[j]), ("h", table.h[j]), ("h_tilde", table.h_tilde[j])):
            val = _specialize(src, cfg)
            rec[name] = poly_to_json(val)
            num = _numeric(val, -j, cfg.digits)
            if num is not None:
                rec[name + "_value"] = num
        recs.append(rec)
    return recs


def cmd_coeffs(cfg: RunConfig) -> int:
    params = {k: (str(v) if v != SYM else SYM) for k, v in (("beta", cfg.beta), ("p", cfg.p), ("q", cfg.q))}
    doc = {
        "engine": "loop",
        "convention": "true coefficient = stored value * (2 pi)**pi_power",
        "parameters": params,
        "coefficients": coefficient_records(cfg),
    }
    _emit(json.dumps(doc, indent=2), cfg.out)
    return 0


# --------------------------------------------------------------------------- verify
def _tag(rows: List[dict], check: str) -> List[dict]:
    for r in rows:
        r.setdefault("check", check)
    return rows


def _check_cross(values, loop_values, kappa, check, offset=0):
    return _tag(oe.compare_with_loop(values, loop_values, kappa, offset), check)


def _numeric_ft(order: int) -> List[dict]:
    ctx = no.PrecisionContext(digits=30)
    rows = []
    for k in (1, 2, 3):
        with mp.workdps(ctx.digits):
            tau = k * mp.pi / 2
        r = no.fourier_transform(tau, 1, ctx=ctx)
        rows.append({"check": "ft-triangle", "tau": mp.nstr(tau, 10),
                     "pass": abs(r.value - (-1 + tau / (2 * mp.pi))) < mp.mpf("1e-20")})
    s = no.screening_integral(2, ctx=ctx)
    rows.append({"check": "screening", "p": 2, "pass": abs(s.value + 2) < mp.mpf("1e-20")})
    return rows


def _ode_residual(order: int) -> List[dict]:
    ctx = no.PrecisionContext(digits=40)
    rows = []
    for p in (1, 2):
        with mp.workdps(ctx.digits):
            samples = [(mp.mpf(x), no.rescaled_derivatives_beta2(x, p, 0, ctx)) for x in (0.5, 1, 2.5, 5, 7.5, 10)]
            res = oe.ode_residual_beta2(samples, p, 0)
        rows.append({"check": "ode-residual", "p": p, "residual": mp.nstr(res, 5),
                     "pass": res < mp.mpf("1e-20")})
    return rows


def _polyprops(order: int) -> List[dict]:
    table = _table(max(order, 5))
    reports = [pp.zeros_on_unit_circle(pp.extract_upoly(table, 5, "p", m)) for m in range(1, 6)]
    rows = [{"check": "palindrome", "m": m,
             "pass": pp.classify_palindrome(r.poly) in ("palindromic", "anti-palindromic")}
            for m, r in enumerate(reports, 1)]
    rows += [{"check": "unit-circle", "m": m, "pass": r.all_on_circle} for m, r in enumerate(reports, 1)]
    rows += [{"check": "interlacing", "pair": [m, m + 1], "pass": ok}
             for m, ok in enumerate(pp.check_interlacing(reports), 1)]
    return rows


def _structure(order: int) -> List[dict]:
    J = max(order, 1)
    table = _table(J + 1)
    ps = le.structure_function_series(table, J)
    return [{"check": "structure-shape", "j": j, "pass": pp.structure_shape_ok(pp.UPoly.from_list(ps[j]), j)}
            for j in range(1, J + 1)]


def _checks() -> Dict[str, Callable[[int], List[dict]]]:
    half = mpq(1, 2)
    return {
        "duality": lambda J: le.verify_duality(_table(J), J),
        "linear-response": lambda J: le.verify_linear_response(_table(J + 1), J),
        "q-parity": lambda J: le.verify_q_parity(_table(J)),
        "reality": lambda J: le.verify_reality(_table(J)),
        "origin": lambda J: le.alpha_vanishes_at_origin(_table(J)),
        "low-temperature": lambda J: le.verify_low_temperature(le.low_temperature_limit(_table(J))),
        "structure-function": _structure,
        "cross-beta2": lambda J: _check_cross(oe.map_to_h(oe.d_series_beta2(J + 1)), _table(J).h, 1, "cross-beta2"),
        "cross-beta4": lambda J: _check_cross(oe.map_to_h(oe.g_series_beta4(max(J + 1, 4))), _table(J).h, 2,
                                              "cross-beta4"),
        "cross-beta1": lambda J: _check_cross(oe.map_to_h(oe.g_beta1(max(J + 1, 4))), _table(J).h, half,
                                              "cross-beta1"),
        "tilde-beta4": lambda J: _check_cross(oe.map_to_h(oe.g_tilde_series_beta4(max(J + 1, 4)), tilde=True),
                                              _table(J).h_tilde, 2, "tilde-beta4", offset=1),
        "tilde-beta2": lambda J: _check_cross(
            oe.map_e_to_h_tilde(oe.e_series_beta2(J, -oe.P, oe.ZERO, e1_source="loop engine: ht_1 = 0")),
            _table(J).h_tilde, 1, "tilde-beta2"),
        "c2n": lambda J: [{"check": "c2n", "n": n,
                           "pass": oe.d_series_beta2(2 * n)[2 * n].subs(q=0) == oe.c2n_closed_form(n)}
                          for n in range(1, 11)],
        "bessel": lambda J: [{"check": "bessel", "n": n, "pass": oe.bessel_asymptotic_c2n(n) == oe.c2n_closed_form(n)}
                             for n in range(1, 7)],
        "fourier-ode": lambda J: oe.fourier_ode_beta2_residual(12),
        "d-structure": lambda J: oe.d_series_structure(oe.d_series_beta2(10)),
        "polyprops": _polyprops,
        "ode-residual": _ode_residual,
        "ft": _numeric_ft,
    }


CHECK_IDS = tuple(_checks())


def run_checks(ids, order: int) -> List[dict]:
    registry = _checks()
    rows: List[dict] = []
    for cid in ids:
        if cid not in registry:
            raise KeyError(f"unknown check {cid!r}; known: {', '.join(registry)}")
        for r in registry[cid](order):
            r = dict(r)
            r["id"] = cid
            rows.append(r)
    return rows


def cmd_verify(cfg: RunConfig, only: Optional[List[str]]) -> int:
    ids = only or list(CHECK_IDS)
    rows = run_checks(ids, cfg.order)
    ok = all(r["pass"] for r in rows)
    if cfg.fmt == "json":
        text = json.dumps({"pass": ok, "results": rows}, indent=2, default=str)
    else:
        lines = []
        for r in rows:
            detail = " ".join(f"{k}={v}" for k, v in r.items() if k not in ("pass", "id", "check"))
            lines.append(f"{'PASS' if r['pass'] else 'FAIL'} {r['check']} {detail}".rstrip())
        lines.append(f"{'ALL PASS' if ok else 'FAILURES'}: {sum(r['pass'] for r in rows)}/{len(rows)}")
        text = "\n".join(lines)
    _emit(text, cfg.out)
    return 0 if ok else 1


# --------------------------------------------------------------------------- numeric
def _grid(args) -> List[mp.mpf]:
    n = int(args.n)
    lo, hi = mp.mpf(args.xmin), mp.mpf(args.xmax)
    if n < 2:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _meta(cfg: RunConfig, formula: str) -> Dict[str, str]:
    return {"beta": str(cfg.beta), "p": str(cfg.p), "q": str(cfg.q), "formula": formula, "digits": str(cfg.digits)}


def cmd_density(cfg: RunConfig, args) -> int:
    if SYM in (cfg.beta, cfg.p, cfg.q):
        raise no.UnsupportedParameters("density needs numeric beta, p and q")
    ctx = no.PrecisionContext(digits=cfg.digits, x_max=max(12.0, float(mp.mpf(args.xmax)) + 1))
    with mp.workdps(cfg.digits):
        xs = _grid(args)
        prof = no.density_profile(xs, cfg.p, cfg.q, int(cfg.beta), ctx)
        # nominal: values are carried with guard digits beyond the requested precision
        bound = f"1e-{cfg.digits}"
        rows = [(x, v, bound) for x, v in zip(prof.grid, prof.values)]
        dump = no.profile_to_json if cfg.fmt == "json" else no.profile_to_csv
        _emit(dump(rows, prof.meta, ("x", "value", "error_estimate"), cfg.digits), cfg.out)
    return 0


def _tau_values(text: str) -> List[mp.mpf]:
    parts = text.split(":")
    if len(parts) == 1:
        return [mp.mpf(parts[0])]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("tau is 'value' or 'start:stop:step'")
    a, b, s = (mp.mpf(v) for v in parts)
    n = int(mp.floor((b - a) / s + mp.mpf("1e-9"))) + 1
    return [a + k * s for k in range(n)]


def cmd_ft(cfg: RunConfig, args) -> int:
    if SYM in (cfg.beta, cfg.p, cfg.q):
        raise no.UnsupportedParameters("ft needs numeric beta, p and q")
    ctx = no.PrecisionContext(digits=cfg.digits, tail_cut=int(args.tail_cut))
    with mp.workdps(cfg.digits):
        rows = []
        for tau in _tau_values(args.tau):
            r = no.fourier_transform(tau, cfg.p, cfg.q, int(cfg.beta), ctx)
            rows.append((r.tau, r.value, r.error_estimate))
        meta = _meta(cfg, "beta2-elementary-tail")
        dump = no.profile_to_json if cfg.fmt == "json" else no.profile_to_csv
        _emit(dump(rows, meta, ("tau", "value", "error_estimate"), cfg.digits), cfg.out)
    return 0


def cmd_zeros(cfg: RunConfig, args) -> int:
    table = _table(max(cfg.order, 1))
    j = cfg.order
    reports = []
    for m in range(1, j + 2):
        P = pp.extract_upoly(table, j, args.var, m, tilde=args.tilde, q_scaled=args.var == "q")
        if P.degree >= 1:
            reports.append(pp.zeros_on_unit_circle(P, digits=cfg.digits))
    inter = pp.check_interlacing(reports) if all(r.all_on_circle for r in reports) else []
    _emit(pp.zero_reports_json(reports, inter), cfg.out)
    return 0 if all(r.all_on_circle for r in reports) and all(inter) else 1


# --------------------------------------------------------------------------- entry point
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=le.DEFAULT_ORDER, help="maximum order j")
    common.add_argument("--beta", type=parse_param, default=None, help="beta as a/b, or 'sym'")
    common.add_argument("--p", type=parse_param, default=None, help="p as a/b, or 'sym'")
    common.add_argument("--q", type=parse_param, default=None, help="q as a/b, or 'sym'")
    common.add_argument("--digits", type=int, default=no.default_digits(),
                        help=f"working precision (default from ${no.DIGITS_ENV} or 40)")
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default=None)
    common.add_argument("--out", default=None, help="output file (default stdout)")

    ap = argparse.ArgumentParser(prog="circjacobi", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", parents=[common], help="alpha_j, h_j, h~_j as exact JSON")
    c.add_argument("--symbolic", action="store_true", help="keep every parameter symbolic")

    v = sub.add_parser("verify", parents=[common], help="run the identity suite")
    v.add_argument("--only", action="append", choices=CHECK_IDS, help="restrict to a check (repeatable)")

    d = sub.add_parser("density", parents=[common], help="density samples on a grid")
    d.add_argument("--xmin", default="0")
    d.add_argument("--xmax", default="5")
    d.add_argument("--n", default="101")

    f = sub.add_parser("ft", parents=[common], help="Fourier transform of rho - 1")
    f.add_argument("--tau", required=True, help="value or start:stop:step")
    f.add_argument("--tail-cut", default="40", help="quadrature range [0, X]")

    z = sub.add_parser("zeros", parents=[common], help="unit-circle zero report for h_j coefficient ladders")
    z.add_argument("--var", choices=("p", "q"), default="p")
    z.add_argument("--tilde", action="store_true")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "symbolic", False):
        args.beta = args.p = args.q = SYM
    if args.command in ("density", "ft"):
        # numeric commands: beta = 2 and q = 0 unless given; p is required
        args.beta = mpq(2) if args.beta is None else args.beta
        args.q = mpq(0) if args.q is None else args.q
        if args.p is None:
            sys.stderr.write(f"circjacobi: error: {args.command} needs --p\n")
            return 2
    else:
        args.beta, args.p, args.q = (SYM if v is None else v for v in (args.beta, args.p, args.q))
    default_fmt = {"density": "csv", "ft": "csv", "verify": "text"}.get(args.command, "json")
    cfg = RunConfig(args.command, args.order, args.beta, args.p, args.q, args.digits,
                    args.fmt or default_fmt, args.out)
    try:
        if cfg.command == "coeffs":
            return cmd_coeffs(cfg)
        if cfg.command == "verify":
            return cmd_verify(cfg, args.only)
        if cfg.command == "density":
            return cmd_density(cfg, args)
        if cfg.command == "ft":
            return cmd_ft(cfg, args)
        if cfg.command == "zeros":
            return cmd_zeros(cfg, args)
    except (ValueError, ArithmeticError, argparse.ArgumentTypeError) as exc:
        sys.stderr.write(f"circjacobi: error: {exc}\n")
        return 2
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
