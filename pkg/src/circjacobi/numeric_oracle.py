"""High-precision numerics for the bulk-scaled densities and their Fourier transform.

Three evaluation paths for the beta = 2 density:

``bessel``
    the q = 0 Bessel form, any p > -1/2, via ``mpmath.besselj``;
``elementary``
    integer p, q = 0: the half-integer Bessel functions terminate, leaving
    ``rho = N(w) + M_c(w) cos(2 pi x) + M_s(w) sin(2 pi x)`` with w = 1/(pi x) and
    N, M_c, M_s exact rational polynomials in w;
``series``
    general (p, q), p > 0: the confluent-hypergeometric form summed as one
    Taylor series, ``rho = C e^{-q pi sgn x} |x|^{2p} S(x)``.

Derivatives are always taken term by term from generalized power series.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath as mp
from gmpy2 import mpq

from .ode_engine import ParamPoly, bessel_a

DIGITS_ENV = "CIRCJACOBI_DIGITS"


class PrecisionError(ArithmeticError):
    """The requested point needs more range than the context allows."""


class UnsupportedParameters(ValueError):
    """No evaluator or tail model exists for the requested parameters."""


def default_digits() -> int:
    return int(os.environ.get(DIGITS_ENV, "40"))


@dataclass(frozen=True)
class PrecisionContext:
    digits: int = field(default_factory=default_digits)
    x_max: float = 12.0  # largest |x| for the Taylor-series paths
    tail_cut: int = 40  # quadrature runs on [0, tail_cut]

    def __post_init__(self):
        if self.digits < 20:
            raise ValueError("digits must be at least 20")

    def work(self, extra: int = 0):
        return mp.workdps(self.digits + 10 + extra)


@dataclass
class DensityProfile:
    grid: list
    values: list
    meta: Dict[str, str]


@dataclass
class FTResult:
    tau: object
    value: object
    error_estimate: object
    tail_model: str


def _mpf(v):
    if isinstance(v, str) and "/" in v:
        n, d = v.split("/")
        return mp.mpf(int(n)) / int(d)
    if isinstance(v, type(mpq(0))):
        return mp.mpf(int(v.numerator)) / int(v.denominator)
    return mp.mpf(v)


def _is_nonneg_int(v) -> bool:
    v = _mpf(v)
    return v >= 0 and mp.isint(v)


# --------------------------------------------------------------------------- generalized power series
class GenSeries:
    """f(x) = x**base * sum_m coeffs[m] x**m for x > 0."""

    __slots__ = ("base", "coeffs")

    def __init__(self, base, coeffs: Sequence):
        self.base = mp.mpf(base)
        self.coeffs = list(coeffs)

    def __mul__(self, other: "GenSeries") -> "GenSeries":
        n = min(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs[:n], other.coeffs[:n]
        out = [mp.fsum(a[i] * b[m - i] for i in range(m + 1)) for m in range(n)]
        return GenSeries(self.base + other.base, out)

    def __add__(self, other: "GenSeries") -> "GenSeries":
        if self.base != other.base:
            raise ValueError("bases differ")
        n = min(len(self.coeffs), len(other.coeffs))
        return GenSeries(self.base, [self.coeffs[i] + other.coeffs[i] for i in range(n)])

    def __sub__(self, other: "GenSeries") -> "GenSeries":
        return self + other.scale(-1)

    def scale(self, c) -> "GenSeries":
        return GenSeries(self.base, [c * v for v in self.coeffs])

    def shift(self, s: int) -> "GenSeries":
        """Multiply by x**s, s an integer (kept in the base)."""
        return GenSeries(self.base + s, self.coeffs)

    def rebase(self, base) -> "GenSeries":
        """Same function with a smaller base (base - new_base a non-negative integer)."""
        d = self.base - base
        if d < 0 or not mp.isint(d):
            raise ValueError("cannot rebase upwards")
        d = int(d)
        return GenSeries(base, [mp.mpf(0)] * d + self.coeffs[: len(self.coeffs) - d])

    def derivatives(self, x, order: int) -> list:
        """[f(x), f'(x), ..., f^(order)(x)]."""
        x = mp.mpf(x)
        out = []
        for k in range(order + 1):
            acc = []
            xp = x ** (self.base - k)
            for m, c in enumerate(self.coeffs):
                e = self.base + m
                w = mp.mpf(1)
                for t in range(k):
                    w *= e - t
                if w and c:
                    acc.append(c * w * xp)
                xp *= x
            out.append(mp.fsum(acc))
        return out

    def tail_bound(self, x):
        """Size of the last two retained terms, a proxy for the truncation error."""
        x = mp.mpf(x)
        n = len(self.coeffs)
        return sum(abs(self.coeffs[m]) * x ** (self.base + m) for m in range(max(0, n - 2), n))


def _terms_needed(type_, x, digits) -> int:
    """Length L with (type*x)**L / L! below 10**-(digits + 10)."""
    z = float(type_ * abs(x))
    target = -(digits + 10) * math.log(10)
    L = max(int(z) + 1, 2)
    while L * math.log(max(z, 1e-300)) - math.lgamma(L + 1) > target:
        L += 1
    return L + 6


def _guard_digits(type_, x) -> int:
    return int(type_ * abs(x) / math.log(10)) + 8


def _bessel_series(nu, a, L) -> GenSeries:
    """J_nu(a x) as x**nu * sum_m c_m x**m (even m only)."""
    nu = mp.mpf(nu)
    coeffs = [mp.mpf(0)] * L
    half = mp.mpf(a) / 2
    for k in range((L + 1) // 2):
        coeffs[2 * k] = (-1) ** k * half ** (2 * k + nu) / (mp.factorial(k) * mp.gamma(k + nu + 1))
    return GenSeries(nu, coeffs)


# --------------------------------------------------------------------------- beta = 2, q = 0
def _density_beta2_bessel(x, p):
    if x == 0:
        return mp.mpf(1) if p == 0 else mp.mpf(0)
    z = mp.pi * abs(x)
    jm = mp.besselj(p - mp.mpf(1) / 2, z)
    jp = mp.besselj(p + mp.mpf(1) / 2, z)
    return (mp.pi * z / 2) * (jm ** 2 + jp ** 2 - 2 * p / z * jm * jp)


@lru_cache(maxsize=None)
def elementary_model(p: int) -> Tuple[Tuple[mpq, ...], Tuple[mpq, ...], Tuple[mpq, ...]]:
    """Exact (N, M_c, M_s) for integer p >= 0, each ascending in w = 1/(pi x).

    rho(x) = N(w) + M_c(w) cos(2 pi x) + M_s(w) sin(2 pi x) for x > 0.
    """
    if p < 0:
        raise UnsupportedParameters("p must be a non-negative integer")
    P_ = ParamPoly.var("p")

    def ab(nu):
        # J_nu(z) = sqrt(2/(pi z)) (A cos w_nu - B sin w_nu), terminating for half-integer nu
        A: Dict[int, mpq] = {}
        B: Dict[int, mpq] = {}
        k = 0
        while True:
            a = bessel_a(k, P_ * 0 + nu).evaluate(0, 0).re
            if not a:
                break
            if k % 2 == 0:
                A[k] = a * (-1) ** (k // 2)
            else:
                B[k] = a * (-1) ** (k // 2)
            k += 1
        return A, B

    def mul(f, g):
        out: Dict[int, mpq] = {}
        for i, a in f.items():
            for j, b in g.items():
                out[i + j] = out.get(i + j, mpq(0)) + a * b
        return out

    def add(*fs, coeffs=None):
        out: Dict[int, mpq] = {}
        for f, c in zip(fs, coeffs):
            for i, a in f.items():
                out[i] = out.get(i, mpq(0)) + c * a
        return out

    Am, Bm = ab(mpq(2 * p - 1, 2))
    Ap, Bp = ab(mpq(2 * p + 1, 2))
    pw = {1: mpq(p)}
    h = mpq(1, 2)
    N = add(mul(Am, Am), mul(Bm, Bm), mul(Bp, Bp), mul(Ap, Ap), coeffs=[h, h, h, h])
    N = add(N, mul(pw, add(mul(Am, Bp), mul(Bm, Ap), coeffs=[1, -1])), coeffs=[1, -1])
    Mc = add(mul(Am, Am), mul(Bm, Bm), mul(Bp, Bp), mul(Ap, Ap), coeffs=[h, -h, h, -h])
    Mc = add(Mc, mul(pw, add(mul(Am, Bp), mul(Bm, Ap), coeffs=[1, 1])), coeffs=[1, -1])
    Ms = add(mul(Am, Bm), mul(Ap, Bp), coeffs=[-1, 1])
    Ms = add(Ms, mul(pw, add(mul(Am, Ap), mul(Bm, Bp), coeffs=[1, -1])), coeffs=[1, -1])
    sign = (-1) ** p

    def dense(f, s=1):
        deg = max((i for i, v in f.items() if v), default=-1)
        return tuple(s * f.get(i, mpq(0)) for i in range(deg + 1))

    return dense(N), dense(Mc, sign), dense(Ms, sign)


def _poly_w(coeffs, w):
    acc = mp.mpf(0)
    for c in reversed(coeffs):
        acc = acc * w + mp.mpf(int(c.numerator)) / int(c.denominator)
    return acc


def _density_beta2_elementary(x, p: int):
    if x == 0:
        return _density_beta2_bessel(x, p)
    ax = abs(x)
    N, Mc, Ms = elementary_model(p)
    # inverse powers of w cancel near 0; add guard digits accordingly
    extra = max(0, int(len(N) * math.log10(max(1.0, 1.0 / float(mp.pi * ax))))) + 5
    with mp.extradps(extra):
        w = 1 / (mp.pi * ax)
        v = _poly_w(N, w) + _poly_w(Mc, w) * mp.cospi(2 * ax) + _poly_w(Ms, w) * mp.sinpi(2 * ax)
    return +v


# --------------------------------------------------------------------------- beta = 2, general q
def _series_S(p, q, L):
    """Taylor coefficients of S(x) = e^{-2 pi i x} [(x F_a)' F_b - x F_a F_b']."""
    a, c = p + 1 - 1j * q, 2 * p + 2
    a2, c2 = p - 1j * q, 2 * p
    z = 2j * mp.pi
    A = [mp.mpc(1)]
    B = [mp.mpc(1)]
    E = [mp.mpc(1)]
    for k in range(1, L):
        A.append(A[-1] * (a + k - 1) / ((c + k - 1) * k) * z)
        B.append(B[-1] * (a2 + k - 1) / ((c2 + k - 1) * k) * z)
        E.append(E[-1] * (-z) / k)
    W = [mp.fsum(A[i] * B[m - i] * (i + 1 - (m - i)) for i in range(m + 1)) for m in range(L)]
    return [mp.fsum(E[i] * W[m - i] for i in range(m + 1)) for m in range(L)]


def _series_prefactor(p, q):
    # normalized so that rho -> 1 at infinity
    return (2 * mp.pi) ** (2 * p) * abs(mp.gamma(p + 1 - 1j * q)) ** 2 / (
        mp.gamma(2 * p + 2) * mp.gamma(2 * p + 1))


def density_beta2_series(x, p, q, ctx: PrecisionContext, order: int = 0):
    """Series path; returns [rho, rho', ...] up to ``order`` (derivatives for x > 0 only)."""
    p, q, x = _mpf(p), _mpf(q), _mpf(x)
    if p <= 0:
        raise UnsupportedParameters("the series path needs p > 0")
    if abs(x) > ctx.x_max:
        raise PrecisionError(f"|x| = {x} exceeds x_max = {ctx.x_max} for the series path")
    if order and x <= 0:
        raise UnsupportedParameters("derivatives are provided for x > 0")
    type_ = 6 * math.pi
    with ctx.work(_guard_digits(type_, x)):
        L = _terms_needed(type_, x, ctx.digits)
        S = GenSeries(0, _series_S(p, q, L))
        K = _series_prefactor(p, q) * mp.exp(-q * mp.pi * mp.sign(x))
        if x == 0:
            return [mp.mpf(0)] + [mp.mpf(0)] * order
        if x > 0:
            vals = S.shift(0).scale(K)
            vals = GenSeries(2 * p, vals.coeffs).derivatives(x, order)
            out = [mp.re(v) for v in vals]
        else:
            s = mp.fsum(c * x ** m for m, c in enumerate(S.coeffs))
            out = [mp.re(K * (-x) ** (2 * p) * s)]
    return [+v for v in out]


def density_beta2(x, p, q=0, ctx: Optional[PrecisionContext] = None, method: str = "auto"):
    """Bulk-scaled beta = 2 density at x."""
    ctx = ctx or PrecisionContext()
    p_, q_, x_ = _mpf(p), _mpf(q), _mpf(x)
    if p_ <= mp.mpf(-1) / 2:
        raise UnsupportedParameters("p must exceed -1/2")
    if method == "auto":
        method = "bessel" if q_ == 0 else "series"
    with ctx.work():
        if method == "bessel":
            if q_ != 0:
                raise UnsupportedParameters("the Bessel form needs q = 0")
            v = _density_beta2_bessel(x_, p_)
        elif method == "elementary":
            if q_ != 0 or not _is_nonneg_int(p_):
                raise UnsupportedParameters("the elementary form needs integer p >= 0 and q = 0")
            v = _density_beta2_elementary(x_, int(p_))
        elif method == "series":
            if p_ == 0 and q_ == 0:
                v = mp.mpf(1)
            else:
                v = density_beta2_series(x_, p_, q_, ctx)[0]
        else:
            raise ValueError(f"unknown method {method!r}")
    with mp.workdps(ctx.digits):
        return +v


def kummer_symmetry_defect(x, p, q, ctx: Optional[PrecisionContext] = None):
    """|rho(x; p, q) - rho(-x; p, -q)| via the series path."""
    ctx = ctx or PrecisionContext()
    a = density_beta2(x, p, q, ctx, method="series")
    b = density_beta2(-_mpf(x), p, -_mpf(q), ctx, method="series")
    return abs(a - b)


def _combine_q0(jm: GenSeries, jp: GenSeries, p, a) -> GenSeries:
    """(a x / 2)(J_-^2 + J_+^2) - p J_- J_+ with Bessel arguments a x.

    This is rho(y)/pi at pi y = a x; with a = 1 it is R(x) itself.
    """
    base = 2 * jm.base + 1  # lowest exponent appearing (= 2p)
    t1 = (jm * jm).shift(1).scale(mp.mpf(a) / 2).rebase(base)
    t2 = (jp * jp).shift(1).scale(mp.mpf(a) / 2).rebase(base)
    t3 = (jm * jp).scale(p).rebase(base)
    return t1 + t2 - t3


def rescaled_derivatives_beta2(x, p, q=0, ctx: Optional[PrecisionContext] = None, order: int = 3):
    """[R, R', ..., R^(order)] at x > 0 for R(x) = (1/pi) rho(x/pi), term by term."""
    ctx = ctx or PrecisionContext()
    p_, q_, x_ = _mpf(p), _mpf(q), _mpf(x)
    if x_ <= 0:
        raise UnsupportedParameters("x must be positive")
    if p_ == 0 and q_ == 0:
        return [1 / mp.pi] + [mp.mpf(0)] * order
    if q_ == 0:
        type_ = 2.0
        if x_ > ctx.x_max * math.pi:
            raise PrecisionError("x beyond the certified range")
        with ctx.work(_guard_digits(type_, x_)):
            L = _terms_needed(type_, x_, ctx.digits)
            # in the rescaled variable the Bessel arguments are x itself; R = rho / pi
            ser = _combine_q0(_bessel_series(p_ - mp.mpf(1) / 2, 1, L),
                              _bessel_series(p_ + mp.mpf(1) / 2, 1, L), p_, 1)
            out = ser.derivatives(x_, order)
    else:
        rho = density_beta2_series(x_ / mp.pi, p_, q_, ctx, order)
        out = [v * mp.pi ** (-1 - k) for k, v in enumerate(rho)]
    with mp.workdps(ctx.digits):
        return [+v for v in out]


# --------------------------------------------------------------------------- beta = 4, q = 0
def _beta4_series(p, L) -> GenSeries:
    """R(X) = (1/pi) rho_4(X/pi) at q = 0 as a generalized power series in X."""
    p = mp.mpf(p)
    half = mp.mpf(1) / 2
    # beta = 2 part at 2x with p -> 2p: Bessel arguments 2 pi x = 2 X
    part2 = _combine_q0(_bessel_series(2 * p - half, 2, L), _bessel_series(2 * p + half, 2, L), 2 * p, 2)
    # correction / pi = p J_{2p-1/2}(2X) X^{-1/2} int_0^X t^{-1/2} J_{2p+1/2}(2t) dt
    jb = _bessel_series(2 * p - half, 2, L)
    jb = GenSeries(jb.base - half, jb.coeffs)
    ji = _bessel_series(2 * p + half, 2, L)
    e0 = ji.base - half
    integ = GenSeries(e0 + 1, [c / (e0 + m + 1) if c else mp.mpf(0) for m, c in enumerate(ji.coeffs)])
    corr = (jb * integ).scale(p)
    base = min(part2.base, corr.base)
    return part2.rebase(base) - corr.rebase(base)


def _beta4_R(X, p, ctx: PrecisionContext, order: int):
    if X > ctx.x_max * math.pi:
        raise PrecisionError(f"x = {X / mp.pi} exceeds x_max = {ctx.x_max}")
    type_ = 4.0
    with ctx.work(_guard_digits(type_, X)):
        L = _terms_needed(type_, X, ctx.digits)
        vals = _beta4_series(p, L).derivatives(X, order)
    with mp.workdps(ctx.digits):
        return [+v for v in vals]


def density_beta4_q0(x, p, ctx: Optional[PrecisionContext] = None, order: int = 0):
    """Bulk-scaled beta = 4 density at q = 0 (even in x); with order > 0 returns [rho, rho', ...]."""
    ctx = ctx or PrecisionContext()
    p_, x_ = _mpf(p), abs(_mpf(x))
    if p_ == 0:
        return mp.mpf(1) if order == 0 else [mp.mpf(1)] + [mp.mpf(0)] * order
    if x_ == 0:
        return mp.mpf(0) if order == 0 else [mp.mpf(0)] * (order + 1)
    with ctx.work():
        vals = _beta4_R(mp.pi * x_, p_, ctx, order)
        out = [v * mp.pi ** (k + 1) for k, v in enumerate(vals)]  # rho(x) = pi R(pi x)
    with mp.workdps(ctx.digits):
        out = [+v for v in out]
    return out[0] if order == 0 else out


def rescaled_derivatives_beta4(x, p, ctx: Optional[PrecisionContext] = None, order: int = 5):
    """[R, ..., R^(order)] for R(x) = (1/pi) rho_4(x/pi) at q = 0, x > 0."""
    ctx = ctx or PrecisionContext()
    if _mpf(p) == 0:
        return [1 / mp.pi] + [mp.mpf(0)] * order
    return _beta4_R(_mpf(x), _mpf(p), ctx, order)


# --------------------------------------------------------------------------- Fourier transform
def _tail_integral(k: int, omega, X):
    """int_X^oo x^{-k} e^{i omega x} dx."""
    if omega == 0:
        if k <= 1:
            raise ArithmeticError("non-integrable tail")
        return mp.mpf(X) ** (1 - k) / (k - 1)
    return mp.mpf(X) ** (1 - k) * mp.expint(k, -1j * omega * X)


def _elementary_tail(p: int, tau, X):
    """2 int_X^oo (rho - 1) cos(tau x) dx from the exact elementary model."""
    N, Mc, Ms = elementary_model(p)
    two_pi = 2 * mp.pi
    acc = mp.mpf(0)
    for k, c in enumerate(N):
        if k == 0 or not c:
            continue  # the constant 1 is subtracted
        cv = mp.mpf(int(c.numerator)) / int(c.denominator) / mp.pi ** k
        acc += cv * mp.re(_tail_integral(k, tau, X))
    for coeffs, part in ((Mc, mp.re), (Ms, mp.im)):
        for k, c in enumerate(coeffs):
            if not c:
                continue
            if k == 0:
                raise ArithmeticError("non-decaying oscillatory term")
            cv = mp.mpf(int(c.numerator)) / int(c.denominator) / mp.pi ** k
            acc += cv * part(_tail_integral(k, two_pi - tau, X) + _tail_integral(k, two_pi + tau, X)) / 2
    return 2 * acc


def fourier_transform(tau, p, q=0, beta=2, ctx: Optional[PrecisionContext] = None) -> FTResult:
    """int (rho - 1) e^{i tau x} dx on the supported region: beta = 2, integer p >= 0, q = 0."""
    ctx = ctx or PrecisionContext()
    if beta != 2 or _mpf(q) != 0 or not _is_nonneg_int(p):
        raise UnsupportedParameters("numeric FT is available for beta = 2, q = 0, integer p >= 0 only")
    p = int(_mpf(p))
    with ctx.work():
        tau = abs(_mpf(tau))  # even in tau at q = 0
        if tau >= 2 * mp.pi:
            raise UnsupportedParameters("tau must lie in [0, 2 pi)")
        if p == 0:
            return FTResult(tau, mp.mpf(0), mp.mpf(0), "rho = 1 identically")
        X = int(ctx.tail_cut)

        def f(x):
            rho = _density_beta2_bessel(x, p) if x < 1 else _density_beta2_elementary(x, p)
            return (rho - 1) * mp.cos(tau * x)

        total = mp.mpf(0)
        err = mp.mpf(0)
        for k in range(X):
            v, e = mp.quad(f, [k, k + 1], error=True)
            total += v
            err += abs(e)
        body = 2 * total
        tail = _elementary_tail(p, tau, X)
        value = body + tail
        err_est = 2 * err + abs(value) * mp.mpf(10) ** (-ctx.digits)
    with mp.workdps(ctx.digits):
        return FTResult(+tau, +value, +err_est,
                        f"exact elementary tail beyond x = {X} (expint closed forms)")


def screening_integral(p, q=0, beta=2, ctx: Optional[PrecisionContext] = None) -> FTResult:
    """int (rho - 1) dx, the tau -> 0 limit of the transform."""
    return fourier_transform(0, p, q, beta, ctx)


# --------------------------------------------------------------------------- dumps
def density_profile(xs, p, q=0, beta=2, ctx: Optional[PrecisionContext] = None) -> DensityProfile:
    ctx = ctx or PrecisionContext()
    if beta == 2:
        vals = [density_beta2(x, p, q, ctx) for x in xs]
        formula = "bessel" if _mpf(q) == 0 else "series"
    elif beta == 4:
        if _mpf(q) != 0:
            raise UnsupportedParameters("beta = 4 density is available at q = 0 only")
        vals = [density_beta4_q0(x, p, ctx) for x in xs]
        formula = "beta4-q0"
    else:
        raise UnsupportedParameters("beta must be 2 or 4")
    meta = {"beta": str(beta), "p": str(p), "q": str(q), "formula": formula, "digits": str(ctx.digits)}
    return DensityProfile([_mpf(x) for x in xs], vals, meta)


def profile_to_csv(rows, meta: Dict[str, str], columns=("x", "value", "error_estimate"), digits=40) -> str:
    buf = io.StringIO()
    buf.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([r if isinstance(r, str) else mp.nstr(r, digits, strip_zeros=False) for r in row])
    return buf.getvalue()


def profile_to_json(rows, meta: Dict[str, str], columns=("x", "value", "error_estimate"), digits=40) -> str:
    data = [{c: (r if isinstance(r, str) else mp.nstr(r, digits, strip_zeros=False))
             for c, r in zip(columns, row)} for row in rows]
    return json.dumps({"meta": meta, "rows": data}, indent=2)
