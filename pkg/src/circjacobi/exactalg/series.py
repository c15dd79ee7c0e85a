"""Large-x coefficient extraction and exact interpolation in an integer index."""

from __future__ import annotations

from math import comb
from typing import List, Sequence, Tuple

from gmpy2 import mpq

from .params import ParamScalar
from .xrational import XRationalFn


class NotDecayingError(ValueError):
    pass


class PolynomialFitError(ArithmeticError):
    """The sampled data is not a polynomial of the claimed degree."""


def inverse_x_coefficient(f: XRationalFn, k: int) -> ParamScalar:
    """Coefficient of x**(-k-1) in the large-x expansion of ``f``.

    Uses (1 - x)**(-b) = (-1)**b x**(-b) sum_s C(s+b-1, b-1) x**(-s).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    deg = f.degree()
    if deg < 0:
        return ParamScalar.zero()
    a, b = f.a, f.b
    if deg >= a + b:
        raise NotDecayingError(f"numerator degree {deg} >= total pole order {a + b}: no 1/x decay")
    sign = -1 if b % 2 else 1
    acc = ParamScalar.zero()
    for m, c in enumerate(f.numerator):
        if not c:
            continue
        s = k + 1 + m - a - b
        if s < 0:
            continue
        w = comb(s + b - 1, b - 1) if b else (1 if s == 0 else 0)
        if w:
            acc = acc + c.scale(sign * w)
    return acc


def fit_polynomial_in_k(samples: Sequence[Tuple[int, ParamScalar]], degree: int) -> List[ParamScalar]:
    """Interpolate ``value(k)`` by a polynomial of the given degree.

    Returns ascending coefficients [c_0, ..., c_degree]. Needs at least
    ``degree + 2`` samples; every sample beyond the first ``degree + 1`` is a
    consistency witness and a mismatch raises ``PolynomialFitError``.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    pts = [(int(k), v if isinstance(v, ParamScalar) else ParamScalar.const(v)) for k, v in samples]
    if len(pts) < degree + 2:
        raise ValueError(f"need at least {degree + 2} samples, got {len(pts)}")
    if len({k for k, _ in pts}) != len(pts):
        raise ValueError("sample abscissae must be distinct")
    base = pts[: degree + 1]
    xs = [k for k, _ in base]
    # Newton divided differences
    table = [v for _, v in base]
    newton = [table[0]]
    for lvl in range(1, degree + 1):
        table = [
            (table[i + 1] - table[i]).scale(mpq(1, xs[i + lvl] - xs[i]))
            for i in range(len(table) - 1)
        ]
        newton.append(table[0])
    # expand Newton form into monomial coefficients
    coeffs = [ParamScalar.zero()] * (degree + 1)
    basis = [mpq(1)]  # coefficients of prod_{i<lvl} (k - x_i)
    for lvl, d in enumerate(newton):
        for pw, w in enumerate(basis):
            if w:
                coeffs[pw] = coeffs[pw] + d.scale(w)
        if lvl < degree:
            nb = [mpq(0)] * (len(basis) + 1)
            for pw, w in enumerate(basis):
                nb[pw + 1] += w
                nb[pw] -= w * xs[lvl]
            basis = nb
    for k, v in pts[degree + 1:]:
        if evaluate_k_polynomial(coeffs, k) != v:
            raise PolynomialFitError(
                f"sample at k={k} disagrees with the degree-{degree} interpolant")
    return coeffs


def evaluate_k_polynomial(coeffs: Sequence[ParamScalar], k) -> ParamScalar:
    acc = ParamScalar.zero()
    for c in reversed(coeffs):
        acc = acc.scale(mpq(k)) + c
    return acc
