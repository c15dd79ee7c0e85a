"""Loop-equation hierarchy for the circular Jacobi beta ensemble.

The connected resolvent correlators are expanded as

    Wbar_n(x_1..x_n) = N**(2-n) * sum_l Wbar_n^l(x_1..x_n) / N**l

and the Jacobi-ensemble loop equations, with the circular-Jacobi parameters

    lambda_1 = -kappa*N + lt1,   lt1 = kappa - 1 - kappa*p - i*q,
    lambda_2 = lt2 = 2*kappa*p,

are collected by powers of N. The equation at order N**(2-n-(l-1)) is
linear in Wbar_n^l with coefficient kappa/x_1 (the -kappa/x_1 from lambda_1
plus 2*kappa*Wbar_1^0 from the quadratic term), so every step divides only by
kappa/x_1. The n >= 3 equations are generated from the same template as n = 1, 2.

The large-x coefficient of x**(-k-1) in Wbar_1^{j+1} is a polynomial in k of
degree j; its leading coefficient is alpha_j, and

    c_infinity(tau) = sum_j alpha_j (tau / 2 pi)**j          (tau > 0).

The N/x term (the normalisation) never enters the extraction because only
Wbar_1^l with l >= 1 are sampled.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Tuple

from gmpy2 import mpq

from .exactalg import (
    I,
    KAPPA,
    P,
    Q,
    MultiXRationalFn,
    ParamScalar,
    PoleStructureError,
    PolynomialFitError,
    XRationalFn,
    fit_polynomial_in_k,
    inverse_x_coefficient,
)

log = logging.getLogger(__name__)

DEFAULT_ORDER = 5

ONE = ParamScalar.one()
LAMBDA1_TILDE = KAPPA - ONE - KAPPA * P - I * Q
LAMBDA2_TILDE = KAPPA * P * 2
SOURCE = LAMBDA1_TILDE + LAMBDA2_TILDE + ONE - KAPPA  # = kappa*p - i*q
INV_KAPPA = ONE.divide_by_monomial(KAPPA)


class HierarchyError(ArithmeticError):
    """A structural assertion failed while solving for Wbar_n^l."""

    def __init__(self, n: int, l: int, msg: str):
        super().__init__(f"(n={n}, l={l}): {msg}")
        self.n = n
        self.l = l


@dataclass
class HierarchyState:
    """Solved correlators ``table[(n, l)]`` up to ``max_order`` = J (so Wbar_1^{J+1} exists)."""

    table: Dict[Tuple[int, int], MultiXRationalFn]
    max_order: int
    max_arity: int

    def W1(self, l: int) -> XRationalFn:
        return self.table[(1, l)].to_univariate()

    def W(self, n: int, l: int) -> MultiXRationalFn:
        return self.table[(n, l)]


class _Solver:
    def __init__(self, arity_cap: Optional[int]):
        self.memo: Dict[Tuple[int, int], MultiXRationalFn] = {}
        self.arity_cap = arity_cap

    def W(self, n: int, l: int) -> MultiXRationalFn:
        key = (n, l)
        if key not in self.memo:
            if self.arity_cap is not None and n > self.arity_cap:
                raise HierarchyError(n, l, f"arity exceeds the cap {self.arity_cap}")
            self.memo[key] = self._solve(n, l)
        return self.memo[key]

    def _solve(self, n: int, l: int) -> MultiXRationalFn:
        if n == 1 and l == 0:
            return MultiXRationalFn(1, {(0,): ONE}, (1,), (0,))
        rest = MultiXRationalFn.zero(n)
        try:
            if l >= 1:
                rest = rest + self._linear_operator(self.W(n, l - 1))
            if n >= 2:
                rest = rest + self._lower_arity_terms(n, l)
            if l >= 2:
                upper = self.W(n + 1, l - 2)
                if upper:
                    rest = rest + upper.merge(0, 1).scale(KAPPA)
            rest = rest + self._quadratic_terms(n, l)
            if n == 1 and l == 1:
                rest = rest + MultiXRationalFn(1, {(0,): SOURCE}, (1,), (1,))
            out = rest.times_x_power(0, 1).scale(-INV_KAPPA)
        except PoleStructureError as exc:
            raise HierarchyError(n, l, str(exc)) from exc
        if not out.is_symmetric():
            raise HierarchyError(n, l, "solution is not symmetric in its variables")
        log.debug("solved W_%d^%d: %r", n, l, out)
        return out

    @staticmethod
    def _linear_operator(F: MultiXRationalFn) -> MultiXRationalFn:
        """[(kappa-1) d/dx_1 + lt1/x_1 - lt2/(1-x_1)] F."""
        if not F:
            return F
        out = F.diff(0).scale(KAPPA - ONE)
        out = out + F.times_x_power(0, -1).scale(LAMBDA1_TILDE)
        out = out - F.over_one_minus_x(0).scale(LAMBDA2_TILDE)
        return out

    def _lower_arity_terms(self, n: int, l: int) -> MultiXRationalFn:
        prev = self.W(n - 1, l)
        if not prev:
            return MultiXRationalFn.zero(n)
        E = prev.embed(n, list(range(1, n)))
        acc = E.scale(n - 1)
        for k in range(1, n):
            acc = acc + E.x_diff(k)
        out = -acc.times_x_power(0, -1).over_one_minus_x(0)
        over_x1 = E.times_x_power(0, -1)
        for k in range(1, n):
            brace = E.difference_quotient(0, k) + over_x1
            out = out + brace.diff(k)
        return out

    def _quadratic_terms(self, n: int, l: int) -> MultiXRationalFn:
        acc = MultiXRationalFn.zero(n)
        others = list(range(1, n))
        for size in range(0, n):
            for S in combinations(others, size):
                comp = [v for v in others if v not in S]
                for m1 in range(0, l + 1):
                    m2 = l - m1
                    if (size == 0 and m1 == 0) or (size == n - 1 and m2 == 0):
                        continue
                    A = self.W(size + 1, m1)
                    if not A:
                        continue
                    B = self.W(n - size, m2)
                    if not B:
                        continue
                    acc = acc + A.embed(n, [0, *S]) * B.embed(n, [0, *comp])
        return acc.scale(KAPPA) if acc else acc


def required_arity(J: int) -> int:
    """Largest n with some Wbar_n^l needed for Wbar_1^{J+1}."""
    return max(1, (J + 1) // 2 + 1)


def solve_hierarchy(J: int = DEFAULT_ORDER, max_arity: Optional[int] = None) -> HierarchyState:
    """Solve the hierarchy far enough to read off alpha_0..alpha_J."""
    if J < 0:
        raise ValueError("J must be non-negative")
    need = required_arity(J)
    if max_arity is not None and max_arity < need:
        raise ValueError(f"order J={J} needs arity {need}, cap is {max_arity}")
    solver = _Solver(max_arity)
    for l in range(0, J + 2):
        solver.W(1, l)
    arity = max(n for n, _ in solver.memo)
    return HierarchyState(table=dict(solver.memo), max_order=J, max_arity=arity)


def extract_alpha(state: HierarchyState, j: int) -> ParamScalar:
    """Leading k-coefficient of the x**(-k-1) coefficients of Wbar_1^{j+1}."""
    if j + 1 > state.max_order + 1:
        raise ValueError(f"state solved to order {state.max_order}, need {j}")
    f = state.W1(j + 1)
    # below k = a the x**(-m) partial fractions still contribute; start past them
    k0 = max(1, f.a)
    samples = [(k, inverse_x_coefficient(f, k)) for k in range(k0, k0 + j + 2)]
    try:
        coeffs = fit_polynomial_in_k(samples, j)
    except PolynomialFitError as exc:
        raise HierarchyError(1, j + 1, f"coefficients are not polynomial in k of degree {j}: {exc}")
    return coeffs[j]


@dataclass
class CoefficientTable:
    """alpha_j together with the sgn-tau part h_j and the analytic part h~_j.

    ``h[j]`` and ``h_tilde[j]`` hold (2 pi)**j times the coefficient; the true
    value is ``h[j] * (2 pi)**pi_power[j]`` with ``pi_power[j] == -j``.
    """

    alphas: List[ParamScalar]
    h: List[ParamScalar] = field(default_factory=list)
    h_tilde: List[ParamScalar] = field(default_factory=list)
    pi_power: List[int] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.alphas) - 1


def split_alpha(alphas: List[ParamScalar]) -> CoefficientTable:
    """Reality split with kappa, p, q real: even j -> h = i Im, h~ = Re; odd j swaps."""
    h, ht = [], []
    for j, a in enumerate(alphas):
        re = a.real_part()
        im = a.imag_part() * I
        if j % 2 == 0:
            h.append(im)
            ht.append(re)
        else:
            h.append(re)
            ht.append(im)
    return CoefficientTable(alphas=list(alphas), h=h, h_tilde=ht, pi_power=[-j for j in range(len(alphas))])


def compute_table(J: int = DEFAULT_ORDER, state: Optional[HierarchyState] = None) -> CoefficientTable:
    state = state or solve_hierarchy(J)
    return split_alpha([extract_alpha(state, j) for j in range(J + 1)])


# --------------------------------------------------------------------------- checks
def duality_image(f: ParamScalar, j: int) -> ParamScalar:
    """(-1/kappa)**(j+1) * f(kappa -> 1/kappa, p -> -kappa p, q -> -q/kappa)."""

    def swap(e):
        k, a, b = e
        sign = -1 if (a + b + j + 1) % 2 else 1
        return (-k + a - b - (j + 1), a, b), sign

    return f.monomial_map(swap)


def verify_duality(table: CoefficientTable, J: Optional[int] = None) -> List[dict]:
    J = table.order if J is None else J
    report = []
    for j in range(J + 1):
        ok_h = duality_image(table.h[j], j) == table.h[j]
        ok_t = duality_image(table.h_tilde[j], j) == table.h_tilde[j]
        report.append({"check": "duality", "j": j, "h": ok_h, "h_tilde": ok_t, "pass": ok_h and ok_t})
    return report


def q_reflect(f: ParamScalar) -> ParamScalar:
    return f.monomial_map(lambda e: (e, -1 if e[2] % 2 else 1))


def verify_q_parity(table: CoefficientTable) -> List[dict]:
    report = []
    for j in range(table.order + 1):
        sh = -1 if (j + 1) % 2 else 1
        st = -1 if j % 2 else 1
        ok_h = q_reflect(table.h[j]) == table.h[j].scale(sh)
        ok_t = q_reflect(table.h_tilde[j]) == table.h_tilde[j].scale(st)
        report.append({"check": "q-parity", "j": j, "pass": ok_h and ok_t})
    return report


def verify_reality(table: CoefficientTable) -> List[dict]:
    report = []
    for j in range(table.order + 1):
        if j % 2 == 0:
            ok = table.h[j].is_imaginary() and table.h_tilde[j].is_real()
        else:
            ok = table.h[j].is_real() and table.h_tilde[j].is_imaginary()
        report.append({"check": "reality", "j": j, "pass": ok})
    return report


def _partial_at_origin(f: ParamScalar, name: str) -> ParamScalar:
    """Coefficient of ``name`` to first power with the other parameter set to zero."""
    lin = f.coefficient_in(name, 1)
    other = "q" if name == "p" else "p"
    return lin.coefficient_in(other, 0)


def verify_linear_response(table: CoefficientTable, J: Optional[int] = None) -> List[dict]:
    """Order-by-order linear response in p and in q around p = q = 0.

    p: d/dp alpha_l |_(0,0) = -kappa * alpha_{l+1}(p=1, q=0)
    q: d/dq alpha_l |_(0,0) = -i * alpha_{l+1}(p=1, q=0)
    The q relation uses the potential transform 2 pi i / tau.
    """
    J = table.order - 1 if J is None else J
    if J + 1 > table.order:
        raise ValueError("linear response at order l needs alpha_{l+1}")
    report = []
    lead = ONE + table.alphas[0].at_pq(1, 0)
    report.append({"check": "linear-response-p", "order": -1, "pass": lead.is_zero()})
    for l in range(J + 1):
        shifted = table.alphas[l + 1].at_pq(1, 0)
        dp = _partial_at_origin(table.alphas[l], "p")
        dq = _partial_at_origin(table.alphas[l], "q")
        report.append({"check": "linear-response-p", "order": l, "pass": dp == -(KAPPA * shifted)})
        report.append({"check": "linear-response-q", "order": l, "pass": dq == -(I * shifted)})
    return report


def alpha_vanishes_at_origin(table: CoefficientTable) -> List[dict]:
    return [{"check": "alpha(p=q=0)", "j": j, "pass": a.at_pq(0, 0).is_zero()}
            for j, a in enumerate(table.alphas)]


# --------------------------------------------------------------------------- structure function
def laurent_to_u_poly(f: ParamScalar) -> List[mpq]:
    """Laurent polynomial in kappa (no p, q) -> ascending coefficients in u = 1/kappa.

    Requires nonpositive kappa powers only, i.e. a genuine polynomial in u.
    """
    coeffs: Dict[int, mpq] = {}
    for (k, a, b), c in f.items():
        if a or b:
            raise ValueError("expected a function of kappa alone")
        if c.im:
            raise ValueError("expected real coefficients")
        if k > 0:
            raise ValueError(f"positive kappa power {k}: not a polynomial in u")
        coeffs[-k] = c.re
    deg = max(coeffs, default=-1)
    return [coeffs.get(i, mpq(0)) for i in range(deg + 1)]


def structure_function_series(table: CoefficientTable, J: Optional[int] = None) -> List[List[mpq]]:
    """Coefficients p_j(u), j = 0..J, of f(tau) = (pi beta/|tau|)(1 + c(tau; beta, 1, 0)) in (tau/2pi)^j.

    f = kappa * sum_{l>=1} alpha_l(1, 0) (tau/2pi)**(l-1), so p_j = kappa * alpha_{j+1}(1, 0).
    """
    J = table.order - 1 if J is None else J
    if J + 1 > table.order:
        raise ValueError("p_j needs alpha_{j+1}")
    if not (ONE + table.alphas[0].at_pq(1, 0)).is_zero():
        raise ArithmeticError("1 + alpha_0(p=1, q=0) != 0: f(tau) would be singular")
    return [laurent_to_u_poly(table.alphas[j + 1].at_pq(1, 0) * KAPPA) for j in range(J + 1)]


# --------------------------------------------------------------------------- low temperature
def _poly_in_ptilde(coeffs_p: Dict[int, mpq]) -> List[mpq]:
    """Rewrite a polynomial in p as a polynomial in pt = p(p-1); raises if impossible."""
    rem = dict(coeffs_p)
    out: Dict[int, mpq] = {}
    while any(rem.values()):
        deg = max(k for k, v in rem.items() if v)
        if deg % 2:
            raise ArithmeticError("odd leading degree: not a polynomial in p(p-1)")
        m = deg // 2
        c = rem[deg]
        out[m] = c
        # subtract c * (p^2 - p)^m
        for s in range(m + 1):
            w = comb(m, s) * (-1) ** s
            e = 2 * (m - s) + s
            rem[e] = rem.get(e, mpq(0)) - c * w
    deg = max(out, default=-1)
    return [out.get(i, mpq(0)) for i in range(deg + 1)]


def low_temperature_limit(table: CoefficientTable, J: Optional[int] = None) -> List[List[mpq]]:
    """kappa -> infinity at q = 0, as polynomials in pt = p(p-1) for each (tau/2pi)**j.

    Entry 0 is the constant term, returned in powers of p instead (it is -p).
    """
    J = table.order if J is None else J
    out = []
    for j in range(J + 1):
        a = table.alphas[j]
        q0 = a.coefficient_in("q", 0)
        top = max((e[0] for e, _ in q0.items()), default=0)
        if top > 0:
            raise ArithmeticError(f"alpha_{j} grows with kappa at q = 0")
        coeffs_p: Dict[int, mpq] = {}
        for (k, pp, _), c in q0.items():
            if k == 0:
                if c.im:
                    raise ArithmeticError("non-real low-temperature coefficient")
                coeffs_p[pp] = c.re
        if j == 0:
            deg = max(coeffs_p, default=-1)
            out.append([coeffs_p.get(i, mpq(0)) for i in range(deg + 1)])
        else:
            out.append(_poly_in_ptilde(coeffs_p))
    return out


def verify_low_temperature(series: List[List[mpq]]) -> List[dict]:
    report = []
    for j, c in enumerate(series[1:], start=1):
        divisible = not c or c[0] == 0
        linear = len(c) > 1 and c[1] == 1
        report.append({"check": "low-temperature", "j": j, "divisible_by_ptilde": divisible,
                       "geometric_linear_term": linear, "pass": divisible and linear})
    return report

