"""Palindromic structure, unit-circle zeros and interlacing of polynomials in u = 1/kappa."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath as mp
from gmpy2 import mpq

from .exactalg import KAPPA, ParamScalar
from .loop_engine import CoefficientTable

DEFAULT_TOL = mp.mpf(10) ** -20


class InterlacingUndefined(ValueError):
    """Interlacing was requested for roots that are not on the unit circle."""


class RootFindingError(ArithmeticError):
    pass


@dataclass(frozen=True)
class UPoly:
    """Polynomial in u with exact rational coefficients, ascending powers."""

    coefficients: Tuple[mpq, ...]
    provenance: str = ""

    def __post_init__(self):
        c = [mpq(v) for v in self.coefficients]
        while c and c[-1] == 0:
            c.pop()
        k = 0
        while k < len(c) and c[k] == 0:
            k += 1
        object.__setattr__(self, "coefficients", tuple(c[k:]))

    @classmethod
    def from_list(cls, coeffs: Sequence, provenance: str = "") -> "UPoly":
        return cls(tuple(mpq(c) for c in coeffs), provenance)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def normalized(self) -> "UPoly":
        """Leading coefficient scaled to 1."""
        if self.is_zero():
            return self
        lead = self.coefficients[-1]
        return UPoly(tuple(c / lead for c in self.coefficients), self.provenance)

    def __call__(self, u):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * u + c
        return acc

    def __mul__(self, other: "UPoly") -> "UPoly":
        out = [mpq(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return UPoly(tuple(out), self.provenance)

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coefficients):
            if c:
                terms.append(f"{c}" + ("" if k == 0 else ("*u" if k == 1 else f"*u^{k}")))
        return " + ".join(terms) or "0"


def _laurent_to_upoly(s: ParamScalar, provenance: str) -> UPoly:
    """A function of kappa alone, as a polynomial in u after clearing the top kappa power."""
    terms: Dict[int, mpq] = {}
    imag = None
    for (k, a, b), c in s.items():
        if a or b:
            raise ValueError("expected a function of kappa alone")
        if c.re and c.im:
            raise ValueError("coefficient is neither real nor imaginary")
        this_imag = bool(c.im)
        if imag is None:
            imag = this_imag
        elif imag != this_imag:
            raise ValueError("mixed real and imaginary coefficients")
        terms[k] = c.im if this_imag else c.re
    if not terms:
        return UPoly((), provenance)
    top = max(terms)
    bottom = min(terms)
    # kappa^k = u^-k; multiply through by u^top
    return UPoly(tuple(terms.get(top - e, mpq(0)) for e in range(top - bottom + 1)), provenance)


def extract_upoly(table: CoefficientTable, j: int, var: str = "p", power: int = 1,
                  tilde: bool = False, q_scaled: bool = False) -> UPoly:
    """Coefficient of var**power in (2 pi)^j h_j (or ht_j), the other variable set to 0.

    With ``q_scaled`` the substitution q -> kappa q is made first. A factor i
    is dropped for purely imaginary coefficients.
    """
    if var not in ("p", "q"):
        raise ValueError("var must be 'p' or 'q'")
    src = (table.h_tilde if tilde else table.h)[j]
    if q_scaled:
        src = src.subs(q=KAPPA * ParamScalar.var("q"))
    other = "q" if var == "p" else "p"
    coeff = src.coefficient_in(other, 0).coefficient_in(var, power)
    name = ("ht" if tilde else "h") + f"_{j}"
    prov = f"{name}[{var}^{power}, {other}=0{', q->kappa q' if q_scaled else ''}]"
    return _laurent_to_upoly(coeff, prov)


# --------------------------------------------------------------------------- palindromes
def _reverse_sign(P: UPoly) -> Optional[int]:
    c = P.coefficients
    if not c:
        return None
    if all(c[k] == c[-1 - k] for k in range(len(c))):
        return 1
    if all(c[k] == -c[-1 - k] for k in range(len(c))):
        return -1
    return None


def divide_one_minus_u_once(P: UPoly) -> Tuple[int, UPoly]:
    """(1, P / (1 - u)) when 1 - u divides P exactly, else (0, P)."""
    c = list(P.coefficients)
    if len(c) < 2 or sum(c) != 0:
        return 0, P
    q = [mpq(0)] * (len(c) - 1)
    acc = mpq(0)
    for i in range(len(c) - 1, 0, -1):
        acc = acc + c[i]
        q[i - 1] = acc
    return 1, UPoly(tuple(-v for v in q), P.provenance)


def _divide_k(P: UPoly, k: int) -> Tuple[int, UPoly]:
    """Divide by (1 - u)^k; returns how many factors actually divided."""
    done = 0
    for _ in range(k):
        ok, P2 = divide_one_minus_u_once(P)
        if not ok:
            break
        P, done = P2, done + 1
    return done, P


def divide_one_minus_u(P: UPoly) -> Tuple[int, UPoly]:
    """Largest k with (1 - u)^k | P, and the quotient."""
    return _divide_k(P, max(P.degree, 0))


def classify_palindrome(P: UPoly) -> str:
    """'palindromic', 'anti-palindromic', '(1-u)^k*palindromic', '(1-u)^k*anti-palindromic' or 'none'."""
    if P.is_zero():
        raise ValueError("zero polynomial")
    s = _reverse_sign(P)
    if s is not None:
        return "palindromic" if s > 0 else "anti-palindromic"
    for k in (1, 2):
        done, quot = _divide_k(P, k)
        if done < k:
            break
        s = _reverse_sign(quot)
        if s is not None:
            return f"(1-u)^{k}*" + ("palindromic" if s > 0 else "anti-palindromic")
    return "none"


def structure_shape_ok(P: UPoly, j: int) -> bool:
    """p_j(u) = (1-u)^2 B(u) for even j, (1-u) B(u) for odd j, B palindromic with B(0) = 1."""
    need = 2 if j % 2 == 0 else 1
    k, B = _divide_k(P, need)
    if k != need:
        return False
    c = B.coefficients
    want_deg = j - 2 if j % 2 == 0 else j - 1
    return len(c) - 1 == want_deg and c[0] == 1 and _reverse_sign(B) == 1


# --------------------------------------------------------------------------- zeros
@dataclass
class ZeroReport:
    poly: UPoly
    roots: list
    on_unit_circle: List[bool]
    modulus_deviation: list
    residuals: list
    arguments: list = field(default_factory=list)

    @property
    def all_on_circle(self) -> bool:
        return all(self.on_unit_circle)

    def to_json(self, digits: int = 30) -> dict:
        return {
            "poly": [str(c) for c in self.poly.coefficients],
            "provenance": self.poly.provenance,
            "roots": [{"re": mp.nstr(mp.re(r), digits), "im": mp.nstr(mp.im(r), digits)} for r in self.roots],
            "modulus_deviation": [mp.nstr(d, 5) for d in self.modulus_deviation],
            "on_unit_circle": self.on_unit_circle,
            "arguments": [mp.nstr(a, digits) for a in self.arguments],
        }


def zeros_on_unit_circle(P: UPoly, tol=DEFAULT_TOL, digits: int = 40) -> ZeroReport:
    """All roots of P to high precision with a per-root ||root| - 1| < tol flag."""
    if P.degree < 1:
        raise ValueError("degree must be at least 1")
    with mp.workdps(digits + 10):
        coeffs = [mp.mpf(int(c.numerator)) / int(c.denominator) for c in reversed(P.coefficients)]
        try:
            roots = mp.polyroots(coeffs, maxsteps=200, extraprec=4 * digits)
        except mp.libmp.libhyper.NoConvergence as exc:  # pragma: no cover - reported upward
            raise RootFindingError(str(exc)) from exc
        # Newton polish at the working precision
        dcoeffs = [c * (len(coeffs) - 1 - i) for i, c in enumerate(coeffs[:-1])]
        polished = []
        for r in roots:
            r = mp.mpc(r)
            for _ in range(5):
                d = mp.polyval(dcoeffs, r)
                if d == 0:
                    break
                r = r - mp.polyval(coeffs, r) / d
            polished.append(r)
        scale = max(abs(c) for c in coeffs)
        residuals = [abs(mp.polyval(coeffs, r)) / scale for r in polished]
        if any(res > mp.mpf(10) ** (-digits + 5) for res in residuals):
            raise RootFindingError(f"root residuals too large: {[mp.nstr(r, 3) for r in residuals]}")
        dev = [abs(abs(r) - 1) for r in polished]
        args = sorted(mp.arg(r) for r in polished)
        # arg() lies in (-pi, pi]
        return ZeroReport(P, polished, [d < tol for d in dev], dev, residuals, args)


def _upper_arguments(r: ZeroReport, tie_digits: int = 25) -> list:
    """Arguments in (0, pi) after dropping the zeros at u = 1 and u = -1.

    Those two are forced by (anti-)palindromy; the rest come in conjugate
    pairs, so the upper half carries all the information.
    """
    eps = mp.mpf(10) ** -tie_digits
    return [t for t in r.arguments if eps < t < mp.pi - eps]


def check_interlacing(reports: Sequence[ZeroReport], mode: str = "half-circle") -> List[bool]:
    """Adjacent-pair interlacing of zero arguments on the unit circle.

    ``half-circle`` (default) compares the arguments in (0, pi) with the forced
    zeros at u = +-1 removed, i.e. real-root interlacing in 2 cos(theta).
    ``full-circle`` merges all arguments in (-pi, pi] cyclically. Equal
    arguments count as a failure in both modes.
    """
    if mode not in ("half-circle", "full-circle"):
        raise ValueError("mode must be 'half-circle' or 'full-circle'")
    out = []
    for a, b in zip(reports, reports[1:]):
        if not (a.all_on_circle and b.all_on_circle):
            raise InterlacingUndefined("roots off the unit circle")
        if mode == "half-circle":
            out.append(_interlace_line(_upper_arguments(a), _upper_arguments(b)))
        else:
            out.append(_interlace_cyclic(list(a.arguments), list(b.arguments)))
    return out


def _has_tie(A: list, B: list, digits: int = 25) -> bool:
    eps = mp.mpf(10) ** -digits
    return any(abs(x - y) < eps for x in A for y in B)


def _interlace_line(A: list, B: list) -> bool:
    if len(A) < len(B):
        A, B = B, A
    if len(A) - len(B) > 1 or _has_tie(A, B):
        return False
    labels = [l for _, l in sorted([(x, 0) for x in A] + [(x, 1) for x in B])]
    if any(labels[i] == labels[i + 1] for i in range(len(labels) - 1)):
        return False
    # with equal sizes either set may lead; with sizes n+1, n the larger must bracket the smaller
    return len(A) == len(B) or (labels[0] == 0 and labels[-1] == 0) or not B


def _interlace_cyclic(A: list, B: list) -> bool:
    if len(A) < len(B):
        A, B = B, A
    if len(A) - len(B) > 1 or _has_tie(A, B):
        return False
    if not B:
        return True
    labels = [l for _, l in sorted([(x, 0) for x in A] + [(x, 1) for x in B])]
    n = len(labels)
    same = sum(1 for i in range(n) if labels[i] == labels[(i + 1) % n])
    return same == len(A) - len(B)


def zero_reports_json(reports: Sequence[ZeroReport], interlacing: Sequence[bool] = ()) -> str:
    return json.dumps({"reports": [r.to_json() for r in reports], "interlacing": list(interlacing)}, indent=2)
