"""Rational functions of resolvent variables with poles only at x = 0 and x = 1.

A ``MultiXRationalFn`` in variables x_1..x_n is stored as

    numerator(x_1..x_n) / prod_j x_j**a_j (1 - x_j)**b_j

with a sparse numerator over ``ParamScalar``. The canonical form has every
pole order as small as possible; divisibility by x_j and (1 - x_j) is
decided exactly (vanishing low exponent, vanishing value at x_j = 1).
``XRationalFn`` is the dense univariate special case.
"""

from __future__ import annotations

from itertools import permutations
from math import comb
from typing import Dict, List, Sequence, Tuple

from .params import ParamScalar

XExp = Tuple[int, ...]
_PZERO = ParamScalar.zero()


class PoleStructureError(ArithmeticError):
    """Raised when an exact division demanded by the hierarchy leaves a remainder."""


def _padd(d: Dict[XExp, ParamScalar], e: XExp, c: ParamScalar) -> None:
    s = d.get(e)
    d[e] = c if s is None else s + c


def _clean(d: Dict[XExp, ParamScalar]) -> Dict[XExp, ParamScalar]:
    return {e: c for e, c in d.items() if c}


class MultiXRationalFn:
    __slots__ = ("nvars", "num", "a", "b")

    def __init__(self, nvars: int, num: Dict[XExp, ParamScalar], a: Sequence[int], b: Sequence[int],
                 canonical: bool = False):
        self.nvars = nvars
        self.num = _clean(num)
        self.a = tuple(a)
        self.b = tuple(b)
        if len(self.a) != nvars or len(self.b) != nvars:
            raise ValueError("pole order tuples must have one entry per variable")
        if any(v < 0 for v in self.a + self.b):
            raise ValueError("pole orders must be non-negative")
        if not canonical:
            self._canonicalize()

    # -- constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MultiXRationalFn":
        return cls(nvars, {}, (0,) * nvars, (0,) * nvars, canonical=True)

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiXRationalFn":
        c = c if isinstance(c, ParamScalar) else ParamScalar.const(c)
        return cls(nvars, {(0,) * nvars: c}, (0,) * nvars, (0,) * nvars)

    @classmethod
    def monomial(cls, nvars: int, exps: XExp, c=1, a=None, b=None) -> "MultiXRationalFn":
        c = c if isinstance(c, ParamScalar) else ParamScalar.const(c)
        return cls(nvars, {tuple(exps): c}, a or (0,) * nvars, b or (0,) * nvars)

    def copy_with(self, num, a, b, canonical=False) -> "MultiXRationalFn":
        return MultiXRationalFn(self.nvars, num, a, b, canonical=canonical)

    # -- canonical form ---------------------------------------------------------
    def _canonicalize(self) -> None:
        if not self.num:
            self.a = (0,) * self.nvars
            self.b = (0,) * self.nvars
            return
        a, b = list(self.a), list(self.b)
        num = self.num
        for j in range(self.nvars):
            if a[j]:
                low = min(e[j] for e in num)
                s = min(low, a[j])
                if s:
                    num = {e[:j] + (e[j] - s,) + e[j + 1:]: c for e, c in num.items()}
                    a[j] -= s
            while b[j] and _vanishes_at_one(num, j):
                num = _divide_one_minus_x(num, j)
                b[j] -= 1
        self.num, self.a, self.b = num, tuple(a), tuple(b)

    def canonical(self) -> "MultiXRationalFn":
        return MultiXRationalFn(self.nvars, dict(self.num), self.a, self.b)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def key(self):
        return (self.nvars, frozenset(self.num.items()), self.a, self.b)

    def __eq__(self, other):
        if not isinstance(other, MultiXRationalFn):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    # -- pole management --------------------------------------------------------
    def raised_to(self, a: Sequence[int], b: Sequence[int]) -> Dict[XExp, ParamScalar]:
        """Numerator over the larger denominator with pole orders ``a``, ``b``."""
        num = self.num
        for j in range(self.nvars):
            da, db = a[j] - self.a[j], b[j] - self.b[j]
            if da < 0 or db < 0:
                raise ValueError("cannot lower pole orders by raising")
            if da:
                num = {e[:j] + (e[j] + da,) + e[j + 1:]: c for e, c in num.items()}
            if db:
                num = _times_one_minus_x_power(num, j, db)
        return num

    # -- arithmetic -------------------------------------------------------------
    def _check(self, other: "MultiXRationalFn"):
        if other.nvars != self.nvars:
            raise ValueError(f"arity mismatch {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if not isinstance(other, MultiXRationalFn):
            return NotImplemented
        self._check(other)
        if not other.num:
            return self
        if not self.num:
            return other
        a = tuple(max(x, y) for x, y in zip(self.a, other.a))
        b = tuple(max(x, y) for x, y in zip(self.b, other.b))
        n1 = self.raised_to(a, b)
        n2 = other.raised_to(a, b)
        out = dict(n1)
        for e, c in n2.items():
            _padd(out, e, c)
        return MultiXRationalFn(self.nvars, out, a, b)

    def __neg__(self):
        return self.copy_with({e: -c for e, c in self.num.items()}, self.a, self.b, canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MultiXRationalFn):
            self._check(other)
            if not self.num or not other.num:
                return MultiXRationalFn.zero(self.nvars)
            out: Dict[XExp, ParamScalar] = {}
            for e1, c1 in self.num.items():
                for e2, c2 in other.num.items():
                    _padd(out, tuple(x + y for x, y in zip(e1, e2)), c1 * c2)
            a = tuple(x + y for x, y in zip(self.a, other.a))
            b = tuple(x + y for x, y in zip(self.b, other.b))
            return MultiXRationalFn(self.nvars, out, a, b)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "MultiXRationalFn":
        c = c if isinstance(c, ParamScalar) else ParamScalar.const(c)
        if not c:
            return MultiXRationalFn.zero(self.nvars)
        return self.copy_with({e: v * c for e, v in self.num.items()}, self.a, self.b, canonical=True)

    def times_x_power(self, j: int, m: int) -> "MultiXRationalFn":
        """Multiply by x_j**m (m may be negative)."""
        a = list(self.a)
        if m >= 0:
            num = {e[:j] + (e[j] + m,) + e[j + 1:]: c for e, c in self.num.items()}
        else:
            num = dict(self.num)
            a[j] += -m
        return MultiXRationalFn(self.nvars, num, a, self.b)

    def over_one_minus_x(self, j: int, m: int = 1) -> "MultiXRationalFn":
        b = list(self.b)
        b[j] += m
        return MultiXRationalFn(self.nvars, dict(self.num), self.a, b)

    def diff(self, j: int) -> "MultiXRationalFn":
        """Partial derivative in x_j.

        d/dx [N / (x^a (1-x)^b)] = [N' x (1-x) - a N (1-x) + b N x] / (x^(a+1) (1-x)^(b+1)).
        """
        if not self.num:
            return self
        aj, bj = self.a[j], self.b[j]
        out: Dict[XExp, ParamScalar] = {}
        for e, c in self.num.items():
            k = e[j]
            # N' * x * (1 - x): k c x^k - k c x^(k+1)
            if k:
                _padd(out, e, c.scale(k))
                _padd(out, e[:j] + (k + 1,) + e[j + 1:], c.scale(-k))
            if aj:
                _padd(out, e, c.scale(-aj))
                _padd(out, e[:j] + (k + 1,) + e[j + 1:], c.scale(aj))
            if bj:
                _padd(out, e[:j] + (k + 1,) + e[j + 1:], c.scale(bj))
        a = list(self.a)
        b = list(self.b)
        a[j] += 1
        b[j] += 1
        return MultiXRationalFn(self.nvars, out, a, b)

    def x_diff(self, j: int) -> "MultiXRationalFn":
        """x_j * d/dx_j."""
        return self.diff(j).times_x_power(j, 1)

    # -- variable manipulation --------------------------------------------------
    def embed(self, nvars: int, mapping: Sequence[int]) -> "MultiXRationalFn":
        """Re-home variable i of ``self`` as variable ``mapping[i]`` among ``nvars``."""
        if len(mapping) != self.nvars or len(set(mapping)) != len(mapping):
            raise ValueError("mapping must be injective with one target per variable")
        a = [0] * nvars
        b = [0] * nvars
        for i, t in enumerate(mapping):
            a[t], b[t] = self.a[i], self.b[i]
        num = {}
        for e, c in self.num.items():
            ne = [0] * nvars
            for i, t in enumerate(mapping):
                ne[t] = e[i]
            num[tuple(ne)] = c
        return MultiXRationalFn(nvars, num, a, b, canonical=True)

    def merge(self, keep: int, drop: int) -> "MultiXRationalFn":
        """Set x_drop = x_keep and remove x_drop from the variable list."""
        if keep == drop:
            raise ValueError("keep and drop must differ")
        a = list(self.a)
        b = list(self.b)
        a[keep] += a[drop]
        b[keep] += b[drop]
        del a[drop], b[drop]
        num: Dict[XExp, ParamScalar] = {}
        for e, c in self.num.items():
            ne = list(e)
            ne[keep] += ne[drop]
            del ne[drop]
            _padd(num, tuple(ne), c)
        return MultiXRationalFn(self.nvars - 1, num, a, b)

    def permuted(self, perm: Sequence[int]) -> "MultiXRationalFn":
        return self.embed(self.nvars, perm)

    def is_symmetric(self) -> bool:
        if self.nvars < 2:
            return True
        for i in range(self.nvars - 1):
            perm = list(range(self.nvars))
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            if self.permuted(perm) != self:
                return False
        return True

    def difference_quotient(self, first: int, slot: int) -> "MultiXRationalFn":
        """[f with x_slot -> x_first  -  f] / (x_first - x_slot), as a function of all variables.

        ``self`` must not depend on x_first. The division is exact; a nonzero
        remainder raises ``PoleStructureError``.
        """
        if self.a[first] or self.b[first] or any(e[first] for e in self.num):
            raise ValueError("difference_quotient expects no dependence on the target variable")
        n = self.nvars
        moved = self.permuted([first if i == slot else (slot if i == first else i) for i in range(n)])
        a = tuple(max(x, y) for x, y in zip(self.a, moved.a))
        b = tuple(max(x, y) for x, y in zip(self.b, moved.b))
        diff = dict(moved.raised_to(a, b))
        for e, c in self.raised_to(a, b).items():
            _padd(diff, e, -c)
        quot = exact_divide_difference(_clean(diff), first, slot)
        return MultiXRationalFn(n, quot, a, b)

    # -- evaluation / conversion -----------------------------------------------
    def map_coefficients(self, fn) -> "MultiXRationalFn":
        return MultiXRationalFn(self.nvars, {e: fn(c) for e, c in self.num.items()}, self.a, self.b)

    def to_univariate(self) -> "XRationalFn":
        if self.nvars != 1:
            raise ValueError("only single-variable functions convert to XRationalFn")
        deg = max((e[0] for e in self.num), default=-1)
        coeffs = [_PZERO] * (deg + 1)
        for (k,), c in self.num.items():
            coeffs[k] = c
        return XRationalFn(coeffs, self.a[0], self.b[0])

    def __repr__(self):
        return f"MultiXRationalFn(nvars={self.nvars}, terms={len(self.num)}, a={self.a}, b={self.b})"


def _vanishes_at_one(num: Dict[XExp, ParamScalar], j: int) -> bool:
    groups: Dict[XExp, ParamScalar] = {}
    for e, c in num.items():
        _padd(groups, e[:j] + e[j + 1:], c)
    return all(not c for c in groups.values())


def _divide_one_minus_x(num: Dict[XExp, ParamScalar], j: int) -> Dict[XExp, ParamScalar]:
    """Exact division of the numerator by (1 - x_j)."""
    groups: Dict[XExp, Dict[int, ParamScalar]] = {}
    for e, c in num.items():
        groups.setdefault(e[:j] + e[j + 1:], {})[e[j]] = c
    out: Dict[XExp, ParamScalar] = {}
    for rest, poly in groups.items():
        deg = max(poly)
        # c(x) = (x - 1) r(x); synthetic division, then negate for (1 - x)
        carry = _PZERO
        quot = {}
        for k in range(deg, 0, -1):
            carry = carry + poly.get(k, _PZERO)
            quot[k - 1] = carry
        if carry + poly.get(0, _PZERO):
            raise PoleStructureError("numerator does not vanish at x = 1")
        for k, c in quot.items():
            if c:
                out[rest[:j] + (k,) + rest[j:]] = -c
    return out


def _times_one_minus_x_power(num: Dict[XExp, ParamScalar], j: int, m: int) -> Dict[XExp, ParamScalar]:
    out: Dict[XExp, ParamScalar] = {}
    binom = [comb(m, s) * (-1) ** s for s in range(m + 1)]
    for e, c in num.items():
        for s, w in enumerate(binom):
            _padd(out, e[:j] + (e[j] + s,) + e[j + 1:], c.scale(w))
    return _clean(out)


def exact_divide_difference(f: Dict[XExp, ParamScalar], j: int, k: int) -> Dict[XExp, ParamScalar]:
    """Exact quotient f / (x_j - x_k) for a sparse polynomial vanishing on x_j = x_k."""
    if j == k:
        raise ValueError("indices must differ")
    groups: Dict[XExp, Dict[int, ParamScalar]] = {}
    for e, c in f.items():
        groups.setdefault(e[:j] + e[j + 1:], {})[e[j]] = c
    # treat f as a polynomial in x_j with coefficients in the other variables,
    # then run synthetic division by (x_j - x_k) with x_k-shifts of the carry
    kk = k if k < j else k - 1
    byj: Dict[int, Dict[XExp, ParamScalar]] = {}
    for rest, poly in groups.items():
        for dj, c in poly.items():
            byj.setdefault(dj, {})[rest] = c
    if not byj:
        return {}
    deg = max(byj)
    out: Dict[XExp, ParamScalar] = {}
    carry: Dict[XExp, ParamScalar] = {}
    for dj in range(deg, 0, -1):
        cur = dict(byj.get(dj, {}))
        for rest, c in carry.items():
            _padd(cur, rest, c)
        cur = _clean(cur)
        for rest, c in cur.items():
            out[rest[:j] + (dj - 1,) + rest[j:]] = c
        carry = {rest[:kk] + (rest[kk] + 1,) + rest[kk + 1:]: c for rest, c in cur.items()}
    rem = dict(byj.get(0, {}))
    for rest, c in carry.items():
        _padd(rem, rest, c)
    if _clean(rem):
        raise PoleStructureError(f"polynomial is not divisible by (x_{j + 1} - x_{k + 1})")
    return out


class XRationalFn:
    """Univariate N(x) / (x**a (1-x)**b) with a dense numerator over ParamScalar."""

    __slots__ = ("numerator", "a", "b")

    def __init__(self, numerator: Sequence[ParamScalar], a: int = 0, b: int = 0):
        coeffs = [c if isinstance(c, ParamScalar) else ParamScalar.const(c) for c in numerator]
        m = MultiXRationalFn(1, {(k,): c for k, c in enumerate(coeffs)}, (a,), (b,))
        deg = max((e[0] for e in m.num), default=-1)
        self.numerator: List[ParamScalar] = [m.num.get((k,), _PZERO) for k in range(deg + 1)]
        self.a = m.a[0]
        self.b = m.b[0]

    def to_multi(self) -> MultiXRationalFn:
        return MultiXRationalFn(1, {(k,): c for k, c in enumerate(self.numerator) if c},
                                (self.a,), (self.b,), canonical=True)

    def canonical(self) -> "XRationalFn":
        return XRationalFn(self.numerator, self.a, self.b)

    def __eq__(self, other):
        if not isinstance(other, XRationalFn):
            return NotImplemented
        return (self.a, self.b, self.numerator) == (other.a, other.b, other.numerator)

    def __hash__(self):
        return hash((self.a, self.b, tuple(self.numerator)))

    def __add__(self, other):
        return (self.to_multi() + other.to_multi()).to_univariate()

    def __sub__(self, other):
        return (self.to_multi() - other.to_multi()).to_univariate()

    def __mul__(self, other):
        if isinstance(other, XRationalFn):
            return (self.to_multi() * other.to_multi()).to_univariate()
        return self.to_multi().scale(other).to_univariate()

    __rmul__ = __mul__

    def __neg__(self):
        return XRationalFn([-c for c in self.numerator], self.a, self.b)

    def is_zero(self) -> bool:
        return not self.numerator

    def degree(self) -> int:
        return len(self.numerator) - 1

    def __repr__(self):
        num = " + ".join(f"({c})*x^{k}" for k, c in enumerate(self.numerator) if c) or "0"
        return f"XRationalFn([{num}] / (x^{self.a} (1-x)^{self.b}))"
