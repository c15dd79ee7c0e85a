"""Sparse polynomials over Q(i) in the ensemble parameters.

``ParamPoly`` lives in Q(i)[p, q]. ``ParamScalar`` lives in
Q(i)[p, q][kappa, 1/kappa] and is the coefficient ring of every symbolic
result in the package. Both are immutable; arithmetic returns new objects.
"""

from __future__ import annotations

from typing import Callable, Dict, Iterable, Mapping, Tuple

from gmpy2 import mpq

from .gaussian import GaussianRational, as_mpq

Exponents = Tuple[int, ...]

_ZERO = GaussianRational.ZERO


def _coerce_coeff(c) -> GaussianRational:
    return GaussianRational.coerce(c)


class _SparsePoly:
    """Shared machinery: a dict from exponent tuples to nonzero coefficients."""

    __slots__ = ("_terms", "_hash")
    NVARS = 0
    VARNAMES: Tuple[str, ...] = ()
    ALLOW_NEGATIVE: Tuple[bool, ...] = ()

    def __init__(self, terms: Mapping[Exponents, object] | None = None):
        clean: Dict[Exponents, GaussianRational] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(v) for v in e)
                if len(e) != self.NVARS:
                    raise ValueError(f"exponent {e} has wrong arity for {type(self).__name__}")
                for v, neg_ok in zip(e, self.ALLOW_NEGATIVE):
                    if v < 0 and not neg_ok:
                        raise ValueError(f"negative exponent {e} not allowed in {type(self).__name__}")
                c = _coerce_coeff(c)
                if c:
                    clean[e] = clean.get(e, _ZERO) + c
                    if not clean[e]:
                        del clean[e]
        self._terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: Dict[Exponents, GaussianRational]):
        obj = object.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------------
    @classmethod
    def zero(cls):
        return cls._from_clean({})

    @classmethod
    def const(cls, c):
        c = _coerce_coeff(c)
        return cls._from_clean({(0,) * cls.NVARS: c} if c else {})

    @classmethod
    def one(cls):
        return cls.const(1)

    @classmethod
    def var(cls, name: str, power: int = 1):
        idx = cls.VARNAMES.index(name)
        e = [0] * cls.NVARS
        e[idx] = power
        return cls._from_clean({tuple(e): GaussianRational.ONE})

    @classmethod
    def monomial(cls, exps: Exponents, coeff=1):
        return cls({tuple(exps): coeff})

    # -- inspection -------------------------------------------------------------
    @property
    def terms(self) -> Dict[Exponents, GaussianRational]:
        return dict(self._terms)

    def items(self) -> Iterable[Tuple[Exponents, GaussianRational]]:
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, exps: Exponents) -> GaussianRational:
        return self._terms.get(tuple(exps), _ZERO)

    def constant_value(self) -> GaussianRational:
        """Value of a constant polynomial; raises if any variable appears."""
        for e in self._terms:
            if any(e):
                raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * self.NVARS, _ZERO)

    def is_real(self) -> bool:
        return all(not c.im for c in self._terms.values())

    def is_imaginary(self) -> bool:
        return all(not c.re for c in self._terms.values())

    def degree(self, name: str) -> int:
        idx = self.VARNAMES.index(name)
        if not self._terms:
            return -1
        return max(e[idx] for e in self._terms)

    def min_degree(self, name: str) -> int:
        idx = self.VARNAMES.index(name)
        if not self._terms:
            return 0
        return min(e[idx] for e in self._terms)

    # -- ring operations --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, _SparsePoly):
            return NotImplemented
        try:
            return type(self).const(other)
        except TypeError:
            return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self):
        return type(self)._from_clean({e: -c for e, c in self._terms.items()})

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o._terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return type(self)._from_clean(out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self._terms or not o._terms:
            return type(self).zero()
        if len(o._terms) == 1:
            (e2, c2), = o._terms.items()
            if not any(e2):
                return self.scale(c2)
        out: Dict[Exponents, GaussianRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return type(self)._from_clean({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> "_SparsePoly":
        c = _coerce_coeff(c)
        if not c:
            return type(self).zero()
        return type(self)._from_clean({e: v * c for e, v in self._terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = type(self).one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        """Division by a nonzero constant (or, for ParamScalar, a monomial)."""
        if isinstance(other, _SparsePoly):
            return self.divide_by_monomial(other)
        c = _coerce_coeff(other)
        return self.scale(c.inverse())

    def divide_by_monomial(self, m: "_SparsePoly"):
        if len(m._terms) != 1:
            raise ArithmeticError(f"division by non-monomial {m} is not supported")
        (e2, c2), = m._terms.items()
        inv = c2.inverse()
        out = {}
        for e, c in self._terms.items():
            ne = tuple(a - b for a, b in zip(e, e2))
            for v, neg_ok in zip(ne, self.ALLOW_NEGATIVE):
                if v < 0 and not neg_ok:
                    raise ArithmeticError(f"{self} is not divisible by {m}")
            out[ne] = c * inv
        return type(self)._from_clean(out)

    # -- maps -------------------------------------------------------------------
    def map_coefficients(self, fn: Callable[[GaussianRational], GaussianRational]):
        return type(self)({e: fn(c) for e, c in self._terms.items()})

    def conjugate(self):
        """Complex conjugate with every variable treated as a real symbol."""
        return type(self)._from_clean({e: c.conjugate() for e, c in self._terms.items()})

    def real_part(self):
        return type(self)._from_clean(
            {e: GaussianRational._raw(c.re, mpq(0)) for e, c in self._terms.items() if c.re})

    def imag_part(self):
        """Imaginary part as a real-coefficient polynomial (so f = re + i*im)."""
        return type(self)._from_clean(
            {e: GaussianRational._raw(c.im, mpq(0)) for e, c in self._terms.items() if c.im})

    def monomial_map(self, fn: Callable[[Exponents], Tuple[Exponents, object]]):
        """Apply ``e -> (e', factor)`` termwise; used for scalings like q -> kappa*q."""
        out: Dict[Exponents, GaussianRational] = {}
        for e, c in self._terms.items():
            ne, f = fn(e)
            v = c * f
            out[ne] = out.get(ne, _ZERO) + v
        return type(self)._from_clean({e: c for e, c in out.items() if c})

    def coefficient_in(self, name: str, power: int):
        """Coefficient of ``name**power`` as a polynomial of the same type."""
        idx = self.VARNAMES.index(name)
        out = {}
        for e, c in self._terms.items():
            if e[idx] == power:
                ne = list(e)
                ne[idx] = 0
                out[tuple(ne)] = c
        return type(self)._from_clean(out)

    def _substitute(self, values: Mapping[str, object], target):
        """Generic substitution of variables by elements of ``target``'s ring.

        ``values`` maps variable names to ring elements (or exact numbers);
        unmapped variables are carried into ``target`` by name.
        """
        powers: Dict[Tuple[int, int], object] = {}
        images = []
        for name in self.VARNAMES:
            if name in values:
                images.append(values[name])
            else:
                images.append(target.var(name))

        def power(idx: int, k: int):
            key = (idx, k)
            if key not in powers:
                img = images[idx]
                if k < 0:
                    if isinstance(img, _SparsePoly):
                        val = target.one().divide_by_monomial(img) if k == -1 else power(idx, -1) ** (-k)
                    else:
                        val = GaussianRational.coerce(img) ** k
                else:
                    val = img ** k if k != 1 else img
                powers[key] = val
            return powers[key]

        acc = target.zero()
        for e, c in self._terms.items():
            term = target.const(c)
            for idx, k in enumerate(e):
                if k:
                    term = term * power(idx, k)
            acc = acc + term
        return acc

    # -- display ----------------------------------------------------------------
    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_items():
            mon = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(self.VARNAMES, e) if k)
            cs = str(c)
            if mon:
                parts.append(mon if cs == "1" else (f"-{mon}" if cs == "-1" else f"{cs}*{mon}"))
            else:
                parts.append(cs)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class ParamPoly(_SparsePoly):
    """Polynomial in p and q with Gaussian-rational coefficients."""

    __slots__ = ()
    NVARS = 2
    VARNAMES = ("p", "q")
    ALLOW_NEGATIVE = (False, False)

    def subs(self, **values) -> "ParamPoly":
        return self._substitute(values, ParamPoly)

    def evaluate(self, p, q) -> GaussianRational:
        p, q = GaussianRational.coerce(p), GaussianRational.coerce(q)
        acc = _ZERO
        for (a, b), c in self._terms.items():
            acc = acc + c * (p ** a) * (q ** b)
        return acc

    def to_scalar(self) -> "ParamScalar":
        return ParamScalar._from_clean({(0, a, b): c for (a, b), c in self._terms.items()})

    def divmod_exact(self, divisor: "ParamPoly") -> "ParamPoly":
        """Exact quotient ``self / divisor``; raises if the remainder is nonzero.

        Uses lexicographic leading terms; for an exact factor this terminates
        with zero remainder.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead_e = max(divisor._terms)
        lead_c = divisor._terms[lead_e]
        rem = self
        quot = ParamPoly.zero()
        while rem:
            e = max(rem._terms)
            if e[0] < lead_e[0] or e[1] < lead_e[1]:
                raise ArithmeticError(f"{self} is not divisible by {divisor}")
            t = ParamPoly._from_clean({(e[0] - lead_e[0], e[1] - lead_e[1]): rem._terms[e] / lead_c})
            quot = quot + t
            rem = rem - t * divisor
        return quot


class ParamScalar(_SparsePoly):
    """Element of Q(i)[p, q][kappa, 1/kappa]; exponent tuples are (kappa, p, q)."""

    __slots__ = ()
    NVARS = 3
    VARNAMES = ("kappa", "p", "q")
    ALLOW_NEGATIVE = (True, False, False)

    @property
    def laurent(self) -> Dict[int, ParamPoly]:
        """View as a map kappa-exponent -> ParamPoly."""
        out: Dict[int, Dict[Tuple[int, int], GaussianRational]] = {}
        for (k, a, b), c in self._terms.items():
            out.setdefault(k, {})[(a, b)] = c
        return {k: ParamPoly._from_clean(v) for k, v in sorted(out.items())}

    @classmethod
    def from_laurent(cls, laurent: Mapping[int, ParamPoly]) -> "ParamScalar":
        terms = {}
        for k, poly in laurent.items():
            for (a, b), c in poly.items():
                terms[(k, a, b)] = c
        return cls(terms)

    def kappa_shift(self, m: int) -> "ParamScalar":
        """Multiply by kappa**m."""
        return ParamScalar._from_clean({(k + m, a, b): c for (k, a, b), c in self._terms.items()})

    def subs(self, **values) -> "ParamScalar":
        """Substitute kappa, p, q by ParamScalars or exact numbers.

        A kappa image must be a monomial (or number) because negative powers of
        kappa occur; anything else would leave the Laurent ring.
        """
        return self._substitute(values, ParamScalar)

    def at_kappa(self, kappa) -> ParamPoly:
        """Specialise kappa to a nonzero rational, returning a polynomial in p, q."""
        kv = as_mpq(kappa)
        if not kv:
            raise ZeroDivisionError("kappa = 0 is outside the Laurent ring")
        g = GaussianRational._raw(kv, mpq(0))
        out: Dict[Tuple[int, int], GaussianRational] = {}
        for (k, a, b), c in self._terms.items():
            out[(a, b)] = out.get((a, b), _ZERO) + c * g ** k
        return ParamPoly._from_clean({e: c for e, c in out.items() if c})

    def evaluate(self, kappa, p, q) -> GaussianRational:
        return self.at_kappa(kappa).evaluate(p, q)

    def at_pq(self, p, q) -> "ParamScalar":
        """Specialise p and q to exact numbers, leaving a Laurent polynomial in kappa."""
        p, q = GaussianRational.coerce(p), GaussianRational.coerce(q)
        out: Dict[Exponents, GaussianRational] = {}
        for (k, a, b), c in self._terms.items():
            v = c * (p ** a) * (q ** b)
            out[(k, 0, 0)] = out.get((k, 0, 0), _ZERO) + v
        return ParamScalar._from_clean({e: c for e, c in out.items() if c})

    def kappa_range(self) -> Tuple[int, int]:
        if not self._terms:
            return (0, 0)
        ks = [e[0] for e in self._terms]
        return min(ks), max(ks)


KAPPA = ParamScalar.var("kappa")
P = ParamScalar.var("p")
Q = ParamScalar.var("q")
I = ParamScalar.const(GaussianRational.I)
