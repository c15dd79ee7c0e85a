"""Canonical JSON for exact objects.

Terms are sorted by exponent tuple, rationals are ``"num/den"`` strings and
the imaginary part is always written out, so equal objects serialize to
identical text.
"""

from __future__ import annotations

from typing import List, Sequence

from .gaussian import GaussianRational
from .params import ParamPoly, ParamScalar, _SparsePoly


def poly_to_json(poly: _SparsePoly) -> dict:
    terms = []
    for e, c in poly.sorted_items():
        entry = {name: k for name, k in zip(poly.VARNAMES, e)}
        entry.update(c.to_json())
        terms.append(entry)
    return {"type": type(poly).__name__, "terms": terms}


def poly_from_json(obj: dict) -> _SparsePoly:
    cls = {"ParamScalar": ParamScalar, "ParamPoly": ParamPoly}[obj["type"]]
    terms = {}
    for t in obj["terms"]:
        e = tuple(int(t.get(name, 0)) for name in cls.VARNAMES)
        terms[e] = GaussianRational(t["re"], t["im"])
    return cls(terms)


def k_polynomial_to_json(coeffs: Sequence[ParamScalar]) -> List[dict]:
    return [poly_to_json(c) for c in coeffs]
