"""Exact arithmetic over Q(i)[p, q][kappa, 1/kappa] and x-rational functions."""

from .gaussian import GaussianRational
from .params import I, KAPPA, P, Q, ParamPoly, ParamScalar
from .serialize import poly_from_json, poly_to_json
from .series import (
    NotDecayingError,
    PolynomialFitError,
    evaluate_k_polynomial,
    fit_polynomial_in_k,
    inverse_x_coefficient,
)
from .xrational import (
    MultiXRationalFn,
    PoleStructureError,
    XRationalFn,
    exact_divide_difference,
)

__all__ = [
    "GaussianRational",
    "ParamPoly",
    "ParamScalar",
    "KAPPA",
    "P",
    "Q",
    "I",
    "XRationalFn",
    "MultiXRationalFn",
    "PoleStructureError",
    "exact_divide_difference",
    "inverse_x_coefficient",
    "fit_polynomial_in_k",
    "evaluate_k_polynomial",
    "NotDecayingError",
    "PolynomialFitError",
    "poly_to_json",
    "poly_from_json",
]
