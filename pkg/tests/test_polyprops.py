"""Palindromic classification, unit-circle zeros and interlacing of u-polynomials."""

import mpmath as mp
import pytest
from gmpy2 import mpq

from circjacobi import polyprops as pp
from circjacobi.loop_engine import structure_function_series

U = pp.UPoly.from_list

# h_5|q=0, coefficients of p^1..p^5 up to proportionality, ascending in u
LADDER = [
    U([-1, 1]) * U([30, -91, 124, -91, 30]),
    U([32, -75, 90, -75, 32]),
    U([-1, 1]) * U([11, -20, 11]),
    U([5, -9, 5]),
    U([-1, 1]),
]


def _same(a, b):
    return a.normalized().coefficients == b.normalized().coefficients


def test_upoly_trims_and_normalizes():
    P = U([0, 0, 2, 4, 0])
    assert P.coefficients == (mpq(2), mpq(4))
    assert P.normalized().coefficients == (mpq(1, 2), mpq(1))
    assert U([]).is_zero()
    assert (U([1, -1]) * U([1, 1])).coefficients == (1, 0, -1)


def test_extract_examples(table5):
    p4 = pp.extract_upoly(table5, 5, "p", 4)
    assert _same(p4, U([5, -9, 5]))
    p5 = pp.extract_upoly(table5, 5, "p", 5)
    assert _same(p5, U([-1, 1]))
    h1 = pp.extract_upoly(table5, 1, "p", 1)
    assert _same(h1, U([-1, 1]))
    assert pp.extract_upoly(table5, 1, "p", 7).is_zero()
    assert "h_5[p^4" in p4.provenance
    with pytest.raises(ValueError):
        pp.extract_upoly(table5, 1, "x", 1)


def test_ladder_matches_table(table5):
    for m, want in enumerate(LADDER, start=1):
        got = pp.extract_upoly(table5, 5, "p", m)
        assert _same(got, want), m


def test_classify_examples():
    assert pp.classify_palindrome(U([5, -9, 5])) == "palindromic"
    assert pp.classify_palindrome(U([-1, 1])) == "anti-palindromic"
    assert pp.classify_palindrome(U([1])) == "palindromic"
    assert pp.classify_palindrome(U([-1, 1]) * U([11, -20, 11])) == "anti-palindromic"
    assert pp.classify_palindrome(U([1, -1]) * U([1, -1]) * U([1, 3, 1]) * U([1, 2])) == "none"
    assert pp.classify_palindrome(U([1, 2, 5])) == "none"
    with pytest.raises(ValueError):
        pp.classify_palindrome(U([]))


def test_classify_factored_shapes():
    # (1-u)^2 (1 + 3u + u^2) is itself palindromic, so build one that is not
    f = U([1, -1]) * U([1, -1]) * U([2, 1, 2])
    assert pp.classify_palindrome(f) == "palindromic"
    g = U([1, -1]) * U([1, 4, 1]) * U([1, 0, 0])
    assert pp.classify_palindrome(g).endswith("palindromic")


@pytest.mark.parametrize("scale", [mpq(3), mpq(-2, 7)])
def test_classification_scale_invariant(scale):
    for P in LADDER:
        assert pp.classify_palindrome(U([scale * v for v in P.coefficients])) == pp.classify_palindrome(P)


def test_divide_one_minus_u():
    k, quo = pp.divide_one_minus_u(U([1, -1]) * U([1, -1]) * U([3, 1]))
    assert k == 2 and quo == U([3, 1])
    assert pp.divide_one_minus_u(U([1, 1]))[0] == 0


def test_zero_examples():
    r = pp.zeros_on_unit_circle(U([-1, 1]))
    assert r.all_on_circle and abs(r.roots[0] - 1) < mp.mpf(10) ** -30
    r = pp.zeros_on_unit_circle(U([5, -9, 5]))
    assert r.all_on_circle
    with mp.workdps(40):
        want = sorted([mp.mpc(9, mp.sqrt(19)) / 10, mp.mpc(9, -mp.sqrt(19)) / 10], key=lambda z: mp.im(z))
        got = sorted(r.roots, key=lambda z: mp.im(z))
        assert all(abs(a - b) < mp.mpf(10) ** -30 for a, b in zip(got, want))
    assert pp.zeros_on_unit_circle(LADDER[1]).all_on_circle
    assert not pp.zeros_on_unit_circle(U([1, 3, 1])).all_on_circle
    with pytest.raises(ValueError):
        pp.zeros_on_unit_circle(U([4]))


def test_zero_report_json():
    d = pp.zeros_on_unit_circle(U([5, -9, 5])).to_json()
    assert d["poly"] == ["5", "-9", "5"]
    assert len(d["roots"]) == 2 and all(d["on_unit_circle"])


@pytest.mark.parametrize("j", range(1, 6))
def test_all_ladders_classify_and_sit_on_circle(table5, j):
    for var in ("p", "q"):
        for tilde in (False, True):
            for m in range(1, j + 2):
                P = pp.extract_upoly(table5, j, var, m, tilde=tilde, q_scaled=var == "q")
                if P.is_zero():
                    continue
                assert pp.classify_palindrome(P) != "none", (j, var, tilde, m)
                if P.degree >= 1:
                    r = pp.zeros_on_unit_circle(P)
                    assert all(d < mp.mpf(10) ** -20 for d in r.modulus_deviation), (j, var, tilde, m)


def test_ladder_interlaces():
    reports = [pp.zeros_on_unit_circle(P) for P in LADDER]
    assert pp.check_interlacing(reports) == [True] * 4
    # the cyclic reading of the whole circle disagrees on two pairs
    assert pp.check_interlacing(reports, mode="full-circle") == [False, True, False, True]


def test_interlacing_edge_cases():
    lin = pp.zeros_on_unit_circle(U([-1, 1]))
    const = pp.ZeroReport(U([1]), [], [], [], [], [])
    assert pp.check_interlacing([lin, const]) == [True]
    off = pp.zeros_on_unit_circle(U([1, 3, 1]))
    with pytest.raises(pp.InterlacingUndefined):
        pp.check_interlacing([lin, off])
    same = pp.zeros_on_unit_circle(U([5, -9, 5]))
    assert pp.check_interlacing([same, same]) == [False]  # ties are failures
    with pytest.raises(ValueError):
        pp.check_interlacing([same, same], mode="other")


def test_structure_function_shapes_and_interlacing(table6):
    ps = structure_function_series(table6, 5)
    for j in range(1, 6):
        assert pp.structure_shape_ok(U(ps[j]), j), j
    assert not pp.structure_shape_ok(U([1, -1]), 2)
    reports = [pp.zeros_on_unit_circle(U(ps[j])) for j in range(1, 6)]
    assert all(r.all_on_circle for r in reports)
    assert all(pp.check_interlacing(reports))
