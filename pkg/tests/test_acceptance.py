"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py`` (the lines are collected in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import os
import random
import sys

import mpmath as mp
from gmpy2 import mpq

sys.path.insert(0, os.path.dirname(__file__))

from circjacobi import loop_engine as le  # noqa: E402
from circjacobi import numeric_oracle as no  # noqa: E402
from circjacobi import ode_engine as oe  # noqa: E402
from circjacobi import polyprops as pp  # noqa: E402
from circjacobi.exactalg import GaussianRational, ParamPoly, ParamScalar, XRationalFn  # noqa: E402
from golden import ALPHA_1_VARIANT, ALPHAS, H, H_TILDE, W1_1_NUM, W1_2_NUM  # noqa: E402

RESULTS = {}

DESCRIPTIONS = {
    1: "loop engine: Wbar_1^{0,1,2}, vanishing Wbar_2^{0,1}, Wbar_3^0, alpha_0..alpha_5 (exact)",
    2: "h_0..h_3 and h~_0..h~_3 (exact)",
    3: "duality for j <= 5, h and h~ (exact)",
    4: "linear response in p and q through tau^4 (exact)",
    5: "beta = 2 route: d_n, closed form, alpha ratios, Bessel oracle, map at kappa = 1 (exact)",
    6: "beta = 4 route, beta = 1 relation, g~ seeds (exact)",
    7: "numeric FT: triangle law 1e-8, screening 1e-6, p = 2 series within error bound",
    8: "beta = 2 ODE residual < 1e-20 at 40 digits on [0.5, 10]",
    9: "h_5 ladder palindromy, unit circle 1e-20, interlacing; p_j(u) shapes",
    10: "ring axioms (1000 cases each), q-parity, reality, alpha_j(0, 0) = 0",
}

_TABLE = {}


def _table(J):
    if J not in _TABLE:
        _TABLE[J] = le.compute_table(J)
    return _TABLE[J]


def _record(n, checks):
    ok = all(v for _, v in checks)
    failed = [name for name, v in checks if not v]
    RESULTS[n] = (ok, failed)
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {DESCRIPTIONS[n]}"
    if failed:
        line += f"  [failed: {', '.join(failed)}]"
    print(line)
    return ok, failed


def _all(rows):
    return len(rows) > 0 and all(r["pass"] for r in rows)


# --------------------------------------------------------------------------- criteria
def criterion_1():
    state = le.solve_hierarchy(5)
    t = _table(5)
    checks = [
        ("Wbar_1^0 = 1/x", state.W1(0) == XRationalFn([0, 1], 2, 0)),
        ("Wbar_1^1", state.W1(1) == XRationalFn([W1_1_NUM], 1, 1)),
        ("Wbar_1^2", state.W1(2) == XRationalFn([W1_2_NUM], 0, 2)),
        ("Wbar_2^0 = 0", state.W(2, 0).is_zero()),
        ("Wbar_2^1 = 0", state.W(2, 1).is_zero()),
        ("Wbar_3^0 = 0", state.W(3, 0).is_zero()),
    ]
    checks += [(f"alpha_{j}", t.alphas[j] == ALPHAS[j]) for j in range(6)]
    # alpha_1 is pinned by Wbar_1^2: the x^(-k-1) coefficients of N / (x - 1)^2 are k N,
    # so alpha_1 = N. The variant with the opposite q-part cannot coexist with it.
    checks.append(("alpha_1 equals the Wbar_1^2 numerator", t.alphas[1] == W1_2_NUM))
    checks.append(("alpha_1 variant excluded", ALPHA_1_VARIANT != W1_2_NUM))
    return _record(1, checks)


def criterion_2():
    t = _table(5)
    checks = [(f"h_{j}", t.h[j] == H[j]) for j in range(4)]
    checks += [(f"h~_{j}", t.h_tilde[j] == H_TILDE[j]) for j in range(4)]
    return _record(2, checks)


def criterion_3():
    rows = le.verify_duality(_table(5), 5)
    checks = [(f"j={r['j']} h", r["h"]) for r in rows] + [(f"j={r['j']} h~", r["h_tilde"]) for r in rows]
    checks.append(("covers j = 0..5", [r["j"] for r in rows] == list(range(6))))
    return _record(3, checks)


def criterion_4():
    rows = le.verify_linear_response(_table(5), 4)
    checks = [(f"{r['check']} order {r['order']}", r["pass"]) for r in rows]
    checks.append(("orders through tau^4", max(r["order"] for r in rows) == 4))
    return _record(4, checks)


def criterion_5():
    d = oe.d_series_beta2(20)
    s = oe.P * oe.P + oe.Q * oe.Q
    checks = [
        ("d_1", d[1] == -oe.Q),
        ("d_2", d[2] == -s.scale(mpq(1, 2))),
        ("d_3", d[3] == -(oe.Q * s).scale(mpq(1, 2))),
        ("d_4", d[4] == (s * (oe.ONE - oe.P * oe.P - (oe.Q * oe.Q).scale(5))).scale(mpq(1, 8))),
        ("d_5 structure", _all(oe.d_series_structure(oe.d_series_beta2(5)))),
    ]
    checks += [(f"c_{2 * n} closed form", d[2 * n].subs(q=0) == oe.c2n_closed_form(n)) for n in range(1, 11)]
    ratios = [mpq(1, 2), mpq(1, 8), mpq(1, 16), mpq(5, 128), mpq(7, 256), mpq(21, 1024)]
    checks.append(("alpha ratios", [oe.c2n_alpha(n) for n in range(1, 7)] == ratios))
    checks += [(f"Bessel oracle n={n}", oe.bessel_asymptotic_c2n(n) == oe.c2n_closed_form(n)) for n in range(1, 7)]
    rows = oe.compare_with_loop(oe.map_to_h(oe.d_series_beta2(7)), _table(5).h, 1)
    checks.append(("map at kappa = 1, j <= 5", _all(rows) and len(rows) == 6))
    return _record(5, checks)


def criterion_6():
    t = _table(5)
    h4 = oe.compare_with_loop(oe.map_to_h(oe.g_series_beta4(7)), t.h, 2)
    checks = [("g-series at kappa = 2, j <= 5", _all(h4) and len(h4) == 6)]
    g1 = oe.g_beta1(7)
    g4 = oe.g_series_beta4(7)
    rel = all(g1[n] == g4[n].subs(p=oe.P.scale(mpq(-1, 2)), q=oe.Q.scale(-2)).scale((-2) ** n) for n in range(1, 7))
    checks.append(("beta = 1 relation, n <= 6", rel))
    h1 = oe.compare_with_loop(oe.map_to_h(g1), t.h, mpq(1, 2))
    checks.append(("beta = 1 relation against kappa = 1/2", _all(h1) and len(h1) == 6))
    ht = oe.compare_with_loop(oe.map_to_h(oe.g_tilde_series_beta4(8), tilde=True), t.h_tilde, 2, offset=1)
    checks.append(("g~ seeds at kappa = 2, j <= 5", _all(ht) and [r["j"] for r in ht] == [1, 2, 3, 4, 5]))
    checks.append(("h~_0 = -p (screening)", t.h_tilde[0].at_kappa(2) == -oe.P))
    return _record(6, checks)


def criterion_7():
    ctx = no.PrecisionContext(digits=40)
    checks = []
    with mp.workdps(40):
        for k in (1, 2, 3):
            tau = k * mp.pi / 2
            r = no.fourier_transform(tau, 1, ctx=ctx)
            checks.append((f"tau = {k} pi/2", abs(r.value - (-1 + tau / (2 * mp.pi))) < mp.mpf("1e-8")))
        s = no.screening_integral(1, ctx=ctx)
        checks.append(("screening p = 1", abs(s.value + 1) < mp.mpf("1e-6")))
        tau = mp.mpf(1) / 2
        r = no.fourier_transform(tau, 2, ctx=ctx)
        # at beta = 2, p = 2 the series terminates: h_j, h~_j vanish beyond j = 3
        table = _table(5)
        series = mp.mpf(0)
        for j in range(6):
            for part in (table.h[j], table.h_tilde[j]):
                c = part.at_kappa(1).evaluate(2, 0)
                series += mp.mpf(int(c.re.numerator)) / int(c.re.denominator) * (tau / (2 * mp.pi)) ** j
        checks.append(("p = 2, tau = 1/2 vs series", abs(r.value - series) <= r.error_estimate))
    return _record(7, checks)


def criterion_8():
    ctx = no.PrecisionContext(digits=40)
    checks = []
    with mp.workdps(40):
        xs = [mp.mpf(1) / 2 + k * mp.mpf(19) / 38 for k in range(20)]  # 0.5 .. 10
        for p in (1, 2):
            samples = [(x, no.rescaled_derivatives_beta2(x, p, 0, ctx)) for x in xs]
            checks.append((f"p = {p}", oe.ode_residual_beta2(samples, p, 0) < mp.mpf(10) ** -20))
    return _record(8, checks)


def criterion_9():
    t = _table(6)
    checks = []
    reports = []
    for m in range(1, 6):
        P = pp.extract_upoly(t, 5, "p", m)
        checks.append((f"p^{m} palindromy", pp.classify_palindrome(P) in ("palindromic", "anti-palindromic")))
        r = pp.zeros_on_unit_circle(P, tol=mp.mpf(10) ** -20, digits=40)
        checks.append((f"p^{m} on circle", r.all_on_circle))
        reports.append(r)
    checks += [(f"interlace {m}-{m + 1}", ok) for m, ok in enumerate(pp.check_interlacing(reports), start=1)]
    ps = le.structure_function_series(t, 5)
    checks += [(f"p_{j}(u) shape", pp.structure_shape_ok(pp.UPoly.from_list(ps[j]), j)) for j in range(1, 6)]
    return _record(9, checks)


def _rand_gauss(rng):
    return GaussianRational(mpq(rng.randint(-9, 9), rng.randint(1, 6)), mpq(rng.randint(-9, 9), rng.randint(1, 6)))


def _rand_poly(rng, cls):
    terms = {}
    for _ in range(rng.randint(0, 4)):
        if cls is ParamScalar:  # (kappa, p, q) with Laurent kappa
            e = (rng.randint(-2, 2), rng.randint(0, 2), rng.randint(0, 2))
        else:
            e = (rng.randint(0, 2), rng.randint(0, 2))
        terms[e] = _rand_gauss(rng)
    return cls(terms)


def _axioms(a, b, c, zero, one):
    return (a + b == b + a and a * b == b * a and (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
            and a * (b + c) == a * b + a * c and a + zero == a and a * one == a and a - a == zero)


def criterion_10():
    rng = random.Random(20240601)
    checks = []
    g = [_axioms(*(_rand_gauss(rng) for _ in range(3)), GaussianRational(0), GaussianRational(1))
         for _ in range(1000)]
    checks.append(("GaussianRational axioms x1000", all(g)))
    for cls in (ParamPoly, ParamScalar):
        ok = [_axioms(*(_rand_poly(rng, cls) for _ in range(3)), cls.zero(), cls.one()) for _ in range(1000)]
        checks.append((f"{cls.__name__} axioms x1000", all(ok)))
    t = _table(6)
    checks.append(("q-parity, all orders", _all(le.verify_q_parity(t))))
    checks.append(("reality split, all orders", _all(le.verify_reality(t))))
    checks.append(("alpha_j(0, 0) = 0, j <= 5", all(r["pass"] for r in le.alpha_vanishes_at_origin(t)[:6])))
    return _record(10, checks)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


# --------------------------------------------------------------------------- pytest entry points
def _run(fn):
    ok, failed = fn()
    assert ok, f"failed sub-checks: {failed}"


def test_criterion_01_loop_engine_golden():
    _run(criterion_1)


def test_criterion_02_h_and_h_tilde():
    _run(criterion_2)


def test_criterion_03_duality():
    _run(criterion_3)


def test_criterion_04_linear_response():
    _run(criterion_4)


def test_criterion_05_beta2_route():
    _run(criterion_5)


def test_criterion_06_beta4_and_beta1():
    _run(criterion_6)


def test_criterion_07_numeric_ft():
    _run(criterion_7)


def test_criterion_08_ode_residuals():
    _run(criterion_8)


def test_criterion_09_polynomial_structure():
    _run(criterion_9)


def test_criterion_10_property_suites():
    _run(criterion_10)


if __name__ == "__main__":
    results = [fn()[0] for fn in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
