"""High-precision densities, ODE residuals and the Fourier transform."""

import mpmath as mp
import pytest

from circjacobi import numeric_oracle as no
from circjacobi import ode_engine as oe
from circjacobi.loop_engine import compute_table

CTX = no.PrecisionContext(digits=40)
TIGHT = mp.mpf(10) ** -35  # digits - 5


@pytest.fixture(autouse=True)
def _precision():
    with mp.workdps(40):
        yield


def _q(poly, p, q=0):
    c = poly.evaluate(p, q)
    return mp.mpf(int(c.re.numerator)) / int(c.re.denominator)


# --------------------------------------------------------------------------- beta = 2 density
def test_p1_half():
    assert abs(no.density_beta2(mp.mpf(1) / 2, 1, 0, CTX) - (1 - 4 / mp.pi ** 2)) < TIGHT


def test_uniform_case():
    for x in (0, mp.mpf("0.3"), 2, 11):
        assert no.density_beta2(x, 0, 0, CTX) == 1
    assert no.density_beta4_q0(mp.mpf("2.5"), 0, CTX) == 1


@pytest.mark.parametrize("p", [1, 2])
@pytest.mark.parametrize("x", ["0.1", "0.5", "1", "3.7", "10"])
def test_three_paths_agree(p, x):
    x = mp.mpf(x)
    ref = no.density_beta2(x, p, 0, CTX, method="elementary")
    assert abs(no.density_beta2(x, p, 0, CTX, method="bessel") - ref) < TIGHT
    assert abs(no.density_beta2(x, p, 0, CTX, method="series") - ref) < TIGHT


def test_p2_at_one_closed_value():
    pi = mp.pi
    want = 1 - 2 / pi ** 2 - mp.mpf(3) / (2 * pi ** 4) + (3 - 2 * pi ** 2) / (2 * pi ** 4)
    assert abs(no.density_beta2(1, 2, 0, CTX) - want) < TIGHT


def test_evenness_and_kummer_symmetry():
    for x in ("0.4", "2.2", "7.9"):
        x = mp.mpf(x)
        assert no.density_beta2(x, 1, 0, CTX) == no.density_beta2(-x, 1, 0, CTX)
        assert no.kummer_symmetry_defect(x, mp.mpf("0.6"), mp.mpf("0.3"), CTX) < TIGHT
    assert no.density_beta2(mp.mpf("1.5"), mp.mpf("0.6"), mp.mpf("0.3"), CTX) != \
        no.density_beta2(mp.mpf("1.5"), mp.mpf("0.6"), mp.mpf("-0.3"), CTX)


def test_errors_are_explicit():
    with pytest.raises(no.PrecisionError):
        no.density_beta2(500, mp.mpf("0.5"), mp.mpf("0.1"), CTX)
    with pytest.raises(no.UnsupportedParameters):
        no.density_beta2(1, -1, 0, CTX)
    with pytest.raises(no.UnsupportedParameters):
        no.density_beta2(1, mp.mpf("0.5"), 0, CTX, method="elementary")
    with pytest.raises(ValueError):
        no.PrecisionContext(digits=10)


def test_digits_from_environment(monkeypatch):
    monkeypatch.setenv(no.DIGITS_ENV, "55")
    assert no.PrecisionContext().digits == 55


def _period_average(f, x0, n=16):
    # midpoint rule over one period: exact on cos(2 pi k x) for 0 < k < n
    h = mp.mpf(1) / n
    return sum(f(x0 - mp.mpf(1) / 2 + (k + mp.mpf(1) / 2) * h) for k in range(n)) * h


@pytest.mark.parametrize("p", [1, 2])
def test_beta2_tail_average_matches_d_series(p):
    x0 = 20
    d = oe.d_series_beta2(4)
    d2 = _q(d[2], p) / mp.pi ** 2
    d4 = _q(d[4], p) / mp.pi ** 4
    avg = _period_average(lambda x: no.density_beta2(x, p, 0, CTX), x0)
    model = _period_average(lambda x: 1 + d2 / x ** 2 + d4 / x ** 4, x0)
    assert abs(avg - model) < mp.mpf(x0) ** -4
    assert abs(avg - 1) > 10 * mp.mpf(x0) ** -4  # the d_2 term is really being tested


# --------------------------------------------------------------------------- ODE residuals
XS = ("0.5", "1", "2.5", "5", "7.5", "10")


@pytest.mark.parametrize("p", [1, 2])
def test_beta2_ode_residual(p):
    samples = [(mp.mpf(x), no.rescaled_derivatives_beta2(x, p, 0, CTX)) for x in XS]
    assert oe.ode_residual_beta2(samples, p, 0) < mp.mpf(10) ** -20


def test_beta2_ode_residual_with_q():
    p, q = mp.mpf("0.6"), mp.mpf("0.3")
    samples = [(mp.mpf(x), no.rescaled_derivatives_beta2(x, p, q, CTX)) for x in ("0.5", "2", "6")]
    assert oe.ode_residual_beta2(samples, p, q) < mp.mpf(10) ** -20


def test_beta2_ode_residual_detects_wrong_parameter():
    samples = [(mp.mpf(x), no.rescaled_derivatives_beta2(x, 1, 0, CTX)) for x in ("1", "2.5")]
    assert oe.ode_residual_beta2(samples, 2, 0) > mp.mpf("1e-3")


@pytest.mark.parametrize("p", [1, mp.mpf(1) / 2])
def test_beta4_ode_residual(p):
    for x in ("0.7", "3"):
        d = no.rescaled_derivatives_beta4(x, p, CTX)
        assert abs(oe.p31_residual(mp.mpf(x), d, p, 0)) < mp.mpf(10) ** -25


# --------------------------------------------------------------------------- beta = 4 density
def test_beta4_positive_and_even():
    for x in ("0.05", "0.5", "1", "2"):
        v = no.density_beta4_q0(mp.mpf(x), 1, CTX)
        assert v > 0
        assert v == no.density_beta4_q0(-mp.mpf(x), 1, CTX)


def test_beta4_tail_average_matches_g_series():
    ctx = no.PrecisionContext(digits=20)
    with mp.workdps(20):
        x0 = 6
        g2 = _q(oe.g_series_beta4(4)[2], 1) / mp.pi ** 2
        avg = _period_average(lambda x: no.density_beta4_q0(x, 1, ctx), x0)
        model = _period_average(lambda x: 1 + g2 / x ** 2, x0)
        # at x = 6 the 1/x^4 scale is as large as the signal, so ask for the g_2 term to 1 %
        assert abs(avg - model) < abs(avg - 1) / 100


# --------------------------------------------------------------------------- Fourier transform
def test_ft_triangle_at_pi():
    r = no.fourier_transform(mp.pi, 1, ctx=CTX)
    assert abs(r.value + mp.mpf(1) / 2) < mp.mpf("1e-30")
    assert r.error_estimate < mp.mpf("1e-30")
    assert "expint" in r.tail_model


def test_ft_even_in_tau():
    a = no.fourier_transform(1, 1, ctx=CTX).value
    b = no.fourier_transform(-1, 1, ctx=CTX).value
    assert a == b


def test_screening():
    assert no.screening_integral(0, ctx=CTX).value == 0
    assert abs(no.screening_integral(2, ctx=CTX).value + 2) < mp.mpf("1e-30")


def test_ft_small_tau_against_series():
    # p = 2: h_j vanishes for j > 3 at beta = 2, so the series is a cubic
    table = compute_table(5)
    tau = mp.mpf(1) / 4
    r = no.fourier_transform(tau, 2, ctx=CTX)
    series = mp.mpf(0)
    for j in range(6):
        hj = _q(table.h[j].at_kappa(1), 2) * (2 * mp.pi) ** -j
        htj = _q(table.h_tilde[j].at_kappa(1), 2) * (2 * mp.pi) ** -j
        series += (hj + htj) * tau ** j
    assert abs(r.value - series) <= r.error_estimate + mp.mpf(10) ** -35


def test_ft_unsupported_region():
    for args in ((1, mp.mpf("0.5"), 0, 2), (1, 1, 1, 2), (1, 1, 0, 4), (7, 1, 0, 2)):
        with pytest.raises(no.UnsupportedParameters):
            no.fourier_transform(*args, ctx=CTX)


# --------------------------------------------------------------------------- dumps
def test_profile_dumps():
    prof = no.density_profile([mp.mpf(0), mp.mpf(1) / 2], 1, 0, 2, CTX)
    assert prof.meta["formula"] == "bessel"
    rows = [(x, v, "1e-40") for x, v in zip(prof.grid, prof.values)]
    text = no.profile_to_csv(rows, prof.meta, digits=20)
    lines = text.splitlines()
    assert lines[0].startswith("# beta=2 p=1 q=0")
    assert lines[1] == "x,value,error_estimate"
    assert lines[3].startswith("0.50000000000000000000,0.59471526543064891422")
    with pytest.raises(no.UnsupportedParameters):
        no.density_profile([1], 1, 1, 4, CTX)
