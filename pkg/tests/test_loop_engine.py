"""Loop-equation hierarchy: correlators, alpha_j, the h/h~ split and the symbolic identities."""

import pytest
from gmpy2 import mpq

from circjacobi import loop_engine as le
from circjacobi import ode_engine as oe
from circjacobi.exactalg import I, KAPPA, P, Q, ParamScalar, XRationalFn
from golden import ALPHA_1_VARIANT, ALPHAS, H, H_TILDE, W1_1_NUM, W1_2_NUM, A, inv_kappa


def _all_pass(report):
    return all(r["pass"] for r in report) and len(report) > 0


def test_low_order_correlators(state5):
    assert state5.W1(0) == XRationalFn([0, 1], 2, 0)  # 1/x
    assert state5.W1(1) == XRationalFn([W1_1_NUM], 1, 1)
    assert state5.W1(2) == XRationalFn([W1_2_NUM], 0, 2)
    for n, l in ((2, 0), (2, 1), (3, 0)):
        assert state5.W(n, l).is_zero()


def test_correlators_are_symmetric(state5):
    for (n, l), w in state5.table.items():
        if n > 1:
            assert w.is_symmetric(), (n, l)


def test_required_arity_and_caps():
    assert le.required_arity(0) >= 1
    with pytest.raises(ValueError):
        le.solve_hierarchy(-1)
    with pytest.raises(ValueError):
        le.solve_hierarchy(4, max_arity=1)


@pytest.mark.parametrize("j", range(6))
def test_alpha_matches_golden(table5, j):
    assert table5.alphas[j] == ALPHAS[j]


def test_alpha_1_variant_is_inconsistent_with_h1(table5):
    assert ALPHA_1_VARIANT != table5.alphas[1]
    split = le.split_alpha([ALPHAS[0], ALPHA_1_VARIANT])
    assert split.h[1] != H[1]
    assert table5.h[1] == H[1]


def test_extract_alpha_needs_solved_order(state5):
    with pytest.raises(ValueError):
        le.extract_alpha(state5, 6)


@pytest.mark.parametrize("j", range(4))
def test_h_and_h_tilde_match_golden(table5, j):
    assert table5.h[j] == H[j]
    assert table5.h_tilde[j] == H_TILDE[j]
    assert table5.pi_power[j] == -j


def test_every_alpha_carries_alpha_factor(table6):
    # alpha = kappa p + i q vanishes on p = -i q / kappa
    root = -(I * Q * inv_kappa(1))
    for a in table6.alphas:
        assert a.subs(p=root).is_zero()


def test_duality(table5):
    rep = le.verify_duality(table5, 5)
    assert [r["j"] for r in rep] == list(range(6))
    assert _all_pass(rep)


def test_duality_detects_a_broken_entry(table5):
    broken = le.CoefficientTable(table5.alphas, list(table5.h), list(table5.h_tilde), table5.pi_power)
    broken.h[2] = broken.h[2] + P
    rep = le.verify_duality(broken, 5)
    assert [r["pass"] for r in rep] == [True, True, False, True, True, True]


def test_duality_j0_by_hand():
    # -i q / kappa -> (-1/kappa) * (-i (-q/kappa) * kappa) = -i q / kappa
    assert le.duality_image(H[0], 0) == H[0]


def test_linear_response_through_fourth_order(table5):
    rep = le.verify_linear_response(table5, 4)
    orders = {r["order"] for r in rep}
    assert orders == {-1, 0, 1, 2, 3, 4}
    assert _all_pass(rep)
    with pytest.raises(ValueError):
        le.verify_linear_response(table5, 5)


def test_q_parity_and_reality(table6):
    assert _all_pass(le.verify_q_parity(table6))
    assert _all_pass(le.verify_reality(table6))


def test_alpha_vanishes_at_origin(table6):
    assert _all_pass(le.alpha_vanishes_at_origin(table6))


def test_h_tilde_1_vanishes_at_beta_2(table5):
    assert table5.h_tilde[1].at_kappa(1).is_zero()


def test_low_temperature_limit(table6):
    lt = le.low_temperature_limit(table6)
    assert lt[0] == [0, -1]  # -p
    third = [mpq(0), mpq(1), mpq(-1, 6)]
    fifth = [mpq(0), mpq(1), mpq(-7, 15), mpq(1, 60)]
    assert lt[3] == third
    assert lt[5] == fifth
    assert lt[1] == [0, 1] and lt[2] == [0, 1]
    assert lt[4] == [0, 1, mpq(-1, 3)]
    assert lt[6] == [0, 1, mpq(-17, 30), mpq(2, 45)]
    # pt = 0 kills every non-constant coefficient
    assert all(c[0] == 0 for c in lt[1:])
    assert _all_pass(le.verify_low_temperature(lt))


def test_structure_function_series(table6):
    ps = le.structure_function_series(table6, 5)
    expected = [
        [1],
        [1, -1],
        [1, -2, 1],
        [1, mpq(-17, 6), mpq(17, 6), -1],
        [1, mpq(-7, 2), 5, mpq(-7, 2), 1],
        [1, mpq(-121, 30), mpq(43, 6), mpq(-43, 6), mpq(121, 30), -1],
    ]
    assert ps == [[mpq(c) for c in row] for row in expected]
    # u = 1 (beta = 2): only the constant survives
    for j in range(1, 6):
        assert sum(ps[j]) == 0


def test_structure_function_spot_value_against_beta4_route(table6):
    # p_1(u) at u = 1/2 equals kappa * alpha_2(1, 0) at kappa = 2 from the beta = 4 series
    h = oe.map_to_h(oe.g_series_beta4(6))
    ht = oe.map_to_h(oe.g_tilde_series_beta4(6), tilde=True)  # starts at j = 1
    alpha2 = (h[2] + ht[1]).evaluate(1, 0)
    p1 = le.structure_function_series(table6, 1)[1]
    assert 2 * alpha2 == p1[0] + p1[1] * mpq(1, 2) == mpq(1, 2)


def test_structure_function_rejects_short_table(table5):
    with pytest.raises(ValueError):
        le.structure_function_series(table5, 5)


def test_laurent_to_u_poly():
    assert le.laurent_to_u_poly(1 - inv_kappa(2).scale(3)) == [1, 0, -3]
    with pytest.raises(ValueError):
        le.laurent_to_u_poly(KAPPA)
    with pytest.raises(ValueError):
        le.laurent_to_u_poly(P)


def test_q_reflect_sends_alpha_to_conjugate_structure():
    assert le.q_reflect(A) == KAPPA * P - I * Q
