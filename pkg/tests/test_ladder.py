import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaladder.errors import DomainError, LadderRangeError
from zetaladder.ladder import EULER_GAMMA, LN_2PI, Ladder, LadderConfig, ReverseTower
from zetaladder.zeta import abs2_critical

G = EULER_GAMMA


def test_config_validation():
    with pytest.raises(ValueError):
        LadderConfig(newton_tol=0)
    with pytest.raises(ValueError):
        LadderConfig(domain_hi=50)
    with pytest.raises(ValueError):
        LadderConfig(max_newton_iters=0)


def test_tower_type_invariants():
    with pytest.raises(ValueError):
        ReverseTower(1, (100.0,))
    with pytest.raises(ValueError):
        ReverseTower(1, (200.0, 100.0))


# -- J ------------------------------------------------------------------------


def test_hl_J_main_term(small_ladder):
    T = 5000.0
    main = T * (math.log(T) + 2 * G - 1 - LN_2PI)
    assert abs(small_ladder.hl_J(0.0, T) / main - 1) < 0.02


def test_hl_J_additivity_and_limits(small_ladder):
    lad = small_ladder
    assert lad.hl_J(0.0, 1e-9) < 1e-8
    assert lad.hl_J(0.0, 900.0) == pytest.approx(lad.hl_J(0.0, 400.0) + lad.hl_J(400.0, 900.0), rel=1e-13)
    assert lad.hl_J(3.0, 4.0) >= 0
    with pytest.raises(DomainError):
        lad.hl_J(5.0, 5.0)
    with pytest.raises(LadderRangeError) as exc:
        lad.hl_J(0.0, 3e4)
    assert exc.value.required >= 3e4


# -- phi1 ------------------------------------------------------------------------


def test_phi1_frozen(full_ladder):
    frozen = {1e3: 934.2879659394969, 1e4: 9526.68052890244, 1e5: 96232.76926317425, 1e6: 968765.7136160096}
    for T, v in frozen.items():
        assert full_ladder.phi1(T) == pytest.approx(v, rel=1e-12)


def test_phi1_residual(small_ladder):
    lad, T = small_ladder, 1e4
    y = lad.phi1(T)
    J = lad.J(T)
    assert abs(y * math.log(y) + (G - LN_2PI) * y - J) < lad.config.newton_tol * J
    assert lad.phi1(2e4) > lad.phi1(1e4)


def test_phi1_vectorized_matches_scalar(small_ladder):
    Ts = np.array([150.0, 777.7, 4321.0, 15000.0])
    np.testing.assert_array_equal(small_ladder.phi1(Ts), [small_ladder.phi1(t) for t in Ts])


def test_phi1_floor(small_ladder):
    with pytest.raises(DomainError):
        small_ladder.phi1(50.0)
    with pytest.raises(LadderRangeError):
        small_ladder.phi1(3e4)


def test_gap_law(full_ladder):
    r3 = full_ladder.gap_law_ratio(1e3)
    r5 = full_ladder.gap_law_ratio(1e5)
    assert 0.7 <= r5 <= 1.3
    assert abs(r5 - 1) < abs(r3 - 1)


# -- omega_hat ------------------------------------------------------------------------


def test_omega_hat_vs_log(full_ladder):
    assert 0.9 <= full_ladder.omega_hat(1e6) / math.log(1e6) <= 1.1


def test_derivative_identity(small_ladder):
    lad, t, h = small_ladder, 5000.0, 1e-3
    z2 = abs2_critical(t)
    assert z2 > 0.1
    d = (lad.phi1(t + h) - lad.phi1(t - h)) / (2 * h)
    assert abs(d * lad.omega_hat(t) / z2 - 1) < 1e-4


def test_omega_hat_increasing(small_ladder):
    ts = np.linspace(200.0, 19000.0, 500)
    assert np.all(np.diff(small_ladder.omega_hat(ts)) > 0)


# -- inverse and towers -----------------------------------------------------------------


def test_inverse_round_trip(small_ladder):
    U = 1e4
    x = small_ladder.phi1_inverse(U)
    assert x > U
    assert abs(small_ladder.phi1(x) / U - 1) < 1e-9


def test_inverse_gap_improves(full_ladder):
    dev = []
    for U in (1e3, 1e4, 1e5):
        x = full_ladder.phi1_inverse(U)
        dev.append(abs((x - U) * math.log(U) / ((1 - G) * U) - 1))
    assert dev[0] > dev[1] > dev[2]


def test_inverse_range_error_reports_domain(small_ladder):
    with pytest.raises(LadderRangeError) as exc:
        small_ladder.phi1_inverse(1.99e4)
    assert exc.value.required > 2e4
    assert "domain_hi" in str(exc.value)


def test_forward_iter(small_ladder):
    lad = small_ladder
    assert lad.forward_iter(1234.5, 0) == 1234.5
    assert lad.forward_iter(5000.0, 2) == lad.phi1(lad.phi1(5000.0))
    tw = lad.reverse_tower(3000.0, 3)
    assert lad.forward_iter(tw.levels[3], 3) == pytest.approx(3000.0, rel=1e-12)
    with pytest.raises(DomainError):
        lad.forward_iter(120.0, 3)


def test_reverse_tower(full_ladder):
    assert full_ladder.reverse_tower(500.0, 0).levels == (500.0,)
    tw = full_ladder.reverse_tower(1e6, 3)
    for r in range(1, 4):
        assert abs(full_ladder.phi1(tw.levels[r]) - tw.levels[r - 1]) <= full_ladder.config.newton_tol * tw.levels[r - 1]
    ratios = [v / 1e6 for v in tw.levels]
    # the levels drift by about (1 - gamma) / ln T per step at this height
    assert all(1 <= a < b for a, b in zip(ratios, ratios[1:]))
    assert ratios[3] - 1 == pytest.approx(3 * (1 - G) / math.log(1e6), rel=0.1)
    assert full_ladder.reverse_tower(1e6, 3).levels == tw.levels


def test_gap_report(full_ladder):
    tw = full_ladder.reverse_tower(1e5, 3)
    rep = full_ladder.gap_report(tw)
    assert [g.r for g in rep] == [1, 2, 3]
    assert sum(g.gap for g in rep) == pytest.approx(tw.levels[-1] - tw.levels[0], rel=1e-15)
    for g in rep:
        assert 0.7 <= g.gap_ratio_to_prediction <= 1.3
    assert rep[-1].adjacent_gap_ratio is None
    with pytest.raises(DomainError):
        full_ladder.gap_report(full_ladder.reverse_tower(1e5, 1))


def test_adjacent_gap_ratio_trend(full_ladder):
    dev = []
    for T in (1e3, 1e5):
        rep = full_ladder.gap_report(full_ladder.reverse_tower(T, 3))
        dev.append(max(abs(g.adjacent_gap_ratio - 1) for g in rep[:-1]))
    assert dev[1] < dev[0]


def test_increment_report(full_ladder):
    tw = full_ladder.reverse_tower(1e5, 3)
    rep = full_ladder.increment_report(tw)
    assert rep.telescoping_residual < 1e-8 * rep.total
    assert rep.total == pytest.approx(full_ladder.hl_J(tw.levels[0], tw.levels[-1]), rel=1e-12)
    for r in rep.records:
        assert 0.7 <= r.ratio_to_prediction <= 1.3
        # first step is exact: J(T, 1T) = (1 - gamma) T - E(T) + c0, E = O(T^(1/3))
        assert abs(r.ratio_to_prediction - 1) < 5 * r.lower ** (1 / 3) / ((1 - G) * r.lower)


def test_omega_product_tends_to_one(full_ladder):
    dev = []
    for T in (1e3, 1e4, 1e5):
        for k in (1, 2, 3):
            lo = full_ladder.reverse_tower(T, k).levels[-1]
            hi = full_ladder.reverse_tower(T + 1.0, k).levels[-1]
            p = full_ladder.omega_product(np.linspace(lo, hi, 7), k, T)
            if T == 1e5:
                assert np.all((0.8 <= p) & (p <= 1.2))
        dev.append(float(np.max(np.abs(p - 1))))
    assert dev[0] > dev[1] > dev[2]


def test_cache_round_trip(tmp_path, small_ladder):
    p = tmp_path / "j.npz"
    small_ladder.save(p)
    back = Ladder.load(p)
    assert back.jtable.cumvals.tobytes() == small_ladder.jtable.cumvals.tobytes()
    assert back.config == small_ladder.config
    assert back.phi1(4321.0) == small_ladder.phi1(4321.0)


def test_c0_shifts_ladder(small_ladder):
    from dataclasses import replace

    other = Ladder(replace(small_ladder.config, c0=50.0), small_ladder.jtable, small_ladder.policy)
    assert other.phi1(1e4) < small_ladder.phi1(1e4)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=100.0, max_value=18000.0))
def test_round_trip_property(small_ladder, U):
    x = small_ladder.phi1_inverse(U)
    assert x > U
    assert abs(small_ladder.phi1(x) - U) <= 1e-9 * U


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=100.0, max_value=19000.0), st.floats(min_value=1e-6, max_value=500.0))
def test_phi1_monotone_property(small_ladder, t, dt):
    assert small_ladder.phi1(min(t + dt, 2e4)) >= small_ladder.phi1(t)
