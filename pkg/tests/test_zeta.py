import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaladder.errors import AccuracyWarning, DomainError, PoleError
from zetaladder.zeta import (
    DEFAULT_POLICY,
    CriticalLineAbs2,
    PrecisionPolicy,
    abs2_critical,
    abs2_critical_array,
    hardy_Z,
    rs_error_bound,
    theta,
    theta_exact,
    z_imag_residual,
    z_riemann_siegel,
    zeta_abs2_array,
    zeta_em,
)


# -- golden oracles ---------------------------------------------------------


def test_theta_matches_golden(goldens):
    for t, ref in goldens["theta"]:
        assert theta_exact(t) == pytest.approx(ref, rel=1e-12, abs=1e-12)
        if t >= 10:
            assert theta(t) == pytest.approx(ref, rel=1e-13, abs=1e-9)


def test_theta_at_two_pi():
    # the log term vanishes; 7 / (5760 t^3) adds 4.9e-6 and later terms about 4e-8
    two_terms = -math.pi - math.pi / 8 + 1 / (48 * 2 * math.pi)
    assert theta(2 * math.pi) == pytest.approx(two_terms + 7 / (5760 * (2 * math.pi) ** 3), abs=1e-7)
    assert theta(2 * math.pi) == pytest.approx(-3.53097, abs=1e-5)


def test_theta_root(goldens):
    lo, hi = 17.0, 18.5
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if theta(mid) < 0 else (lo, mid)
    assert abs(lo - goldens["theta_root"]) < 1e-6
    assert abs(lo - 17.8456) < 1e-3


def test_hardy_Z_matches_golden(goldens):
    for t, ref in goldens["hardy_Z"]:
        assert hardy_Z(t) == pytest.approx(ref, rel=1e-9, abs=1e-10), t


def test_hardy_Z_rs_region_k4_matches_golden(goldens):
    pol = PrecisionPolicy(rs_correction_terms=4)
    for t, ref in goldens["hardy_Z"]:
        if t >= 1000:
            assert hardy_Z(t, pol) == pytest.approx(ref, rel=1e-10, abs=1e-11), t


def test_zeta_em_matches_golden(goldens):
    for s, t, re, im in goldens["zeta"]:
        v = zeta_em(s, t)
        assert abs(v - complex(re, im)) <= 1e-10 * max(1.0, abs(complex(re, im))), (s, t)


def test_first_zero_bracket(goldens):
    assert goldens["first_zero_sign_changes_14_0_14_2"] == 1
    assert np.sign(hardy_Z(14.0)) != np.sign(hardy_Z(14.2))
    assert abs2_critical(goldens["first_zero"]) < 1e-20
    assert abs2_critical(14.1347) < 1e-3


# -- special values and examples ----------------------------------------------


def test_zeta_even_values():
    assert zeta_em(2.0, 0.0).real == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert zeta_em(4.0, 0.0).real == pytest.approx(math.pi**4 / 90, rel=1e-15)
    assert abs(zeta_em(0.5, 14.1347)) < 1e-3


def test_identity_at_100():
    em = abs(zeta_em(0.5, 100.0)) ** 2
    assert abs(hardy_Z(100.0) ** 2 - em) / em < 1e-8


def test_imag_residual_at_500():
    assert z_imag_residual(500.0) < 1e-12


def test_policy_k2_vs_k4_at_1000():
    a = abs2_critical(1000.0, PrecisionPolicy(rs_correction_terms=2))
    b = abs2_critical(1000.0, PrecisionPolicy(rs_correction_terms=4))
    assert abs(a - b) / b < 1e-9


def test_rs_floor_policy():
    assert DEFAULT_POLICY.rs_floor == pytest.approx((0.011 / 1e-9) ** (4 / 7))
    assert PrecisionPolicy(rs_correction_terms=4).rs_floor < 500
    assert PrecisionPolicy(em_crossover=2e4).rs_floor == 2e4
    assert rs_error_bound(1e4, 2) == pytest.approx(0.011 * 1e4 ** (-7 / 4))


def test_more_rs_terms_never_hurt():
    ts = np.linspace(600.0, 5000.0, 23)
    ref = np.array([abs(zeta_em(0.5, t)) for t in ts])
    prev = None
    for K in range(5):
        dev = max(abs(abs(z_riemann_siegel(t, K)) - r) for t, r in zip(ts, ref))
        if prev is not None:
            assert dev <= prev
        prev = dev


# -- errors -------------------------------------------------------------------


def test_domain_errors():
    for fn in (theta, hardy_Z, abs2_critical):
        with pytest.raises(DomainError):
            fn(0.5)
    with pytest.raises(DomainError):
        zeta_em(0.4, 10.0)
    with pytest.raises(DomainError):
        zeta_em(0.5, -1.0)
    with pytest.raises(PoleError):
        zeta_em(1.0, 0.0)


def test_policy_validation():
    with pytest.raises(ValueError):
        PrecisionPolicy(rs_correction_terms=5)
    with pytest.raises(ValueError):
        PrecisionPolicy(em_crossover=5)
    with pytest.raises(ValueError):
        PrecisionPolicy(em_terms=1)
    with pytest.raises(ValueError):
        PrecisionPolicy(target_rel_err=0)


def test_em_ceiling_warns():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        zeta_em(2.0, 2.0e7)
    assert any(issubclass(x.category, AccuracyWarning) for x in w)


# -- arrays and determinism -----------------------------------------------------


def test_array_paths_agree_with_scalar():
    ts = np.array([20.0, 150.0, 3000.0, 12000.0, 2.5e5])
    arr = abs2_critical_array(ts)
    for t, v in zip(ts, arr):
        assert v == pytest.approx(abs2_critical(t), rel=1e-12, abs=1e-300)
    f = CriticalLineAbs2()
    np.testing.assert_array_equal(f(ts), arr)
    z = zeta_abs2_array(0.5, ts[:3])
    np.testing.assert_allclose(z, arr[:3], rtol=1e-9)


def test_workers_bit_identical():
    ts = np.linspace(10.0, 3.0e5, 20000)
    a = abs2_critical_array(ts, workers=1)
    for w in (4, 8):
        assert abs2_critical_array(ts, workers=w).tobytes() == a.tobytes()


# -- properties -------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=1.0, max_value=1e6))
def test_abs2_nonnegative(t):
    assert abs2_critical(t) >= 0.0


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=10.0, max_value=1e7), st.floats(min_value=1e-6, max_value=100.0))
def test_theta_increasing(t, dt):
    assert theta(t + dt) > theta(t)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=50.0, max_value=5000.0))
def test_critical_line_identity(t):
    em = abs(zeta_em(0.5, t)) ** 2
    assert abs(hardy_Z(t) ** 2 - em) <= 1e-8 * em + 1e-300


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.55, max_value=3.0), st.floats(min_value=0.0, max_value=2000.0))
def test_zeta_conjugate_symmetry(s, t):
    assert zeta_em(s, t).conjugate() == pytest.approx(complex(_conj(s, t)), rel=1e-12)


def _conj(s, t):
    # zeta(conj s) = conj zeta(s); evaluate via the real-axis reflection t -> -t on the EM sum
    from zetaladder.zeta import zeta_em_array

    return zeta_em_array(s, np.array([t]))[0].conjugate()
