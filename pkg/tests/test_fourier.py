import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaladder.errors import DomainError
from zetaladder.fourier import (
    FourierMode,
    PullbackNodes,
    TransformSpec,
    cosine_diff_functional,
    fourier_modes,
    gram_matrix,
    ip_direct,
    ip_pullback,
    mode_eval,
    mode_norm,
    product_integral,
    transformed_weight,
)
from zetaladder.quadrature import Interval, integrate
from zetaladder.zeta import abs2_critical


def test_mode_eval_examples():
    assert mode_eval(FourierMode("cosine", 2, 1.0), 0.0) == 1.0
    assert mode_eval(FourierMode("sine", 3, 0.7), 0.0) == 0.0
    assert mode_eval(FourierMode("unit", 1, 2.0), 3.3) == 1.0
    with pytest.raises(DomainError):
        mode_eval(FourierMode("cosine", 1, 0.5), 1.01)
    with pytest.raises(DomainError):
        mode_eval(FourierMode("cosine", 1, 0.5), -0.01)


def test_mode_validation():
    with pytest.raises(ValueError):
        FourierMode("tan")
    with pytest.raises(ValueError):
        FourierMode("cosine", 0)
    with pytest.raises(ValueError):
        FourierMode("cosine", 1, 0.0)


def test_mode_norms():
    assert mode_norm(FourierMode("unit", 1, 0.5)) == 1.0
    assert mode_norm(FourierMode("cosine", 4, 3.0)) == 3.0
    assert mode_norm(FourierMode("sine", 2, 3.0)) == 3.0
    for md in fourier_modes(4, 0.75):
        q = integrate(lambda u: md(u) ** 2, Interval(0.0, 1.5), tol=1e-13).value
        assert q == pytest.approx(mode_norm(md), abs=1e-10)


def test_printed_convention_closed_form():
    l = 125 / 91
    for kind in ("cosine", "sine"):
        a = FourierMode(kind, 2, l, "printed")
        b = FourierMode("cosine", 1, l, "printed")
        for x, y in ((a, a), (a, b), (FourierMode("unit", 1, l), a)):
            q = integrate(lambda u: x(u) * y(u), Interval(0.0, 2 * l), tol=1e-13).value
            assert product_integral(x, y) == pytest.approx(q, abs=1e-11)


def test_transformed_weight(small_ladder):
    assert transformed_weight(small_ladder, 1234.0, 0) == 1.0
    assert transformed_weight(small_ladder, 1234.0, 1) == pytest.approx(abs2_critical(1234.0), rel=1e-14)
    w = transformed_weight(small_ladder, np.linspace(500, 900, 41), 2)
    assert np.all(w >= 0)


def test_k0_is_plain_fourier(small_ladder):
    spec = TransformSpec(1000.0, 0, 0.5)
    c, s = FourierMode("cosine", 2, 0.5), FourierMode("sine", 2, 0.5)
    assert abs(ip_direct(small_ladder, c, s, spec)) < 1e-10
    assert ip_pullback(small_ladder, FourierMode("unit"), FourierMode("unit"), spec) == 1.0
    G = gram_matrix(small_ladder, fourier_modes(3), spec, "direct")
    assert np.abs(G - np.eye(7)).max() < 1e-8


def test_dual_path_k1_k2(small_ladder):
    modes = fourier_modes(2)
    for k in (1, 2):
        spec = TransformSpec(1000.0, k, 0.5)
        Gp = gram_matrix(small_ladder, modes, spec)
        Gd = gram_matrix(small_ladder, modes, spec, "direct")
        scale = np.sqrt(np.outer(np.diag(Gd), np.diag(Gd)))
        assert np.max(np.abs(Gp - Gd) / scale) < 1e-8


def test_unit_unit_frozen(full_ladder):
    v = ip_pullback(full_ladder, FourierMode("unit"), FourierMode("unit"), TransformSpec(1e4, 2))
    assert v == pytest.approx(80.52913033890249, rel=1e-9)


def test_gram_symmetric_and_dominant(full_ladder):
    G = gram_matrix(full_ladder, fourier_modes(3), TransformSpec(1e5, 2))
    assert np.array_equal(G, G.T)
    off = np.abs(G - np.diag(np.diag(G)))
    assert off.max() < np.diag(G).min()


def test_gram_limits():
    with pytest.raises(ValueError):
        gram_matrix(None, fourier_modes(6), TransformSpec(1e3, 0))
    with pytest.raises(ValueError):
        ip_pullback(None, FourierMode("unit", 1, 0.5), FourierMode("unit", 1, 0.25), TransformSpec(1e3, 0))


def test_omega_weight_variant(small_ladder):
    spec = TransformSpec(1000.0, 1, 0.5, weight="omega")
    u, c = FourierMode("unit"), FourierMode("cosine", 1)
    assert ip_pullback(small_ladder, u, u, spec) == 1.0
    assert ip_direct(small_ladder, u, u, spec) == pytest.approx(1.0, rel=1e-8)
    assert abs(ip_direct(small_ladder, u, c, spec)) < 1e-8


def test_cosine_difference(full_ladder):
    spec0 = TransformSpec(1e4, 0, 0.5)
    assert cosine_diff_functional(full_ladder, 1, 0.5, spec0) == 0.0
    spec = TransformSpec(1e5, 1, 0.5)
    v = cosine_diff_functional(full_ladder, 1, 0.5, spec)
    assert abs(v) < 0.1 * 0.5
    c2 = ip_pullback(full_ladder, FourierMode("cosine", 1), FourierMode("cosine", 1), spec)
    s2 = ip_pullback(full_ladder, FourierMode("sine", 1), FourierMode("sine", 1), spec)
    assert v == pytest.approx((c2 - s2) / math.log(1e5), abs=1e-12)


def test_pullback_nodes_cache(small_ladder):
    spec = TransformSpec(2000.0, 2, 0.5)
    nodes = PullbackNodes(small_ladder, spec)
    ip_pullback(small_ladder, FourierMode("unit"), FourierMode("unit"), spec, nodes)
    n = len(nodes.memo)
    ip_pullback(small_ladder, FourierMode("unit"), FourierMode("unit"), spec, nodes)
    assert len(nodes.memo) == n


def test_diagonal_trend(full_ladder):
    for k in (1, 2):
        dev = [abs(gram_matrix(full_ladder, [FourierMode("cosine", 3)], TransformSpec(T, k))[0, 0] - 1) for T in (1e3, 1e4, 1e5)]
        assert dev[0] > dev[1] > dev[2]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.floats(min_value=0.1, max_value=4.0))
def test_product_integral_property(i, j, l):
    modes = fourier_modes(3, l)
    a, b = modes[i], modes[j]
    q = integrate(lambda u: a(u) * b(u), Interval(0.0, 2 * l), tol=1e-13).value
    assert product_integral(a, b) == pytest.approx(q, abs=1e-10 * max(1.0, l))
    assert product_integral(a, b) == product_integral(b, a)
