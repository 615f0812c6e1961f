import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_klein
from riemann_minimax import DomainError, Klein, klein_distance, klein_interpolate
from riemann_minimax.klein import _chord_distance_fn, translate_from_origin, translate_to_origin
from riemann_minimax.theory import cos_law_hyperbolic

mp.mp.dps = 50
K = Klein()


def mp_distance(p, q):
    """Textbook arccosh formula in 50-digit arithmetic."""
    p = [mp.mpf(float(v)) for v in p]
    q = [mp.mpf(float(v)) for v in q]
    dot = lambda a, b: mp.fsum(x * y for x, y in zip(a, b))
    arg = (1 - dot(p, q)) / mp.sqrt((1 - dot(p, p)) * (1 - dot(q, q)))
    return mp.acosh(max(arg, mp.mpf(1)))


def mp_chord_parameter(p, q, t):
    """Closed form of the chord parameter u with rho(p, p + u (q - p)) = t rho(p, q).

    With s = sinh(t rho), L = |q - p|, b = p.(q - p), K = 1 - |p|^2 + (b/L)^2,
    u solves u^2 L^2 (K + s^2 (1-|p|^2)) + 2 u b s^2 (1-|p|^2) - s^2 (1-|p|^2)^2 = 0.
    """
    p = [mp.mpf(float(v)) for v in p]
    q = [mp.mpf(float(v)) for v in q]
    diff = [b - a for a, b in zip(p, q)]
    L2 = mp.fsum(d * d for d in diff)
    pp = mp.fsum(v * v for v in p)
    b = mp.fsum(a * d for a, d in zip(p, diff))
    kk = 1 - pp + b * b / L2
    s2 = mp.sinh(t * mp_distance(p, q)) ** 2
    A = L2 * (kk + s2 * (1 - pp))
    B = 2 * b * s2 * (1 - pp)
    C = -s2 * (1 - pp) ** 2
    return (-B + mp.sqrt(B * B - 4 * A * C)) / (2 * A)


class TestDistance:
    def test_examples(self):
        assert klein_distance([0, 0], [0.6, 0]) == pytest.approx(math.log(2), rel=1e-15)
        assert klein_distance([0.3, 0], [0.3, 0]) == 0.0
        assert klein_distance([0.3, 0], [-0.3, 0]) == pytest.approx(0.6190392084062233, rel=1e-14)
        assert 0.6190392084062233 == pytest.approx(float(mp.acosh(mp.mpf("1.09") / mp.mpf("0.91"))),
                                                   rel=1e-15)

    def test_against_high_precision(self):
        rng = np.random.default_rng(3)
        pts = random_klein(rng, 400, 3, radius=4.0)
        for p, q in zip(pts[::2], pts[1::2]):
            assert klein_distance(p, q) == pytest.approx(float(mp_distance(p, q)), rel=1e-12)

    def test_nearby_points_keep_precision(self):
        p = np.array([0.5, 0.1])
        q = p + np.array([1e-10, -2e-10])
        assert klein_distance(p, q) == pytest.approx(float(mp_distance(p, q)), rel=1e-9)

    def test_boundary_rejected(self):
        with pytest.raises(DomainError):
            klein_distance([0, 0], [1 - 1e-13, 0])
        klein_distance([0, 0], [1 - 1e-11, 0])

    def test_rotation_invariance(self):
        rng = np.random.default_rng(4)
        pts = random_klein(rng, 200, 3, radius=3.0)
        for p, q in zip(pts[::2], pts[1::2]):
            rot, _ = np.linalg.qr(rng.standard_normal((3, 3)))
            assert abs(klein_distance(rot @ p, rot @ q) - klein_distance(p, q)) <= 1e-12 * max(
                1.0, klein_distance(p, q))

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(5)
        pts = random_klein(rng, 50, 4)
        x = pts[0]
        batch = K.distances(x, pts)
        for i, p in enumerate(pts):
            assert batch[i] == pytest.approx(K.distance(x, p), rel=1e-13, abs=1e-15)


class TestInterpolate:
    def test_examples(self):
        np.testing.assert_array_equal(klein_interpolate([0.1, 0.2], [0.6, 0], 0.0), [0.1, 0.2])
        np.testing.assert_allclose(klein_interpolate([0, 0], [0.6, 0], 0.5), [1 / 3, 0], atol=1e-15)
        np.testing.assert_array_equal(klein_interpolate([0, 0], [0.6, 0], 1.0), [0.6, 0])

    def test_against_closed_form_parameter(self):
        rng = np.random.default_rng(6)
        pts = random_klein(rng, 200, 2, radius=3.0)
        for p, q in zip(pts[::2], pts[1::2]):
            t = float(rng.random())
            m = klein_interpolate(p, q, t)
            u = float(mp_chord_parameter(p, q, t))
            expected = p + u * (q - p)
            assert klein_distance(m, expected) <= 1e-12 * max(1.0, klein_distance(p, q))

    def test_residual_tolerance(self):
        rng = np.random.default_rng(7)
        pts = random_klein(rng, 2000, 2, radius=5.0)
        for p, q in zip(pts[::2], pts[1::2]):
            t = float(rng.random())
            d = klein_distance(p, q)
            m = klein_interpolate(p, q, t)
            assert abs(klein_distance(p, m) - t * d) <= 1e-12 * max(1.0, d)

    def test_chord_distance_is_increasing(self):
        rng = np.random.default_rng(8)
        pts = random_klein(rng, 100, 3)
        us = np.linspace(0, 1, 201)
        for p, q in zip(pts[::2], pts[1::2]):
            rho = _chord_distance_fn(p, q)
            vals = np.array([rho(u) for u in us])
            assert np.all(np.diff(vals) > 0)

    def test_chord_additivity(self):
        rng = np.random.default_rng(9)
        pts = random_klein(rng, 100, 2)
        for a, c in zip(pts[::2], pts[1::2]):
            b = a + rng.random() * (c - a)
            assert klein_distance(a, c) == pytest.approx(klein_distance(a, b) + klein_distance(b, c),
                                                         abs=1e-10)

    def test_higher_dimension(self):
        p, q = np.array([0.1, -0.2, 0.3]), np.array([-0.4, 0.2, 0.1])
        m = klein_interpolate(p, q, 0.25)
        assert klein_distance(p, m) == pytest.approx(0.25 * klein_distance(p, q), abs=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            klein_interpolate([0, 0], [0, 0, 0.1], 0.5)


class TestIsometryAndTangents:
    def test_boost_is_isometry(self):
        rng = np.random.default_rng(10)
        pts = random_klein(rng, 90, 3, radius=2.5)
        for c, x, y in zip(pts[::3], pts[1::3], pts[2::3]):
            assert np.linalg.norm(translate_to_origin(c, c)) <= 1e-14
            d = klein_distance(x, y)
            d_moved = klein_distance(translate_to_origin(c, x), translate_to_origin(c, y))
            assert abs(d - d_moved) <= 1e-11 * max(1.0, d)
            np.testing.assert_allclose(translate_from_origin(c, translate_to_origin(c, x)), x,
                                       atol=1e-12)

    def test_log_exp_roundtrip(self):
        rng = np.random.default_rng(11)
        pts = random_klein(rng, 100, 2, radius=2.0)
        for x, y in zip(pts[::2], pts[1::2]):
            v = K.log(x, y)
            assert np.linalg.norm(v) == pytest.approx(klein_distance(x, y), rel=1e-12)
            assert klein_distance(K.exp(x, v), y) <= 1e-10

    def test_angles_follow_hyperbolic_cosine_law(self):
        # angle at c from tangent directions vs angle from the three side lengths
        rng = np.random.default_rng(12)
        pts = random_klein(rng, 150, 2, radius=1.5)
        for c, y1, y2 in zip(pts[::3], pts[1::3], pts[2::3]):
            v1, v2 = K.log(c, y1), K.log(c, y2)
            cos_tangent = v1 @ v2 / (np.linalg.norm(v1) * np.linalg.norm(v2))
            cos_sides = cos_law_hyperbolic(1.0, klein_distance(c, y1), klein_distance(c, y2),
                                           klein_distance(y1, y2))
            assert cos_tangent == pytest.approx(cos_sides, abs=1e-8)

    def test_geodesic_direction_matches_log(self):
        x, y = np.array([0.4, 0.3]), np.array([-0.2, 0.5])
        m = klein_interpolate(x, y, 0.5)
        np.testing.assert_allclose(K.log(x, m), 0.5 * K.log(x, y), atol=1e-12)


@given(seed=st.integers(0, 2 ** 32 - 1), t=st.floats(0, 1))
def test_interpolation_property(seed, t):
    p, q = random_klein(np.random.default_rng(seed), 2, 2, radius=6.0)
    d = klein_distance(p, q)
    m = klein_interpolate(p, q, t)
    assert np.linalg.norm(m) < 1
    assert abs(klein_distance(p, m) - t * d) <= 1e-12 * max(1.0, d)
    assert abs(klein_distance(m, q) - (1 - t) * d) <= 1e-11 * max(1.0, d)
