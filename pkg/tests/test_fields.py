"""Field algebra and time families."""

import numpy as np

from subharnack import jets
from subharnack.fields import (SpaceTimeField, coordinate, const,
                               random_polytrig_field,
                               random_polytrig_spacetime)


def test_field_arithmetic_and_partials():
    x = coordinate(3, 0)
    y = coordinate(3, 1)
    f = x * x * y + (2.0 * y).apply(jets.sin)
    pts = np.array([[0.5, -0.3, 0.1], [1.0, 2.0, 0.0]])
    expect = pts[:, 0] ** 2 * pts[:, 1] + np.sin(2 * pts[:, 1])
    assert np.allclose(f.value(pts), expect, atol=1e-14)
    fx = f.partial(0)
    assert fx.order == 2 and fx.depth == 1
    assert np.allclose(fx.value(pts), 2 * pts[:, 0] * pts[:, 1], atol=1e-14)
    fxy = fx.partial(1)
    assert np.allclose(fxy.value(pts), 2 * pts[:, 0], atol=1e-14)


def test_spacetime_at_and_dt():
    # f(t, x, y, z) = x + t*y + sin(t)*z
    def fn(tj, xs):
        return xs[0] + tj * xs[1] + jets.sin(tj) * xs[2]

    f = SpaceTimeField(3, fn)
    pts = np.array([[0.2, 0.7, -0.4]])
    t = 0.3
    at = f.at(t)
    assert np.allclose(at.value(pts), 0.2 + t * 0.7 + np.sin(t) * (-0.4))
    g = at.jet(pts, order=1).g
    assert np.allclose(g[0], [1.0, t, np.sin(t)], atol=1e-14)
    dt = f.dt(t)
    assert dt.order == 2
    assert np.allclose(dt.value(pts), 0.7 + np.cos(t) * (-0.4), atol=1e-14)
    # spatial derivatives of the time derivative
    gd = dt.jet(pts, order=1).g
    assert np.allclose(gd[0], [0.0, 1.0, np.cos(t)], atol=1e-14)


def test_random_family_reproducible():
    a = random_polytrig_field(3, np.random.default_rng(42))
    b = random_polytrig_field(3, np.random.default_rng(42))
    pts = np.random.default_rng(0).uniform(-1, 1, size=(6, 3))
    assert np.array_equal(a.value(pts), b.value(pts))


def test_random_family_batched_coefficients():
    rng = np.random.default_rng(1)
    f = random_polytrig_field(3, rng, batch_shape=(4,))
    pts = np.random.default_rng(2).uniform(-1, 1, size=(4, 3))
    vals = f.value(pts)
    assert vals.shape == (4,)
    # different batch entries are genuinely different draws
    assert np.std(vals) > 0


def test_random_spacetime_family():
    st = random_polytrig_spacetime(3, np.random.default_rng(5))
    pts = np.array([[0.1, 0.2, 0.3]])
    v0 = st.at(0.0).value(pts)
    v1 = st.at(0.5).value(pts)
    assert not np.allclose(v0, v1)
    # dt at 0 equals finite difference of at()
    h = 1e-6
    fd = (st.at(h).value(pts) - st.at(-h).value(pts)) / (2 * h)
    assert np.allclose(st.dt(0.0).value(pts), fd, atol=1e-9)
