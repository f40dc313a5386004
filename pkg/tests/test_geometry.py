"""Convex-body primitives: gauge, supporting lines, slope parametrization."""

import numpy as np
import pytest

from homapprox import ConvexBody, DimensionError
from homapprox.geometry import SupportLine


def bodies():
    return {
        "disk": ConvexBody.disk(),
        "ellipse": ConvexBody.ellipse(2.0, 1.0),
        "square": ConvexBody.square(),
        "p4": ConvexBody.pnorm_ball(4.0),
    }


def test_gauge_values():
    d = ConvexBody.disk()
    assert d.gauge(np.array([[3.0, 4.0]]))[0] == pytest.approx(5.0)
    e = ConvexBody.ellipse(2.0, 1.0)
    assert e.gauge(np.array([[2.0, 0.0]]))[0] == pytest.approx(1.0)
    assert e.gauge(np.array([[0.0, 2.0]]))[0] == pytest.approx(2.0)
    s = ConvexBody.square()
    assert s.gauge(np.array([[0.5, -1.0]]))[0] == pytest.approx(1.0)
    p = ConvexBody.pnorm_ball(4.0)
    assert p.gauge(np.array([[1.0, 1.0]]))[0] == pytest.approx(2.0 ** 0.25)


def test_gauge_homogeneity():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((100, 2))
    for body in bodies().values():
        g1 = body.gauge(x)
        g3 = body.gauge(3.0 * x)
        assert np.max(np.abs(g3 - 3.0 * g1)) < 1e-10 * np.max(g1)
        assert np.max(np.abs(body.gauge(-x) - g1)) < 1e-12 * np.max(g1)


def test_gauge_bisect_matches_analytic():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((50, 2))
    for body in bodies().values():
        g = body.gauge(x)
        gb = np.array([body.gauge_bisect(p) for p in x])
        assert np.max(np.abs(g - gb)) < 1e-10 * np.max(g)


def test_dimension_mismatch_rejected():
    with pytest.raises(DimensionError):
        ConvexBody.disk().gauge(np.array([[1.0, 2.0, 3.0]]))


def test_boundary_points_on_boundary_and_deterministic():
    for body in bodies().values():
        pts = body.boundary_points(256)
        assert np.max(np.abs(body.gauge(pts) - 1.0)) < 1e-9
        again = body.boundary_points(256)
        assert np.array_equal(pts, again)
        seeded = body.boundary_points(64, seed=7)
        assert np.max(np.abs(body.gauge(seeded) - 1.0)) < 1e-9
        assert np.array_equal(seeded, body.boundary_points(64, seed=7))


def test_support_line_supports():
    rng = np.random.default_rng(2)
    for body in bodies().values():
        pts = body.boundary_points(32, seed=3)
        for p in pts:
            line = body.support_line(p)
            w = line.normal
            assert np.dot(p, w) == pytest.approx(1.0, abs=1e-8)
            # whole body on the <= 1 side
            sample = body.boundary_points(200)
            assert np.max(sample @ w) <= 1.0 + 1e-8


def test_support_line_frame():
    line = SupportLine(base=np.array([1.0, 0.0]), normal=np.array([1.0, 0.0]))
    (e,) = line.tangent_frame()
    assert np.allclose(e, [0.0, 1.0]) or np.allclose(e, [0.0, -1.0])
    assert np.allclose(line.foot(), [1.0, 0.0])


def test_slope_points_canonical_branch():
    for body in bodies().values():
        t = np.linspace(-40.0, 40.0, 101)
        pts = body.slope_points(t)
        assert np.all(pts[:, 0] > 0)
        assert np.max(np.abs(body.gauge(pts) - 1.0)) < 1e-9
        assert np.max(np.abs(pts[:, 1] / pts[:, 0] - t)) < 1e-7 * (1 + np.max(np.abs(t)))


def test_weight_is_x_coordinate():
    for body in bodies().values():
        w = body.weight()
        t = np.linspace(-25.0, 25.0, 301)
        pts = body.slope_points(t)
        assert np.max(np.abs(w.W(t) - pts[:, 0])) < 1e-10


def test_weight_rho_is_vertical_extent():
    assert ConvexBody.disk().weight().rho == pytest.approx(1.0)
    assert ConvexBody.ellipse(2.0, 1.0).weight().rho == pytest.approx(1.0)
    assert ConvexBody.ellipse(1.0, 3.0).weight().rho == pytest.approx(3.0)
    assert ConvexBody.square().weight().rho == pytest.approx(1.0)


def test_polygon_weight_handles_scalars_and_arrays():
    w = ConvexBody.square().weight()
    assert float(w.W(0.5)) == pytest.approx(1.0)
    assert float(w.W(2.0)) == pytest.approx(0.5)
    out = w.W(np.array([0.0, 1.0, -4.0]))
    assert out.shape == (3,)
    assert out[2] == pytest.approx(0.25)


def test_delta_positive_and_scale_covariant():
    for body in bodies().values():
        assert body.delta() > 0
    assert ConvexBody.disk().delta() == pytest.approx(1.0)


def test_is_smooth_classification():
    assert ConvexBody.disk().is_smooth()
    assert ConvexBody.ellipse(2.0, 1.0).is_smooth()
    assert ConvexBody.pnorm_ball(4.0).is_smooth()
    assert not ConvexBody.square().is_smooth()
    assert not ConvexBody.pnorm_ball(1.0).is_smooth()


def test_radial_samples_body():
    th = np.linspace(0, np.pi, 64, endpoint=False)
    r = 1.0 + 0.1 * np.cos(2 * th)
    body = ConvexBody.radial_samples(th, r)
    pts = body.boundary_points(100)
    assert np.max(np.abs(body.gauge(pts) - 1.0)) < 1e-8
    assert body.is_smooth()


def test_from_config_round_trip():
    b = ConvexBody.from_config({"type": "ellipse", "semi_axes": [2, 1]})
    assert b.kind == "ellipse"
    b = ConvexBody.from_config({"type": "square"})
    assert b.kind == "polygon"
    with pytest.raises(ValueError):
        ConvexBody.from_config({"type": "blob"})
