"""Centrally symmetric convex bodies and their geometric primitives.

A body is exposed through its Minkowski gauge |x|_K, radial function r(u),
supporting hyperplanes, the diameter constant delta_K and (for planar bodies)
the slope parametrization t -> (x(t), y(t)) that induces the boundary weight
W(t) = x(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize_scalar

from .errors import BoundaryPointError, DimensionError
from .potential import Weight

_BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class SupportLine:
    """Supporting hyperplane {x : <x, w> = 1} touching the boundary at `base`."""

    base: np.ndarray
    normal: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))
        object.__setattr__(self, "normal", np.asarray(self.normal, dtype=float))

    @property
    def dim(self):
        return self.base.shape[0]

    def tangent_frame(self):
        """Orthonormal basis of the hyperplane's direction space."""
        w = self.normal
        d = self.dim
        if d == 2:
            e = np.array([-w[1], w[0]]) / np.linalg.norm(w)
            return [e]
        # pick the axis least aligned with w, Gram-Schmidt the rest
        axis = np.zeros(d)
        axis[int(np.argmin(np.abs(w)))] = 1.0
        e1 = axis - w * (axis @ w) / (w @ w)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(w / np.linalg.norm(w), e1)
        return [e1, e2]

    def foot(self):
        """Closest point of the hyperplane to the origin."""
        w = self.normal
        return w / (w @ w)


class ConvexBody:
    """Centrally symmetric convex body given by one of several shape variants.

    Construct through the classmethods (`disk`, `ellipse`, `polygon`,
    `pnorm_ball`, `radial_samples`).  Instances are immutable; all operations
    are pure.
    """

    def __init__(self, kind, dim, params):
        self.kind = kind
        self.dim = dim
        self.params = params
        self._delta = None
        if kind == "radial":
            self._validate_radial_convexity()

    # ---------------------------------------------------------------- factories

    @classmethod
    def disk(cls, radius=1.0):
        return cls("disk", 2, {"radius": float(radius)})

    @classmethod
    def ball(cls, radius=1.0):
        return cls("disk", 3, {"radius": float(radius)})

    @classmethod
    def ellipse(cls, *semi_axes):
        axes = np.asarray(semi_axes, dtype=float)
        if axes.ndim != 1 or axes.shape[0] not in (2, 3):
            raise DimensionError("ellipse/ellipsoid needs 2 or 3 semi-axes")
        return cls("ellipse", axes.shape[0], {"axes": axes})

    @classmethod
    def polygon(cls, vertices):
        verts = np.asarray(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2 or verts.shape[0] < 4:
            raise DimensionError("polygon needs >= 4 planar vertices")
        # order counter-clockwise by angle
        ang = np.arctan2(verts[:, 1], verts[:, 0])
        verts = verts[np.argsort(ang)]
        for v in verts:
            d = np.min(np.linalg.norm(verts + v, axis=1))
            if d > 1e-9 * (1 + np.linalg.norm(v)):
                raise ValueError("polygon is not centrally symmetric")
        forms = []
        m = verts.shape[0]
        for i in range(m):
            a, b = verts[i], verts[(i + 1) % m]
            mat = np.array([a, b])
            forms.append(np.linalg.solve(mat, np.ones(2)))
        return cls("polygon", 2, {"vertices": verts, "edge_forms": np.array(forms)})

    @classmethod
    def square(cls, half_width=1.0):
        s = float(half_width)
        return cls.polygon([(s, s), (-s, s), (-s, -s), (s, -s)])

    @classmethod
    def pnorm_ball(cls, p, semi_axes=(1.0, 1.0)):
        if p < 1:
            raise ValueError("pnorm ball needs p >= 1")
        axes = np.asarray(semi_axes, dtype=float)
        return cls("pnorm", axes.shape[0], {"p": float(p), "axes": axes})

    @classmethod
    def radial_samples(cls, angles, radii):
        """Planar body from samples of r(theta); even symmetry is enforced."""
        ang = np.asarray(angles, dtype=float) % (2 * np.pi)
        rad = np.asarray(radii, dtype=float)
        if np.any(rad <= 0):
            raise ValueError("radial samples must be positive")
        # symmetrize: r(theta) and r(theta + pi) both contribute
        ang_full = np.concatenate([ang, (ang + np.pi) % (2 * np.pi)])
        rad_full = np.concatenate([rad, rad])
        order = np.argsort(ang_full)
        ang_full, rad_full = ang_full[order], rad_full[order]
        ang_full, idx = np.unique(np.round(ang_full, 12), return_index=True)
        rad_full = rad_full[idx]
        # periodic pad for monotone cubic interpolation
        ang_ext = np.concatenate([ang_full - 2 * np.pi, ang_full, ang_full + 2 * np.pi])
        rad_ext = np.tile(rad_full, 3)
        interp = PchipInterpolator(ang_ext, rad_ext)
        return cls("radial", 2, {"interp": interp})

    @classmethod
    def from_config(cls, spec):
        """Build a body from the CLI body sub-schema."""
        kind = spec["type"]
        if kind == "disk":
            r = spec.get("radius", 1.0)
            return cls.disk(r) if spec.get("dim", 2) == 2 else cls.ball(r)
        if kind == "ellipse":
            return cls.ellipse(*spec["semi_axes"])
        if kind == "square":
            return cls.square(spec.get("half_width", 1.0))
        if kind == "polygon":
            return cls.polygon(spec["vertices"])
        if kind == "pnorm":
            return cls.pnorm_ball(spec["p"], spec.get("semi_axes", (1.0, 1.0)))
        if kind == "radial-samples":
            return cls.radial_samples(spec["angles"], spec["radii"])
        raise ValueError(f"unknown body type {kind!r}")

    # ---------------------------------------------------------------- gauge

    def gauge(self, x):
        """Minkowski functional |x|_K; vectorized over leading axes."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise DimensionError(f"point dimension {x.shape[-1]} != body dimension {self.dim}")
        if self.kind == "disk":
            return np.linalg.norm(x, axis=-1) / self.params["radius"]
        if self.kind == "ellipse":
            return np.sqrt(np.sum((x / self.params["axes"]) ** 2, axis=-1))
        if self.kind == "pnorm":
            p = self.params["p"]
            return np.sum(np.abs(x / self.params["axes"]) ** p, axis=-1) ** (1.0 / p)
        if self.kind == "polygon":
            return np.max(x @ self.params["edge_forms"].T, axis=-1)
        # radial: |x| / r(theta)
        nrm = np.linalg.norm(x, axis=-1)
        theta = np.arctan2(x[..., 1], x[..., 0]) % (2 * np.pi)
        return nrm / self.params["interp"](theta)

    def gauge_bisect(self, x, tol=1e-13, max_iter=200):
        """Bisection-on-ray oracle for the gauge (cross-check, scalar point)."""
        x = np.asarray(x, dtype=float)
        nx = np.linalg.norm(x)
        if nx == 0:
            return 0.0
        lo, hi = 0.0, 1.0
        while self.gauge(x / hi) > 1:
            hi *= 2
            if hi > 1e18:
                raise BoundaryPointError("ray never enters the body")
        for _ in range(max_iter):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if self.gauge(x / mid) > 1:
                lo = mid
            else:
                hi = mid
            if hi - lo < tol * hi:
                break
        return 0.5 * (lo + hi)

    def radial(self, u):
        """Distance from the origin to the boundary in direction u (unit or not)."""
        u = np.asarray(u, dtype=float)
        return np.linalg.norm(u, axis=-1) / self.gauge(u)

    def gauge_gradient(self, x):
        """Gradient of the gauge at x != 0 (a.e. for polytopes)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "disk":
            return x / (np.linalg.norm(x) * self.params["radius"])
        if self.kind == "ellipse":
            a = self.params["axes"]
            return (x / a ** 2) / self.gauge(x)
        if self.kind == "pnorm":
            p = self.params["p"]
            a = self.params["axes"]
            g = self.gauge(x)
            return np.sign(x) * np.abs(x / a) ** (p - 1) / a * g ** (1 - p)
        if self.kind == "polygon":
            forms = self.params["edge_forms"]
            vals = forms @ x
            best = np.max(vals)
            # vertex tie: pick the clockwise-adjacent edge, i.e. the smallest
            # index among ties in CCW edge order
            idx = int(np.flatnonzero(vals >= best - 1e-12 * (1 + abs(best)))[0])
            return forms[idx]
        # radial: central differences on the gauge
        h = 1e-6 * (1 + np.linalg.norm(x))
        grad = np.zeros(self.dim)
        for j in range(self.dim):
            e = np.zeros(self.dim)
            e[j] = h
            grad[j] = (self.gauge(x + e) - self.gauge(x - e)) / (2 * h)
        return grad

    # ---------------------------------------------------------------- derived quantities

    def delta(self):
        """delta_K = max Euclidean norm over the boundary."""
        if self._delta is not None:
            return self._delta
        if self.kind == "disk":
            val = self.params["radius"]
        elif self.kind == "ellipse":
            val = float(np.max(self.params["axes"]))
        elif self.kind == "polygon":
            val = float(np.max(np.linalg.norm(self.params["vertices"], axis=1)))
        elif self.dim == 2:
            val = self._max_radial_2d()
        else:
            val = self._max_radial_3d()
        self._delta = val
        return val

    def _max_radial_2d(self):
        thetas = np.linspace(0, np.pi, 2049)
        dirs = np.stack([np.cos(thetas), np.sin(thetas)], axis=-1)
        r = self.radial(dirs)
        t0 = thetas[int(np.argmax(r))]
        span = np.pi / 2048

        def neg_r(t):
            return -self.radial(np.array([np.cos(t), np.sin(t)]))

        res = minimize_scalar(neg_r, bounds=(t0 - span, t0 + span), method="bounded",
                              options={"xatol": 1e-12})
        return float(max(np.max(r), -res.fun))

    def _max_radial_3d(self):
        n = 4096
        i = np.arange(n)
        phi = np.arccos(1 - 2 * (i + 0.5) / n)
        lam = np.pi * (1 + 5 ** 0.5) * i
        dirs = np.stack([np.sin(phi) * np.cos(lam), np.sin(phi) * np.sin(lam),
                         np.cos(phi)], axis=-1)
        r = self.radial(dirs)
        best = dirs[int(np.argmax(r))]

        from scipy.optimize import minimize

        def neg_r(ang):
            th, ph = ang
            u = np.array([np.sin(ph) * np.cos(th), np.sin(ph) * np.sin(th), np.cos(ph)])
            return -self.radial(u)

        th0 = math.atan2(best[1], best[0])
        ph0 = math.acos(np.clip(best[2], -1, 1))
        res = minimize(neg_r, np.array([th0, ph0]), method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14})
        return float(max(np.max(r), -res.fun))

    def support_line(self, p):
        """Supporting hyperplane at boundary point p, normalized to <x, w> = 1."""
        p = np.asarray(p, dtype=float)
        g = float(self.gauge(p))
        if abs(g - 1.0) > _BOUNDARY_TOL:
            raise BoundaryPointError(f"gauge(p) = {g}, not on the boundary")
        w = self.gauge_gradient(p)
        w = w / float(w @ p)
        return SupportLine(base=p, normal=w)

    def boundary_points(self, n, seed=None):
        """n quasi-uniform boundary samples (random directions when seeded)."""
        if seed is not None:
            rng = np.random.default_rng(seed)
            if self.dim == 2:
                theta = rng.uniform(0, 2 * np.pi, n)
                dirs = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
            else:
                dirs = rng.normal(size=(n, self.dim))
                dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        elif self.dim == 2:
            theta = 2 * np.pi * (np.arange(n) + 0.5) / n
            dirs = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        else:
            i = np.arange(n)
            phi = np.arccos(1 - 2 * (i + 0.5) / n)
            lam = np.pi * (1 + 5 ** 0.5) * i
            dirs = np.stack([np.sin(phi) * np.cos(lam), np.sin(phi) * np.sin(lam),
                             np.cos(phi)], axis=-1)
        return dirs * self.radial(dirs)[:, None]

    # ---------------------------------------------------------------- slope parametrization

    def slope_point(self, t):
        """Boundary point (x(t), y(t)) with y/x = t and x > 0; t may be inf."""
        if self.dim != 2:
            raise DimensionError("slope parametrization needs a planar body")
        if np.isinf(t):
            u = np.array([0.0, 1.0])
            return u * self.radial(u)
        u = np.array([1.0, float(t)])
        return u / self.gauge(u)

    def slope_points(self, ts):
        """Vectorized slope_point over an array of finite slopes."""
        if self.dim != 2:
            raise DimensionError("slope parametrization needs a planar body")
        ts = np.asarray(ts, dtype=float)
        u = np.stack([np.ones_like(ts), ts], axis=-1)
        return u / self.gauge(u)[..., None]

    def weight(self):
        """Boundary weight W(t) = x(t) = 1/gauge((1, t)) with derivative oracle."""
        if self.dim != 2:
            raise DimensionError("boundary weight needs a planar body")
        rho = float(self.radial(np.array([0.0, 1.0])))

        def q_fn(t):
            t = np.asarray(t, dtype=float)
            u = np.stack([np.ones_like(t), t], axis=-1)
            return np.log(self.gauge(u))

        if self.kind == "disk":
            r = self.params["radius"]

            def w_fn(t):
                return r / np.sqrt(1 + np.asarray(t, dtype=float) ** 2)

            def qp_fn(t):
                t = np.asarray(t, dtype=float)
                return t / (1 + t ** 2)

            return Weight(w_fn=w_fn, qp_fn=qp_fn, rho=r, provenance="body:disk")

        if self.kind == "ellipse":
            a, b = self.params["axes"]

            def w_fn(t):
                t = np.asarray(t, dtype=float)
                return 1.0 / np.sqrt(1 / a ** 2 + t ** 2 / b ** 2)

            def qp_fn(t):
                t = np.asarray(t, dtype=float)
                return (t / b ** 2) / (1 / a ** 2 + t ** 2 / b ** 2)

            return Weight(w_fn=w_fn, qp_fn=qp_fn, rho=b, provenance="body:ellipse")

        if self.kind == "pnorm":
            p = self.params["p"]
            a, b = self.params["axes"]

            def w_fn(t):
                t = np.asarray(t, dtype=float)
                return (a ** -p + np.abs(t) ** p / b ** p) ** (-1.0 / p)

            def qp_fn(t):
                t = np.asarray(t, dtype=float)
                return np.sign(t) * np.abs(t) ** (p - 1) / b ** p / (a ** -p + np.abs(t) ** p / b ** p)

            return Weight(w_fn=w_fn, qp_fn=qp_fn, rho=b, provenance="body:pnorm")

        if self.kind == "polygon":
            forms = self.params["edge_forms"]

            def w_fn(t):
                t = np.asarray(t, dtype=float)
                vals = forms[:, 0][:, None] + np.multiply.outer(forms[:, 1], np.atleast_1d(t))
                out = 1.0 / np.max(vals, axis=0)
                return out.reshape(np.shape(t))

            def qp_fn(t):
                # active-edge formula, exact away from the kinks
                t = np.asarray(t, dtype=float)
                vals = forms[:, 0][:, None] + np.multiply.outer(forms[:, 1], np.atleast_1d(t))
                idx = np.argmax(vals, axis=0)
                wx, wy = forms[idx, 0], forms[idx, 1]
                out = wy / (wx + np.atleast_1d(t) * wy)
                return out.reshape(np.shape(t))

            return Weight(w_fn=w_fn, qp_fn=qp_fn, rho=rho, provenance="body:polygon")

        # radial samples: numeric weight with 5-point central-difference Q'
        def w_fn(t):
            return np.exp(-q_fn(t))

        def qp_fn(t):
            t = np.asarray(t, dtype=float)
            h = 1e-5
            return (q_fn(t - 2 * h) - 8 * q_fn(t - h) + 8 * q_fn(t + h)
                    - q_fn(t + 2 * h)) / (12 * h)

        return Weight(w_fn=w_fn, qp_fn=qp_fn, rho=rho, provenance="body:radial",
                      lower_accuracy=True)

    # ---------------------------------------------------------------- misc

    def is_smooth(self):
        """True for bodies accepted on the geometric (partition) route."""
        if self.kind in ("disk", "ellipse", "radial"):
            return True
        if self.kind == "pnorm":
            return self.params["p"] >= 2
        return False

    def _validate_radial_convexity(self):
        pts = self.boundary_points(512)
        edges = np.diff(np.vstack([pts, pts[:1]]), axis=0)
        cross = edges[:-1, 0] * edges[1:, 1] - edges[:-1, 1] * edges[1:, 0]
        scale = np.max(np.abs(cross))
        if np.any(cross < -1e-8 * (1 + scale)):
            raise ValueError("radial samples do not describe a convex body")

    def __repr__(self):
        return f"ConvexBody(kind={self.kind!r}, dim={self.dim})"


def gauge(body, x):
    return body.gauge(x)


def delta_K(body):
    return body.delta()


def support_line(body, p):
    return body.support_line(p)


def slope_point(body, t):
    return body.slope_point(t)


def weight_from_body(body):
    return body.weight()
