"""Even homogeneous approximation of the constant 1 on a smooth boundary.

Covers the boundary with the sphere patches of the partition family, fits
each cone-projected bump on its supporting line by a truncated Chebyshev
series, and lifts every fit to an even homogeneous polynomial through powers
of the supporting form <x, w>.  The ray correction gauge(x)^{2n} is folded
into the fitted function, so the lift is exact along rays instead of relying
on the boundary staying close to the supporting line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

from .errors import UnsupportedBodyError, DimensionError
from .partition import sphere_patches
from .polys import HomogeneousPoly
from .report import ApproxReport


@dataclass
class UnityParams:
    """Degree and mesh parameters for the unity construction.

    `m` and `gamma` follow the asymptotic recipe (smallest m with
    (m*eps - d)/(1 + m + eps + d) > tau*eps, gamma = (1+m)/(1+m+eps+d));
    the default mesh uses a calibrated desk-scale schedule instead of
    n^(-gamma) because the asymptotic mesh is far below what a degree-2n
    Chebyshev fit can resolve at practical n.  Setting `gamma` or `h`
    explicitly restores the prescribed behavior.
    """

    n: int
    eps: float = 1.0
    tau: float = 0.5
    m: int = None
    gamma: float = None
    h: float = None
    fit_radius: float = 2.2   # fit interval half-length, in units of delta_K
    fit_nodes: int = 4096     # Chebyshev sample count for the projection

    def resolve(self, d):
        """(m, gamma, h) with defaults filled in for dimension d."""
        if self.n < 4:
            raise ValueError("n must be at least 4")
        m = self.m
        if m is None:
            m = 1
            while (m * self.eps - d) / (1 + m + self.eps + d) <= self.tau * self.eps:
                m += 1
        gamma = self.gamma
        if gamma is None:
            gamma = (1 + m) / (1 + m + self.eps + d)
        if self.h is not None:
            h = self.h
        elif self.gamma is not None:
            h = self.n ** -gamma
        else:
            h = float(np.clip(2.8 / self.n, 0.1, 0.35))
        if not (0 < h <= 1):
            raise ValueError("mesh size h must be in (0, 1]")
        return m, gamma, h


def _conv_power(v, p):
    """p-fold convolution power of a homogeneous coefficient vector."""
    out = np.array([1.0])
    for _ in range(p):
        out = np.convolve(out, v)
    return out


def _lift_cheb(c, w, e, lo, hi, target):
    """Homogeneous degree-`target` coefficients (powers of y ascending) of

        h(x) = sum_j c[j] * <x,w>^(target-j) * G_j(x),

    where G_j is the degree-j homogenization of T_j((2s - lo - hi)/(hi - lo))
    under s = <x,e>/<x,w>.  On the supporting line pair {<x,w> = +/-1} this
    restricts to the fitted Chebyshev sum in the tangent coordinate s.
    """
    alpha = 2.0 / (hi - lo)
    beta = -(hi + lo) / (hi - lo)
    B = np.array([alpha * e[0] + beta * w[0], alpha * e[1] + beta * w[1]])
    Wv = np.array([w[0], w[1]])
    Wsq = np.convolve(Wv, Wv)
    wpow = [np.array([1.0])]
    for _ in range(target):
        wpow.append(np.convolve(wpow[-1], Wv))

    acc = np.zeros(target + 1)
    g_prev = np.array([1.0])          # G_0
    g_cur = B.copy()                  # G_1
    for j in range(len(c)):
        if j == 0:
            gj = g_prev
        elif j == 1:
            gj = g_cur
        else:
            gj = 2 * np.convolve(B, g_cur) - np.convolve(Wsq, g_prev)
            g_prev, g_cur = g_cur, gj
        if c[j] != 0.0:
            acc += c[j] * np.convolve(gj, wpow[target - j])
    return acc


def _vec_to_hp(vec, degree):
    coeffs = {(degree - m, m): vec[m] for m in range(degree + 1)
              if vec[m] != 0.0}
    return HomogeneousPoly(2, degree, coeffs)


def _patch_coeffs(body, patch, target, radius, nodes):
    """Truncated Chebyshev series of the ray-corrected bump on its line."""
    u = patch.anchor_direction
    p_bd = u / body.gauge(u[None, :])[0]
    line = body.support_line(p_bd)
    w = np.asarray(line.normal, dtype=float)
    e = line.tangent_frame()[0]
    x_c = line.foot()
    s_k = float(np.dot(p_bd, e))
    lo, hi = s_k - radius, s_k + radius

    theta = (np.arange(nodes) + 0.5) * np.pi / nodes
    ss = lo + (hi - lo) * (np.cos(theta) + 1) / 2
    x = x_c[None, :] + ss[:, None] * e[None, :]
    r = np.linalg.norm(x, axis=1)
    b = np.atleast_1d(patch.bump(x / r[:, None]))
    vals = np.zeros(nodes)
    nz = b > 0
    if np.any(nz):
        vals[nz] = b[nz] * body.gauge(x[nz]) ** target
    c = dct(vals, type=2) / nodes
    c[0] *= 0.5
    return c[:target + 1], w, e, lo, hi


def approximate_unity(body, params):
    """Even h_2n in H^2_2n with h_2n ~ 1 on the boundary of a smooth body."""
    if body.dim != 2:
        raise DimensionError("unity construction implemented for planar bodies")
    if not body.is_smooth():
        raise UnsupportedBodyError(
            "body is not smooth enough for the supporting-line construction; "
            "use the planar weighted route instead")
    n = params.n
    _, _, h = params.resolve(body.dim)
    radius = params.fit_radius * body.delta()
    target = 2 * n

    acc = np.zeros(target + 1)
    for patch in sphere_patches(h, 2):
        c, w, e, lo, hi = _patch_coeffs(body, patch, target, radius,
                                        params.fit_nodes)
        acc += _lift_cheb(c, w, e, lo, hi, target)
    return _vec_to_hp(acc, target)


def unity_error_report(body, hp, samples=2000):
    """Sup/mean of |1 - hp| over a deterministic quasi-uniform boundary set."""
    if hp.degree % 2 != 0:
        raise ValueError("unity polynomial must have even degree")
    pts = body.boundary_points(samples)
    err = np.abs(1.0 - hp(pts))
    return ApproxReport(degree=hp.degree, sup_error=float(np.max(err)),
                        mean_error=float(np.mean(err)), n_samples=samples)
