"""End-to-end approximation of f on Bd(K) by pairs of homogeneous polynomials.

Two routes produce an (even, odd) homogeneous pair whose sum approximates a
continuous f on the boundary of a centrally symmetric planar body:

* planar-potential route: even/odd split of f, slope-line transform, and a
  weighted polynomial minimax for each parity;
* geometric route (smooth bodies): a least-squares Weierstrass stage followed
  by multiplication of each graded part with an approximation of unity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import EscalationError
from .polys import HomogeneousPoly
from .report import ApproxReport
from .unity import UnityParams, approximate_unity
from .weighted_approx import (CompactifiedFunction, _joint_lp,
                              _homog_from_monomial)

_VALIDATION_SEED = 0xB17E


@dataclass
class HomPair:
    """Pair (h_even, h_odd) of homogeneous polynomials with an error report."""

    h_even: HomogeneousPoly
    h_odd: HomogeneousPoly
    route: str
    report: ApproxReport
    _eval: object = None

    def __call__(self, x):
        if self._eval is not None:
            return self._eval(np.asarray(x, dtype=float))
        return self.h_even(x) + self.h_odd(x)

    @property
    def degrees(self):
        return self.h_even.degree, self.h_odd.degree


def _pair_report(body, f, h_even, h_odd, samples=2000, pair_eval=None):
    if pair_eval is None:
        pair_eval = lambda p: h_even(p) + h_odd(p)
    pts = body.boundary_points(samples)
    resid = np.abs(f(pts) - pair_eval(pts))
    fresh = body.boundary_points(samples // 2, seed=_VALIDATION_SEED)
    fresh_resid = np.abs(f(fresh) - pair_eval(fresh))
    return ApproxReport(
        degree=max(h_even.degree, h_odd.degree),
        sup_error=float(np.max(resid)),
        mean_error=float(np.mean(resid)),
        n_samples=samples,
        extras={"validation_sup_error": float(np.max(fresh_resid))},
    )


def approximate_theorem2(body, f, n):
    """Planar route: weighted-minimax approximation of each parity part."""
    if body.dim != 2:
        raise ValueError("planar route requires a 2-D body")
    if n < 5:
        raise ValueError("n must be at least 5")
    n_even = n if n % 2 == 0 else n - 1
    n_odd = n - 1 if n % 2 == 0 else n

    w = body.weight()
    rho = w.rho
    top = np.array([[0.0, rho]])

    def on_plus(t):
        return f(body.slope_points(np.asarray(t, dtype=float)))

    def on_minus(t):
        return f(-body.slope_points(np.asarray(t, dtype=float)))

    # the theta -> 0+ grid node is the t -> -infinity limit: (0, -rho) on
    # the canonical branch and (0, rho) on the mirrored one
    Fp = CompactifiedFunction(on_plus, float(f(top)[0]), float(f(-top)[0]))
    Fm = CompactifiedFunction(on_minus, float(f(-top)[0]), float(f(top)[0]))
    wa_e, wa_o = _joint_lp(Fp, Fm, w, n_even, n_odd)
    h_even = _homog_from_monomial(wa_e.monomial_coeffs(), n_even)
    h_odd = _homog_from_monomial(wa_o.monomial_coeffs(), n_odd)

    def pair_eval(pts):
        return wa_e.eval_points(pts) + wa_o.eval_points(pts)

    report = _pair_report(body, f, h_even, h_odd, pair_eval=pair_eval)
    report.extras["joint_sup_error"] = wa_e.sup_error
    return HomPair(h_even=h_even, h_odd=h_odd, route="planar-potential",
                   report=report, _eval=pair_eval)


def _graded_parts(dim, coeffs):
    parts = {}
    for k, v in coeffs.items():
        parts.setdefault(sum(k), {})[k] = v
    return {deg: HomogeneousPoly(dim, deg, c) for deg, c in sorted(parts.items())}


def _weierstrass_fit(body, f, m, tik=1e-10):
    """Penalized least-squares polynomial of total degree m on the boundary."""
    samples = 16 * (m + 1) ** 2
    pts = body.boundary_points(samples)
    exps = [e for e in itertools.product(range(m + 1), repeat=2)
            if sum(e) <= m]
    exps.sort()
    V = np.stack([pts[:, 0] ** a * pts[:, 1] ** b for a, b in exps], axis=1)
    fv = f(pts)
    A = V.T @ V + tik * np.eye(V.shape[1])
    coef = np.linalg.solve(A, V.T @ fv)
    resid = float(np.max(np.abs(V @ coef - fv)))
    coeffs = {e: c for e, c in zip(exps, coef)}
    return coeffs, resid


def approximate_theorem1(body, f, n, m=8, delta=1e-3, unity_params=None):
    """Geometric route: Weierstrass stage + unity multipliers per graded part."""
    m_cap = min(24, 2 * (n - 4))
    if m > m_cap:
        raise ValueError(f"initial Weierstrass degree {m} exceeds cap {m_cap}")
    coeffs, resid = _weierstrass_fit(body, f, m)
    while resid > delta and m + 2 <= m_cap:
        m += 2
        coeffs, resid = _weierstrass_fit(body, f, m)
    if resid > delta:
        raise EscalationError(
            f"Weierstrass stage stalled at degree {m} with error {resid:.3e}",
            achieved=resid)

    parts = _graded_parts(2, coeffs)
    unity_cache = {}
    h_even = HomogeneousPoly.zero(2, 2 * n)
    h_odd = HomogeneousPoly.zero(2, 2 * n + 1)
    bound = 0.0
    pts = body.boundary_points(1000)
    for deg, hj in parts.items():
        n_u = n - deg // 2
        if n_u not in unity_cache:
            params = unity_params(n_u) if unity_params else UnityParams(n=n_u)
            u = approximate_unity(body, params)
            uerr = float(np.max(np.abs(1.0 - u(pts))))
            unity_cache[n_u] = (u, uerr)
        u, uerr = unity_cache[n_u]
        lifted = hj.multiply(u)
        if deg % 2 == 0:
            h_even = h_even.add(lifted)
        else:
            h_odd = h_odd.add(lifted)
        bound += float(np.max(np.abs(hj(pts)))) * uerr

    report = _pair_report(body, f, h_even, h_odd)
    report.extras["weierstrass_degree"] = m
    report.extras["weierstrass_sup_error"] = resid
    report.extras["unity_triangle_bound"] = bound
    return HomPair(h_even=h_even, h_odd=h_odd, route="geometric",
                   report=report)
