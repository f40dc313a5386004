"""Best uniform approximation by weighted polynomials W^n p_n on the line.

The family {W^n p_n : deg p_n <= n} restricted to the compactified line is
re-parametrized through the direction angle th = arctan(t): with
g(t) = W(t) sqrt(1+t^2) it equals g^n times the trigonometric polynomials of
degree <= n and parity n.  The discrete minimax problem is solved as a linear
program over a theta-uniform grid in that basis, which stays well conditioned
where raw monomials t^k fail, and converts exactly to monomial coefficients
through binomial convolutions of (1 + i t)^m (1 + t^2)^j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular
from scipy.optimize import linprog

from .errors import DegreeCapError, UnequalLimitsError, NoConvergenceError
from .polys import HomogeneousPoly

_DEGREE_CAP = 128
_GRID_DEFAULT = 4001
_LIMIT_PROBES = (1e6, 1e8)


@dataclass
class CompactifiedFunction:
    """Continuous function on the line together with its limits at infinity."""

    fn: object
    at_pos_inf: float
    at_neg_inf: float

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))

    @property
    def equal_limits(self):
        scale = max(1.0, abs(self.at_pos_inf), abs(self.at_neg_inf))
        return abs(self.at_pos_inf - self.at_neg_inf) <= 1e-9 * scale

    @classmethod
    def from_callable(cls, fn, rtol=1e-5):
        # Richardson step assuming f ~ L + c/t at the probe points; exact
        # for first-order rational decay, so limits like t/(1+t^2) -> 0
        # come out clean instead of O(1/probe).
        ratio = _LIMIT_PROBES[1] / _LIMIT_PROBES[0]
        limits = []
        for sign in (1.0, -1.0):
            v = [float(fn(np.array(sign * p))) for p in _LIMIT_PROBES]
            if not all(np.isfinite(v)):
                raise ValueError("function has no finite limit at infinity")
            if abs(v[1] - v[0]) > rtol * max(1.0, abs(v[1])):
                raise ValueError("function does not settle to a limit at infinity")
            limits.append(v[1] - (v[0] - v[1]) / (ratio - 1.0))
        return cls(fn=fn, at_pos_inf=limits[0], at_neg_inf=limits[1])


def divide_out_weight(f, w, s):
    """f / W^s as a CompactifiedFunction; rejects non-finite limits."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    if not isinstance(f, CompactifiedFunction):
        f = CompactifiedFunction.from_callable(f)

    def g(t):
        return f(t) / w.W(t) ** s

    vp = [float(g(np.array(p))) for p in _LIMIT_PROBES]
    vn = [float(g(np.array(-p))) for p in _LIMIT_PROBES]
    for v in (vp, vn):
        if not all(np.isfinite(v)) or abs(v[1] - v[0]) > 1e-4 * max(1.0, abs(v[1])):
            raise ValueError("f/W^s has no finite limit at infinity")
    return CompactifiedFunction(fn=g, at_pos_inf=vp[1], at_neg_inf=vn[1])


def _harmonics(nu):
    """(cos-degrees, sin-degrees) of the trig basis with parity nu."""
    if nu % 2 == 0:
        cos_m = list(range(0, nu + 1, 2))
        sin_m = list(range(2, nu + 1, 2))
    else:
        cos_m = list(range(1, nu + 1, 2))
        sin_m = list(range(1, nu + 1, 2))
    return cos_m, sin_m


@dataclass
class WeightedApproximant:
    """Weighted polynomial W^nu p_nu in the stable trigonometric basis."""

    nu: int
    weight: object
    gref: float
    cos_coef: np.ndarray
    sin_coef: np.ndarray
    sup_error: float
    grid_size: int
    refined: bool = False
    _mono: np.ndarray = field(default=None, repr=False)

    @property
    def n(self):
        return self.nu

    def _gtilde(self, t):
        return self.weight.W(t) * np.hypot(1.0, t) / self.gref

    def __call__(self, t):
        """Value of W^nu p_nu at finite t (vectorized)."""
        t = np.asarray(t, dtype=float)
        th = np.arctan(t)
        cos_m, sin_m = _harmonics(self.nu)
        acc = np.zeros_like(th)
        for c, m in zip(self.cos_coef, cos_m):
            acc += c * np.cos(m * th)
        for s, m in zip(self.sin_coef, sin_m):
            acc += s * np.sin(m * th)
        return self._gtilde(t) ** self.nu * acc

    def eval_points(self, pts):
        """Value of the matching homogeneous polynomial at planar points.

        With r = |p| and theta = atan2(y, x), homogeneity plus the parity of
        the trig sum give h(p) = (r/gref)^nu * (cos/sin sum at theta) for
        every point, including x <= 0; this avoids the cancellation of the
        monomial form when the coefficients are large.
        """
        pts = np.asarray(pts, dtype=float)
        r = np.hypot(pts[:, 0], pts[:, 1])
        th = np.arctan2(pts[:, 1], pts[:, 0])
        cos_m, sin_m = _harmonics(self.nu)
        acc = np.zeros_like(th)
        for c, m in zip(self.cos_coef, cos_m):
            acc += c * np.cos(m * th)
        for s, m in zip(self.sin_coef, sin_m):
            acc += s * np.sin(m * th)
        return (r / self.gref) ** self.nu * acc

    def at_inf(self, sign=1):
        """Limit of W^nu p_nu at sign*infinity."""
        th = np.pi / 2 if sign > 0 else -np.pi / 2
        cos_m, sin_m = _harmonics(self.nu)
        acc = sum(c * np.cos(m * th) for c, m in zip(self.cos_coef, cos_m))
        acc += sum(s * np.sin(m * th) for s, m in zip(self.sin_coef, sin_m))
        return (self.weight.rho / self.gref) ** self.nu * acc

    def monomial_coeffs(self):
        """Coefficients a_k with p_nu(t) = sum_k a_k t^k (stable conversion).

        cos(m th)(1+t^2)^{m/2} = Re (1+it)^m and likewise sin -> Im give
        p = sum_m [c_m Re + s_m Im]((1+it)^m) (1+t^2)^{(nu-m)/2} / gref^nu
        times the correction (g/W sqrt(1+t^2))... here exactly
        p_nu(t) = gref^{-nu} * sum over harmonics, since
        W^nu p_nu = (g/gref)^nu * trig and g = W sqrt(1+t^2).
        """
        if self._mono is not None:
            return self._mono
        nu = self.nu
        one_pt2 = np.array([1.0, 0.0, 1.0])  # 1 + t^2
        cos_m, sin_m = _harmonics(nu)
        acc = np.zeros(nu + 1)

        def add(coef, m, part):
            if coef == 0.0:
                return
            z = np.zeros(m + 1, dtype=complex)
            for k in range(m + 1):
                z[k] = math.comb(m, k) * (1j) ** k
            vec = z.real if part == "re" else z.imag
            for _ in range((nu - m) // 2):
                vec = np.convolve(vec, one_pt2)
            out = np.zeros(nu + 1)
            out[:len(vec)] = vec
            nonlocal acc
            acc = acc + coef * out

        for c, m in zip(self.cos_coef, cos_m):
            add(c, m, "re")
        for s, m in zip(self.sin_coef, sin_m):
            add(s, m, "im")
        acc = acc / self.gref ** nu
        self._mono = acc
        return acc


def _grid(m):
    """theta-uniform grid; index 0 is the infinity point, rest finite t."""
    theta = 2 * np.pi * np.arange(m) / m
    t = np.empty(m)
    t[0] = np.nan
    t[1:] = -1.0 / np.tan(theta[1:] / 2)
    thc = (theta - np.pi) / 2  # arctan(t) for the finite nodes
    return t, thc


def _basis_matrix(w, nu, gref, t, thc):
    cos_m, sin_m = _harmonics(nu)
    mfin = np.isfinite(t)
    gt = np.empty_like(t)
    gt[mfin] = w.W(t[mfin]) * np.hypot(1.0, t[mfin]) / gref
    gt[~mfin] = w.rho / gref
    mod = gt ** nu
    cols = []
    for m in cos_m:
        cols.append(mod * np.cos(m * thc))
    for m in sin_m:
        cols.append(mod * np.sin(m * thc))
    return np.stack(cols, axis=1)


def _sample_f(f, t):
    vals = np.empty_like(t)
    fin = np.isfinite(t)
    vals[fin] = f(t[fin])
    vals[~fin] = f.at_neg_inf  # theta -> 0+ corresponds to t -> -infinity
    return vals


def _solve_lp(Psi, fvals):
    m, k = Psi.shape
    # Orthonormalize the columns first: for weights with rho far below
    # max g the raw columns span many orders of magnitude and the LP
    # solver silently stalls at a false optimum.  The LP is solved in the
    # Q basis and the solution mapped back through R.
    Q, R = np.linalg.qr(Psi)
    # variables: coefficients (k) + error bound e; minimize e
    A = np.zeros((2 * m, k + 1))
    A[:m, :k] = Q
    A[m:, :k] = -Q
    A[:, k] = -1.0
    b = np.concatenate([fvals, -fvals])
    cvec = np.zeros(k + 1)
    cvec[k] = 1.0
    bounds = [(None, None)] * k + [(0, None)]
    res = linprog(cvec, A_ub=A, b_ub=b, bounds=bounds, method="highs")
    if not res.success:
        raise NoConvergenceError(f"minimax LP failed: {res.message}")
    coef = solve_triangular(R, res.x[:k])
    return coef, res.x[k]


def _weighted_lp(f, w, nu, grid=_GRID_DEFAULT):
    """Discrete weighted minimax for arbitrary parity nu (internal)."""
    if nu > _DEGREE_CAP:
        raise DegreeCapError(f"degree {nu} beyond cap {_DEGREE_CAP}")
    t, thc = _grid(grid)
    fin = np.isfinite(t)
    gref = float(np.max(w.W(t[fin]) * np.hypot(1.0, t[fin])))
    gref = max(gref, w.rho)
    Psi = _basis_matrix(w, nu, gref, t, thc)
    fvals = _sample_f(f, t)
    coef, err = _solve_lp(Psi, fvals)

    # dense verification on a 10x grid; Remez-style point injection if the
    # LP error understates the true grid error by more than 5%
    refined = False
    for _ in range(4):
        td, thd = _grid(10 * grid)
        Psid = _basis_matrix(w, nu, gref, td, thd)
        fd = _sample_f(f, td)
        resid = np.abs(Psid @ coef - fd)
        dense_err = float(np.max(resid))
        if dense_err <= 1.05 * max(err, 1e-300):
            break
        refined = True
        worst = np.argsort(resid)[-(4 * (nu + 2)):]
        Psi = np.vstack([Psi, Psid[worst]])
        fvals = np.concatenate([fvals, fd[worst]])
        coef, err = _solve_lp(Psi, fvals)
    else:
        dense_err = float(np.max(np.abs(Psid @ coef - fd)))

    cos_m, sin_m = _harmonics(nu)
    nc = len(cos_m)
    return WeightedApproximant(nu=nu, weight=w, gref=gref,
                               cos_coef=coef[:nc], sin_coef=coef[nc:],
                               sup_error=float(max(err, dense_err)),
                               grid_size=grid, refined=refined)


def _gref_for(w, nu, t):
    fin = np.isfinite(t)
    gref = float(np.max(w.W(t[fin]) * np.hypot(1.0, t[fin])))
    return max(gref, w.rho)


def _joint_lp(f_plus, f_minus, w, nu_even, nu_odd, grid=_GRID_DEFAULT):
    """Simultaneous even/odd weighted minimax over both boundary branches.

    Minimizes max over the slope grid of |even + odd - f_plus| and
    |even - odd - f_minus|, which is the sup error of the homogeneous pair
    over the whole boundary; solving the two parities jointly lets their
    residuals share extrema instead of adding up.
    """
    if max(nu_even, nu_odd) > _DEGREE_CAP:
        raise DegreeCapError(f"degree {max(nu_even, nu_odd)} beyond cap "
                             f"{_DEGREE_CAP}")
    t, thc = _grid(grid)
    gref_e = _gref_for(w, nu_even, t)
    gref_o = _gref_for(w, nu_odd, t)

    def stacked(tt, tthc):
        Pe = _basis_matrix(w, nu_even, gref_e, tt, tthc)
        Po = _basis_matrix(w, nu_odd, gref_o, tt, tthc)
        top = np.hstack([Pe, Po])
        bot = np.hstack([Pe, -Po])
        fp = _sample_f(f_plus, tt)
        fm = _sample_f(f_minus, tt)
        return np.vstack([top, bot]), np.concatenate([fp, fm])

    Psi, fvals = stacked(t, thc)
    coef, err = _solve_lp(Psi, fvals)

    refined = False
    for _ in range(4):
        td, thd = _grid(10 * grid)
        Psid, fd = stacked(td, thd)
        resid = np.abs(Psid @ coef - fd)
        dense_err = float(np.max(resid))
        if dense_err <= 1.05 * max(err, 1e-300):
            break
        refined = True
        worst = np.argsort(resid)[-(4 * (nu_even + nu_odd + 4)):]
        Psi = np.vstack([Psi, Psid[worst]])
        fvals = np.concatenate([fvals, fd[worst]])
        coef, err = _solve_lp(Psi, fvals)
    else:
        dense_err = float(np.max(np.abs(Psid @ coef - fd)))

    sup = float(max(err, dense_err))
    ke = nu_even + 1
    nce = len(_harmonics(nu_even)[0])
    nco = len(_harmonics(nu_odd)[0])
    wa_e = WeightedApproximant(nu=nu_even, weight=w, gref=gref_e,
                               cos_coef=coef[:nce], sin_coef=coef[nce:ke],
                               sup_error=sup, grid_size=grid, refined=refined)
    wa_o = WeightedApproximant(nu=nu_odd, weight=w, gref=gref_o,
                               cos_coef=coef[ke:ke + nco],
                               sin_coef=coef[ke + nco:],
                               sup_error=sup, grid_size=grid, refined=refined)
    return wa_e, wa_o


def weighted_minimax(f, w, n, grid=_GRID_DEFAULT):
    """Best discrete-minimax W^n p_n (even n) for f on the compactified line."""
    if n % 2 != 0 or n < 0:
        raise ValueError("weighted_minimax needs even nonnegative n")
    if not isinstance(f, CompactifiedFunction):
        f = CompactifiedFunction.from_callable(f)
    if not f.equal_limits:
        raise UnequalLimitsError(
            "function has different limits at +infinity and -infinity")
    return _weighted_lp(f, w, n, grid=grid)


def homog_from_weighted(wa, body):
    """Homogeneous h_n(x,y) = sum_k a_k x^{n-k} y^k matching W^n p_n.

    On the slope-parametrized boundary, h_n(x(t), y(t)) = W^n(t) p_n(t),
    including the limit a_n rho^n at t = infinity.
    """
    if wa.nu % 2 != 0:
        raise ValueError("homog_from_weighted needs an even-degree approximant")
    return _homog_from_monomial(wa.monomial_coeffs(), wa.nu)


def _homog_from_monomial(a, n):
    coeffs = {(n - k, k): float(a[k]) for k in range(n + 1) if a[k] != 0.0}
    return HomogeneousPoly(2, n, coeffs)
