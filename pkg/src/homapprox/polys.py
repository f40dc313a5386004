"""Dense polynomial infrastructure.

Homogeneous polynomials with exponent-tuple coefficient maps, dense
low-degree polynomials, Chebyshev interpolation on intervals/rectangles,
the even-monomial homogenization lift through a supporting hyperplane,
and the classical off-interval growth bound (2|x|/a)^n.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, OddMonomialError, DegreeCapError

_COEFF_TOL = 0.0  # exact-zero coefficients are dropped from storage


def _clean(coeffs):
    return {k: float(v) for k, v in coeffs.items() if v != 0.0}


def _eval_table(exps, coeffs, x, chunk=4096):
    """Evaluate sum_j c_j * prod x^exps_j at rows of x."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if exps.size == 0:
        return np.zeros(x.shape[0])
    out = np.empty(x.shape[0])
    for lo in range(0, x.shape[0], chunk):
        xs = x[lo:lo + chunk]
        monos = np.prod(xs[:, None, :] ** exps[None, :, :], axis=2)
        out[lo:lo + chunk] = monos @ coeffs
    return out


@dataclass(frozen=True)
class HomogeneousPoly:
    """Homogeneous polynomial of fixed total degree with dense storage."""

    dim: int
    degree: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        for k, v in self.coeffs.items():
            if len(k) != self.dim:
                raise DimensionError(f"exponent {k} has wrong length")
            if sum(k) != self.degree:
                raise ValueError(f"exponent {k} does not sum to {self.degree}")
        object.__setattr__(self, "coeffs", _clean(self.coeffs))

    def _table(self):
        keys = sorted(self.coeffs)
        exps = np.array(keys, dtype=float).reshape(len(keys), self.dim)
        vals = np.array([self.coeffs[k] for k in keys])
        return exps, vals

    def __call__(self, x):
        exps, vals = self._table()
        out = _eval_table(exps, vals, x)
        return out if out.shape[0] > 1 else float(out[0])

    def add(self, other):
        if (other.dim, other.degree) != (self.dim, self.degree):
            raise DimensionError("mismatched dimension or degree")
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0.0) + v
        return HomogeneousPoly(self.dim, self.degree, c)

    def scale(self, a):
        return HomogeneousPoly(self.dim, self.degree,
                               {k: a * v for k, v in self.coeffs.items()})

    def multiply(self, other):
        if other.dim != self.dim:
            raise DimensionError("mismatched dimension")
        c = {}
        for ka, va in self.coeffs.items():
            for kb, vb in other.coeffs.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                c[k] = c.get(k, 0.0) + va * vb
        return HomogeneousPoly(self.dim, self.degree + other.degree, c)

    def norm1(self):
        return sum(abs(v) for v in self.coeffs.values())

    def to_json_obj(self):
        return [{"exponents": list(k), "coeff": self.coeffs[k]}
                for k in sorted(self.coeffs)]

    @classmethod
    def from_json_obj(cls, dim, degree, obj):
        return cls(dim, degree,
                   {tuple(e["exponents"]): e["coeff"] for e in obj})

    @classmethod
    def zero(cls, dim, degree):
        return cls(dim, degree, {})


@dataclass(frozen=True)
class DensePoly:
    """Polynomial of bounded total degree, exponent-tuple storage."""

    dim: int
    coeffs: dict = field(default_factory=dict)
    # optional Chebyshev data (coeffs, domains) kept by cheb_fit: the same
    # polynomial in a numerically stable basis, used only for evaluation
    cheb: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for k in self.coeffs:
            if len(k) != self.dim:
                raise DimensionError(f"exponent {k} has wrong length")
        object.__setattr__(self, "coeffs", _clean(self.coeffs))

    @property
    def degree(self):
        return max((sum(k) for k in self.coeffs), default=0)

    def _table(self):
        keys = sorted(self.coeffs)
        exps = np.array(keys, dtype=float).reshape(len(keys), self.dim)
        vals = np.array([self.coeffs[k] for k in keys])
        return exps, vals

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.dim == 1 and x.ndim <= 1:
            x = np.atleast_1d(x)[:, None]
        x = np.atleast_2d(x)
        if self.cheb is not None:
            out = self._eval_cheb(x)
        else:
            exps, vals = self._table()
            out = _eval_table(exps, vals, x)
        return out if out.shape[0] > 1 else float(out[0])

    def _eval_cheb(self, x):
        c, domains = self.cheb
        if self.dim == 1:
            (lo, hi), = domains
            u = (2 * x[:, 0] - lo - hi) / (hi - lo)
            return np.polynomial.chebyshev.chebval(u, c)
        (lo1, hi1), (lo2, hi2) = domains
        u = (2 * x[:, 0] - lo1 - hi1) / (hi1 - lo1)
        v = (2 * x[:, 1] - lo2 - hi2) / (hi2 - lo2)
        return np.polynomial.chebyshev.chebval2d(u, v, c)

    def is_even(self):
        return all(sum(k) % 2 == 0 for k in self.coeffs)

    def norm1(self):
        return sum(abs(v) for v in self.coeffs.values())

    def to_json_obj(self):
        return [{"exponents": list(k), "coeff": self.coeffs[k]}
                for k in sorted(self.coeffs)]

    @classmethod
    def from_json_obj(cls, dim, obj):
        return cls(dim, {tuple(e["exponents"]): e["coeff"] for e in obj})


def eval_homogeneous(hp, x):
    """Evaluate a homogeneous polynomial at one point or an array of rows."""
    return hp(x)


def linear_form_power(w, n, dim=None):
    """<w, x>^n expanded as a HomogeneousPoly via the multinomial theorem."""
    w = np.asarray(w, dtype=float)
    d = dim if dim is not None else w.shape[0]
    if w.shape[0] != d:
        raise DimensionError("form length does not match dimension")
    coeffs = {}
    fact_n = math.factorial(n)
    for k in itertools.combinations_with_replacement(range(d), n):
        exp = [0] * d
        for j in k:
            exp[j] += 1
        denom = 1
        val = fact_n
        for e in exp:
            denom *= math.factorial(e)
        c = val / denom
        for j, e in enumerate(exp):
            c *= w[j] ** e
        coeffs[tuple(exp)] = c
    if n == 0:
        coeffs = {tuple([0] * d): 1.0}
    return HomogeneousPoly(d, n, coeffs)


def homogenize_even(p, line, target_degree):
    """Lift an even DensePoly to H^d_{2n} by padding with <x,w> powers.

    On the hyperplane pair {<x,w> = +/-1} the result agrees with p because
    every inserted factor <x,w>^{2j} equals 1 there.
    """
    if target_degree % 2 != 0:
        raise ValueError("target degree must be even")
    if not p.is_even():
        raise OddMonomialError("polynomial has odd-degree monomials")
    if p.degree > target_degree:
        raise DegreeCapError(
            f"target degree {target_degree} below polynomial degree {p.degree}")
    w = np.asarray(line.normal, dtype=float)
    if w.shape[0] != p.dim:
        raise DimensionError("line normal does not match polynomial dimension")
    out = HomogeneousPoly.zero(p.dim, target_degree)
    by_degree = {}
    for k, v in p.coeffs.items():
        by_degree.setdefault(sum(k), {})[k] = v
    for deg, part in sorted(by_degree.items()):
        mono = HomogeneousPoly(p.dim, deg, part)
        pad = linear_form_power(w, target_degree - deg, dim=p.dim)
        out = out.add(mono.multiply(pad))
    return out


def _cheb_nodes(n):
    """Chebyshev-Gauss nodes (first kind), n+1 points on [-1,1]."""
    j = np.arange(n + 1)
    return np.cos((2 * j + 1) * np.pi / (2 * (n + 1)))


def _cheb_coeffs_1d(vals):
    """Chebyshev coefficients from values at first-kind nodes."""
    n = len(vals) - 1
    j = np.arange(n + 1)
    theta = (2 * j + 1) * np.pi / (2 * (n + 1))
    T = np.cos(np.outer(np.arange(n + 1), theta))
    c = (2.0 / (n + 1)) * T @ vals
    c[0] /= 2.0
    return c


def _monomial_maps(degree, lo, hi):
    """Matrix M with T_j(u(s)) = sum_m M[j, m] s^m on s in [lo, hi]."""
    M = np.zeros((degree + 1, degree + 1))
    for j in range(degree + 1):
        unit = np.zeros(j + 1)
        unit[j] = 1.0
        poly = np.polynomial.chebyshev.Chebyshev(unit, domain=[lo, hi])
        mono = poly.convert(kind=np.polynomial.polynomial.Polynomial)
        M[j, :len(mono.coef)] = mono.coef
    return M


def _zero_odd_if_symmetric(c, lo, hi, scale):
    if abs(lo + hi) > 1e-14 * max(1.0, abs(hi)):
        return c
    odd = c[1::2]
    if np.all(np.abs(odd) < 1e-12 * max(1.0, scale)):
        c = c.copy()
        c[1::2] = 0.0
    return c


def cheb_fit(f, box, degree):
    """Tensor Chebyshev interpolant of f on an interval or rectangle.

    box is (lo, hi) for one variable or ((lo1,hi1),(lo2,hi2)) for two;
    returns a DensePoly in the box coordinates (monomial basis).
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    box = np.asarray(box, dtype=float)
    if box.ndim == 1:
        lo, hi = box
        u = _cheb_nodes(degree)
        s = lo + (hi - lo) * (u + 1) / 2
        vals = np.asarray([f(si) for si in s], dtype=float)
        c = _cheb_coeffs_1d(vals)
        c = _zero_odd_if_symmetric(c, lo, hi, np.max(np.abs(vals)))
        mono = np.polynomial.chebyshev.Chebyshev(c, domain=[lo, hi]).convert(
            kind=np.polynomial.polynomial.Polynomial).coef
        return DensePoly(1, {(m,): mono[m] for m in range(len(mono))},
                         cheb=(c, ((lo, hi),)))
    (lo1, hi1), (lo2, hi2) = box
    u = _cheb_nodes(degree)
    s1 = lo1 + (hi1 - lo1) * (u + 1) / 2
    s2 = lo2 + (hi2 - lo2) * (u + 1) / 2
    vals = np.array([[f(a, b) for b in s2] for a in s1], dtype=float)
    C = np.apply_along_axis(_cheb_coeffs_1d, 0, vals)
    C = np.apply_along_axis(_cheb_coeffs_1d, 1, C)
    scale = np.max(np.abs(vals))
    if abs(lo1 + hi1) < 1e-14 * max(1.0, abs(hi1)) and \
       abs(lo2 + hi2) < 1e-14 * max(1.0, abs(hi2)):
        mask = (np.add.outer(np.arange(degree + 1), np.arange(degree + 1)) % 2
                == 1)
        if np.all(np.abs(C[mask]) < 1e-12 * max(1.0, scale)):
            C = C.copy()
            C[mask] = 0.0
    M1 = _monomial_maps(degree, lo1, hi1)
    M2 = _monomial_maps(degree, lo2, hi2)
    A = M1.T @ C @ M2
    coeffs = {(m, p): A[m, p] for m in range(degree + 1)
              for p in range(degree + 1) if A[m, p] != 0.0}
    return DensePoly(2, coeffs, cheb=(C, ((lo1, hi1), (lo2, hi2))))


def growth_bound(n, a, x):
    """Certified off-interval bound (2|x|/a)^n for sup-norm-1 polynomials."""
    if a <= 0:
        raise ValueError("a must be positive")
    if abs(x) <= a:
        raise ValueError("growth bound requires |x| > a")
    return (2.0 * abs(x) / a) ** n


def growth_bound_check(p, a, x):
    """(|p(x)|, bound, ok) for a univariate DensePoly with ||p||_[-a,a] <= 1."""
    if p.dim != 1:
        raise DimensionError("growth bound applies to univariate polynomials")
    b = growth_bound(p.degree, a, x)
    val = abs(float(p(x)))
    return val, b, val <= b * (1 + 1e-12)
