"""Meijer G evaluation for the shapes G^{m,n}_{p,p} and G^{p+1,0}_{p,p+1}.

Three evaluation paths:
  * Slater sums of pF_{p-1} series (inside / outside the unit circle),
  * a log-variable series for G^{p,0}_{p,p}(x), x in (0,1), built from the
    large-s expansion of its Mellin transform; it needs no genericity,
  * a Mellin-Barnes contour integral, used only as an independent oracle.
"""
import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_jacobi

from .config import DEFAULT
from .core import ParameterVector, pvec, gamma_ratio, rgamma, log_gamma, clusters, integer_separated
from .errors import (ContourError, DegenerateParameterError, DegenerateParameterWarning,
                     QuadratureError, UnitCircleError)
from .pfq import hyp, _richardson_perturb


@dataclass(frozen=True)
class GFunctionSpec:
    m: int
    n: int
    p: int
    q: int
    top: ParameterVector
    bottom: ParameterVector

    def __post_init__(self):
        object.__setattr__(self, "top", pvec(self.top))
        object.__setattr__(self, "bottom", pvec(self.bottom))
        for v in (self.m, self.n, self.p, self.q):
            if int(v) != v or v < 0:
                raise ValueError("orders must be nonnegative integers")
        if len(self.top) != self.p or len(self.bottom) != self.q:
            raise ValueError(f"row lengths {len(self.top)},{len(self.bottom)} "
                             f"do not match p={self.p}, q={self.q}")
        if self.m > self.q or self.n > self.p:
            raise ValueError("need m <= q and n <= p")
        if not (self.q == self.p or (self.q == self.p + 1 and self.n == 0)):
            raise ValueError("supported shapes: q = p, or q = p+1 with n = 0")

    @property
    def generic(self):
        b = self.bottom
        return not any(integer_separated(b[i], b[j], DEFAULT.degeneracy)
                       for i in range(len(b)) for j in range(i + 1, len(b)))

    @property
    def at(self):
        return self.top[:self.n]

    @property
    def ab(self):
        return self.top[self.n:]

    @property
    def bt(self):
        return self.bottom[:self.m]

    @property
    def bb(self):
        return self.bottom[self.m:]


def gspec(m, n, top, bottom):
    top, bottom = pvec(top), pvec(bottom)
    return GFunctionSpec(m, n, len(top), len(bottom), top, bottom)


@dataclass(frozen=True)
class SlaterConstants:
    A: tuple
    B: tuple
    M: tuple = ()


def _a_const(spec, j):
    bj = spec.bottom[j]
    bt = [v - bj for i, v in enumerate(spec.bt) if i != j]
    return gamma_ratio(bt + [1.0 - v + bj for v in spec.at],
                       [1.0 - v + bj for v in spec.bb] + [v - bj for v in spec.ab],
                       den_poles="zero")


def _b_const(spec, j):
    aj = spec.top[j]
    at = [aj - v for i, v in enumerate(spec.at) if i != j]
    return gamma_ratio(at + [1.0 + v - aj for v in spec.bt],
                       [1.0 + v - aj for v in spec.ab] + [aj - v for v in spec.bb],
                       den_poles="zero")


def slater_constants(spec):
    """A_j (j <= m) and B_j (j <= n) of the Slater expansion (q = p)."""
    if spec.q != spec.p:
        raise ValueError("Slater constants defined here for q = p")
    return SlaterConstants(tuple(_a_const(spec, j) for j in range(spec.m)),
                           tuple(_b_const(spec, j) for j in range(spec.n)))


def sum_integral_spec(a, b, alpha, beta, m):
    """G^{p,p}_{2p,2p}(x | 1-a-m, b+alpha+beta; a+alpha+beta, 1-b-m)."""
    a, b = pvec(a), pvec(b)
    s = alpha + beta
    top = ParameterVector([1.0 - v - m for v in a] + [v + s for v in b])
    bottom = ParameterVector([v + s for v in a] + [1.0 - v - m for v in b])
    p = len(a)
    return GFunctionSpec(p, p, 2 * p, 2 * p, top, bottom)


def sum_integral_constants(a, b, alpha, beta, m):
    """Slater constants of sum_integral_spec, plus the direct closed form M_j.

    M_j = Gamma(a_[j]-a_j) Gamma(a+m+alpha+beta+a_j) / (Gamma(b+m+alpha+beta+a_j) Gamma(b-a_j)).
    """
    a, b = pvec(a), pvec(b)
    s = alpha + beta + m
    M = []
    for j, aj in enumerate(a):
        num = [v - aj for i, v in enumerate(a) if i != j] + [v + s + aj for v in a]
        den = [v + s + aj for v in b] + [v - aj for v in b]
        M.append(gamma_ratio(num, den, den_poles="zero"))
    c = slater_constants(sum_integral_spec(a, b, alpha, beta, m))
    return SlaterConstants(c.A, c.B, tuple(M))


def g_shift(spec, mu):
    """Rows shifted by mu: G(x | rows+mu) = x^mu G(x | rows)."""
    if mu == 0:
        return spec
    return GFunctionSpec(spec.m, spec.n, spec.p, spec.q,
                         spec.top.shifted(mu), spec.bottom.shifted(mu))


_SIDES = {"real": 0, "above": 1, "below": -1, 0: 0, 1: 1, -1: -1}


def _slater_sum(spec, x, tol, side):
    """Raw Slater sum at z = x e^{i pi side}; no degeneracy checks."""
    p, m, n = spec.p, spec.m, spec.n
    sgn = -1.0 if (p - m - n) % 2 else 1.0
    lx = math.log(x)
    total = 0j
    if x < 1.0:
        for j in range(m):
            c = _a_const(spec, j)
            if c == 0.0:
                continue
            bj = spec.bottom[j]
            upper = [1.0 - v + bj for v in spec.top]
            lower = [1.0 - v + bj for i, v in enumerate(spec.bottom) if i != j]
            f = hyp(upper, lower, sgn * x, tol)
            total += c * cmath.exp(bj * complex(lx, math.pi * side)) * f
    else:
        w = 1.0 / x
        for j in range(n):
            c = _b_const(spec, j)
            if c == 0.0:
                continue
            aj = spec.top[j]
            upper = [1.0 + v - aj for v in spec.bottom]
            lower = [1.0 + v - aj for i, v in enumerate(spec.top) if i != j]
            f = hyp(upper, lower, sgn * w, tol)
            total += c * cmath.exp((aj - 1.0) * complex(lx, math.pi * side)) * f
    return total.real if side == 0 else total


def _check_point(x, tol):
    x = float(x)
    if not x > 0.0:
        raise ValueError("argument must be positive")
    if abs(x - 1.0) < tol.unit_circle:
        raise UnitCircleError(f"x={x!r} is within {tol.unit_circle} of the unit circle")
    return x


def g_slater(spec, x, side="real", tol=DEFAULT):
    """G^{m,n}_{p,p}(x) from its Slater expansion; strict about degeneracy."""
    if spec.q != spec.p:
        raise ValueError("g_slater needs q = p")
    x = _check_point(x, tol)
    active = spec.bt if x < 1.0 else spec.at
    if clusters(list(active), tol.degeneracy):
        raise DegenerateParameterError(
            f"integer-separated parameters {list(active)} make the Slater "
            "constants singular; use meijer_g for the perturbed evaluation")
    return _slater_sum(spec, x, tol, _SIDES[side])


def _slater_robust(spec, x, tol, side=0):
    x = _check_point(x, tol)
    if x < 1.0:
        idx = list(range(spec.m))
        vals = list(spec.bt)
    else:
        idx = list(range(spec.n))
        vals = list(spec.at)
    groups = clusters(vals, tol.split_threshold)
    if not groups:
        return _slater_sum(spec, x, tol, side)
    warnings.warn(f"integer-separated parameters {vals}: using perturbation",
                  DegenerateParameterWarning, stacklevel=3)
    row = "bottom" if x < 1.0 else "top"
    full = list(getattr(spec, row))

    def fn(v):
        new = full[:]
        for k, i in enumerate(idx):
            new[i] = v[k]
        s = GFunctionSpec(spec.m, spec.n, spec.p, spec.q,
                          new if row == "top" else spec.top,
                          new if row == "bottom" else spec.bottom)
        return _slater_sum(s, x, tol, side)

    return _richardson_perturb(fn, vals, groups, tol)


# ---- log-variable series for G^{p,0}_{p,p} ---------------------------------

@lru_cache(maxsize=None)
def _bernoulli(N):
    """B_0..B_N as floats (B_1 = -1/2), exact Akiyama-Tanigawa recurrence."""
    A = [Fraction(0)] * (N + 1)
    out = []
    for mm in range(N + 1):
        A[mm] = Fraction(1, mm + 1)
        for j in range(mm, 0, -1):
            A[j - 1] = j * (A[j - 1] - A[j])
        out.append(A[0])
    out[1] = Fraction(-1, 2)
    return tuple(float(v) for v in out)


def _bern_poly(n, x, bern):
    return sum(math.comb(n, k) * bern[k] * x ** (n - k) for k in range(n + 1))


_TAU_TERMS = 120


@lru_cache(maxsize=256)
def _tau_coefficients(top, bottom):
    """(mu, psi, c_k) with G^{p,0}_{p,p}(x) = x^mu tau^(psi-1) sum c_k tau^k, tau=-log x."""
    p = len(top)
    mu = (sum(top) + sum(bottom)) / (2 * p)
    T = [v - mu for v in top]
    B = [v - mu for v in bottom]
    psi = sum(T) - sum(B)
    K = _TAU_TERMS
    bern = _bernoulli(K + 2)
    d = [0.0] * (K + 1)
    for n in range(1, K + 1):
        s = sum(_bern_poly(n + 1, bb, bern) - _bern_poly(n + 1, tt, bern) for bb, tt in zip(B, T))
        d[n] = (-1) ** (n + 1) * s / (n * (n + 1))
    e = [1.0] + [0.0] * K
    for k in range(1, K + 1):
        e[k] = sum(n * d[n] * e[k - n] for n in range(1, k + 1)) / k
    c = np.array([e[k] * rgamma(psi + k) for k in range(K + 1)])
    return mu, psi, c


def _tau_regular(spec, tau):
    """G^{p,0}_{p,p}(e^-tau) / tau^(psi-1); smooth in tau >= 0. Accepts arrays."""
    mu, psi, c = _tau_coefficients(tuple(spec.top), tuple(spec.bottom))
    tau = np.asarray(tau, dtype=float)
    return np.exp(-mu * tau) * np.polyval(c[::-1], tau)


def g_tau_series(spec, x):
    """G^{p,0}_{p,p}(x) for 0 < x < 1 from the log-variable series."""
    if not (spec.q == spec.p and spec.m == spec.p and spec.n == 0):
        raise ValueError("log-variable series needs G^{p,0}_{p,p}")
    mu, psi, _ = _tau_coefficients(tuple(spec.top), tuple(spec.bottom))
    tau = -math.log(x)
    return float(_tau_regular(spec, tau)) * tau ** (psi - 1.0)


def _psi(spec):
    return sum(spec.top) - sum(spec.bottom)


# ---- q = p + 1 ---------------------------------------------------------------

def _qp1_slater(spec, t, tol):
    T, B = list(spec.top), list(spec.bottom)
    total = 0.0
    for k, bk in enumerate(B):
        rest = [v for i, v in enumerate(B) if i != k]
        c = gamma_ratio([v - bk for v in rest], [v - bk for v in T], den_poles="zero")
        if c == 0.0:
            continue
        f = hyp([1.0 + bk - v for v in T], [1.0 + bk - v for v in rest], -t, tol)
        total += c * t ** bk * f
    return total


@lru_cache(maxsize=256)
def _jacobi_rule(beta, n=64):
    return roots_jacobi(n, 0.0, beta)


def _qp1_convolution(spec, t, tol):
    """Mellin convolution of t^B_k e^-t with G^{p,0}_{p,p}(.| T; B_[k]).

    In tau = log(u/t) the inner G contributes tau^(psi-1) times a smooth
    factor, so a Gauss-Jacobi rule on [0, log(1 + 40/t)] is exact up to the
    e^-40 truncation.
    """
    B = list(spec.bottom)
    k = int(np.argmax(B))
    inner = GFunctionSpec(spec.p, 0, spec.p, spec.p, spec.top,
                          ParameterVector(B[:k] + B[k + 1:]))
    psi = _psi(inner)
    if psi <= 0.0:
        return None
    bk = B[k]
    hi = math.log1p(40.0 / t)
    x, w = _jacobi_rule(round(psi - 1.0, 15))
    tau = 0.5 * hi * (1.0 + x)
    u = t * np.exp(tau)
    h = _tau_regular(inner, tau) * u ** bk * np.exp(-u)
    return float((0.5 * hi) ** psi * np.dot(w, h))


def g_q_plus_one(spec, t, tol=DEFAULT, degenerate="raise"):
    """G^{p+1,0}_{p,p+1}(t | T; B), t > 0."""
    if not (spec.q == spec.p + 1 and spec.n == 0 and spec.m == spec.q):
        raise ValueError("g_q_plus_one needs G^{p+1,0}_{p,p+1}")
    t = float(t)
    if not t > 0.0:
        raise ValueError("argument must be positive")
    B = list(spec.bottom)
    if spec.p == 0:
        return t ** B[0] * math.exp(-t)
    if t > tol.laplace_switch:
        v = _qp1_convolution(spec, t, tol)
        if v is not None:
            return v
    groups = clusters(B, tol.split_threshold)
    if not groups:
        return _qp1_slater(spec, t, tol)
    if degenerate == "raise" and clusters(B, tol.degeneracy):
        raise DegenerateParameterError(f"integer-separated bottom parameters {B}")
    warnings.warn(f"integer-separated parameters {B}: using perturbation",
                  DegenerateParameterWarning, stacklevel=2)

    def fn(v):
        return _qp1_slater(GFunctionSpec(spec.m, 0, spec.p, spec.q, spec.top, v), t, tol)

    return _richardson_perturb(fn, B, groups, tol)


# ---- dispatcher --------------------------------------------------------------

def meijer_g(spec, x, tol=DEFAULT):
    """G(x) for the supported shapes, choosing the most reliable path.

    Integer-separated parameters are handled by the log-variable series where
    it applies and by symmetric perturbation otherwise.
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError("argument must be positive")
    if spec.q == spec.p + 1:
        return g_q_plus_one(spec, x, tol, degenerate="perturb")
    if spec.n == 0 and spec.m == spec.p:
        if spec.p == 0:
            return 0.0
        if x > 1.0:
            return 0.0
        if x == 1.0:
            if _psi(spec) > 1.0:
                return 0.0
            raise UnitCircleError("G^{p,0}_{p,p} is singular at 1 for this parameter set")
        if x >= tol.tau_switch:
            return g_tau_series(spec, x)
    return _slater_robust(spec, x, tol)


# ---- Mellin-Barnes oracle ----------------------------------------------------

def _mellin(spec, s):
    at, ab, bt, bb = spec.at, spec.ab, spec.bt, spec.bb
    acc = 0j
    for v in bt:
        acc += log_gamma(v + s)
    for v in at:
        acc += log_gamma(1.0 - v - s)
    for v in bb:
        acc -= log_gamma(1.0 - v - s)
    for v in ab:
        acc -= log_gamma(v + s)
    return cmath.exp(acc)


def contour_abscissa(spec):
    lo = max((-v for v in spec.bt), default=-math.inf)
    hi = min([0.0] + [1.0 - v for v in spec.at])
    if not lo < hi:
        raise ContourError(f"no vertical contour separates the poles (interval ({lo}, {hi}) is empty)")
    if lo == -math.inf:
        lo = hi - 1.0
    return 0.5 * (lo + hi)


def mellin_barnes_oracle(spec, x, tol=DEFAULT):
    """G(x) by quadrature of the Mellin-Barnes integral on Re s = c."""
    x = float(x)
    if not x > 0.0 or abs(x - 1.0) < 0.05:
        raise ValueError("oracle needs x > 0 away from 1")
    c = contour_abscissa(spec)
    w = math.log(x)
    kappa = (spec.m + spec.n) - 0.5 * (spec.p + spec.q)
    if kappa < 0:
        raise ContourError("integrand grows along the contour")

    def re_m(y):
        return _mellin(spec, complex(c, y)).real

    def im_m(y):
        return _mellin(spec, complex(c, y)).imag

    if kappa == 0:
        aw = abs(w)
        sgn = 1.0 if w > 0 else -1.0
        opts = dict(limlst=200, limit=200)
        i1, e1 = quad(re_m, 0.0, np.inf, weight="cos", wvar=aw, **opts)
        i2, e2 = quad(im_m, 0.0, np.inf, weight="sin", wvar=aw, **opts)
        val = i1 + sgn * i2
    else:
        peak = max(abs(_mellin(spec, complex(c, y))) for y in np.linspace(0.0, 4.0, 41))
        hi = 4.0
        while abs(_mellin(spec, complex(c, hi))) > 1e-16 * peak:
            hi *= 1.5
            if hi > 1e4:
                raise QuadratureError("contour integrand does not decay", hi)

        def f(y):
            mm = _mellin(spec, complex(c, y))
            return mm.real * math.cos(w * y) + mm.imag * math.sin(w * y)

        val, _ = quad(f, 0.0, hi, limit=2000, epsabs=0.0, epsrel=1e-12)
    return x ** (-c) / math.pi * val
