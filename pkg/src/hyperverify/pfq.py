"""Generalized hypergeometric functions pFq on the cut plane.

Evaluation policy for p = q+1:
  |z| <= 0.9        direct series
  |z| >= 1.1        connection sum in powers of 1/z
  0.9 < |z| < 1.1   Levin u-transform of the partial sums, then fallbacks
                    (longer direct/inverse series, the 2F1 1-z transform,
                    ODE continuation along a ray, Stieltjes quadrature)
"""
import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .config import DEFAULT
from .core import ParameterVector, pvec, is_pole, gamma_ratio, first_product, clusters
from .errors import (ConvergenceError, CutContactError, DegenerateParameterError,
                     DegenerateParameterWarning, PoleError)


@dataclass(frozen=True)
class HypergeometricSpec:
    a: ParameterVector
    b: ParameterVector

    def __post_init__(self):
        object.__setattr__(self, "a", pvec(self.a))
        object.__setattr__(self, "b", pvec(self.b))
        for v in self.b:
            if is_pole(v):
                raise PoleError(v, f"lower parameter {v} is a nonpositive integer")
        if self.p > self.q + 1:
            raise ValueError("p > q+1: series diverges for every z != 0")

    @property
    def p(self):
        return len(self.a)

    @property
    def q(self):
        return len(self.b)

    def shifted(self, k=1):
        return HypergeometricSpec(self.a.shifted(k), self.b.shifted(k))

    @property
    def polynomial(self):
        return any(is_pole(v) for v in self.a)


def hspec(a, b=()):
    return HypergeometricSpec(pvec(a), pvec(b))


@dataclass(frozen=True)
class CutEvaluation:
    x: float
    above: complex
    below: complex

    @property
    def jump(self):
        return self.above - self.below

    @property
    def mean(self):
        return 0.5 * (self.above + self.below)


def _is_real(z):
    return not isinstance(z, complex) or z.imag == 0.0


def _as_out(val, z):
    if not isinstance(z, complex) and isinstance(val, complex) and val.imag == 0.0:
        return val.real
    return val


# ---------------------------------------------------------------- series

def _series(a, b, z, tol=DEFAULT, max_terms=None):
    """Compensated partial sums; returns (value, terms used, largest |term|)."""
    max_terms = max_terms or tol.max_terms
    t = 1.0 + 0j if isinstance(z, complex) else 1.0
    re = [1.0]
    im = []
    running = 1.0
    big = 1.0
    small = 0
    cplx = isinstance(z, complex)
    n = 0
    while True:
        num = 1.0
        for v in a:
            num *= v + n
        den = n + 1.0
        for v in b:
            den *= v + n
        t = t * num / den * z
        n += 1
        if cplx:
            re.append(t.real)
            im.append(t.imag)
        else:
            re.append(t)
        running += t
        at = abs(t)
        if at > big:
            big = at
        if at <= tol.series_rel * abs(running) or t == 0:
            small += 1
            if small >= tol.small_terms:
                break
        else:
            small = 0
        if n >= max_terms:
            raise ConvergenceError(f"series did not converge in {max_terms} terms at z={z}")
    val = complex(math.fsum(re), math.fsum(im)) if cplx else math.fsum(re)
    return val, n, big


def _terms(a, b, z, count):
    out = [1.0 + 0j]
    t = 1.0 + 0j
    for n in range(count - 1):
        num = 1.0
        for v in a:
            num *= v + n
        den = n + 1.0
        for v in b:
            den *= v + n
        t = t * num / den * z
        out.append(t)
    return out


def pfq_series(spec, z, tol=DEFAULT):
    """Direct series; p = q+1 is restricted to |z| <= series_radius."""
    if spec.p == spec.q + 1 and abs(z) > tol.series_radius and not spec.polynomial:
        raise ValueError(f"|z|={abs(z):.4g} outside the series policy radius {tol.series_radius}")
    return _series(spec.a, spec.b, z, tol)[0]


# ---------------------------------------------------------------- Levin

def levin_u(terms, order=20, beta=1.0):
    """Levin u-transform of sum(terms); returns (estimate, error estimate)."""
    s = np.cumsum(np.asarray(terms, dtype=complex))
    t = np.asarray(terms, dtype=complex)
    if np.any(t == 0):
        return complex(s[-1]), 0.0
    kmax = min(order, len(t) - 1)
    ests = []
    for k in range(1, kmax + 1):
        j = np.arange(k + 1)
        w = np.array([math.comb(k, i) for i in j], dtype=float) * (-1.0) ** j
        w *= ((beta + j) / (beta + k)) ** (k - 1)
        omega = (beta + j) * t[: k + 1]
        num = np.sum(w * s[: k + 1] / omega)
        den = np.sum(w / omega)
        ests.append(num / den)
    best = None
    for k in range(2, len(ests)):
        err = max(abs(ests[k] - ests[k - 1]), abs(ests[k - 1] - ests[k - 2]))
        if best is None or err < best[1]:
            best = (ests[k], err)
    if best is None:
        return complex(s[-1]), float("inf")
    return complex(best[0]), float(best[1])


# ---------------------------------------------------------------- continuation

def _principal_pow(z, e, side=0):
    """(-z)^(-e) with principal log; side=+1 above the cut (arg(-z)=-pi), -1 below."""
    if side == 0:
        w = -complex(z)
        return cmath.exp(-e * cmath.log(w))
    x = float(z.real if isinstance(z, complex) else z)
    arg = -math.pi if side > 0 else math.pi
    return cmath.exp(-e * complex(math.log(x), arg))


def _connection(a, b, z, tol, side=0):
    """Sum over j of the connection coefficients times (-z)^{-a_j} F(.., 1/z)."""
    total = 0j
    w = 1.0 / z
    if side:
        w = 1.0 / float(z.real if isinstance(z, complex) else z)
    for j, aj in enumerate(a):
        rest = [v for i, v in enumerate(a) if i != j]
        coef = gamma_ratio([v - aj for v in rest] + list(b),
                           rest + [v - aj for v in b], den_poles="zero")
        if coef == 0.0:
            continue
        upper = [aj] + [1.0 - v + aj for v in b]
        lower = [1.0 - v + aj for v in rest]
        inner = _hyp(upper, lower, w, tol)
        total += coef * _principal_pow(z, aj, side) * inner
    return total


def _richardson_perturb(fn, a, groups, tol):
    """Evaluate fn at integer-separated parameters by symmetric perturbation.

    fn(a') is analytic in the perturbation size; averaging +h and -h removes
    odd orders, and one Richardson step in h^2 removes the h^2 term.
    """
    kmax = max(len(g) for g in groups)
    h = 10.0 ** (-16.0 / (kmax + 3))
    offs = [0.0] * len(a)
    for g in groups:
        for i, idx in enumerate(g):
            offs[idx] = i - 0.5 * (len(g) - 1)

    def sym(e):
        up = [v + e * c for v, c in zip(a, offs)]
        dn = [v - e * c for v, c in zip(a, offs)]
        return 0.5 * (fn(up) + fn(dn))

    return (4.0 * sym(h) - sym(2.0 * h)) / 3.0


def _connection_generic(a, b, z, tol, side=0, degenerate="perturb"):
    groups = clusters(list(a), tol.split_threshold)
    if not groups:
        return _connection(a, b, z, tol, side)
    if degenerate == "raise":
        raise DegenerateParameterError(
            f"upper parameters {list(a)} are integer-separated; "
            "retry with degenerate='perturb' (symmetric epsilon split)")
    warnings.warn(f"integer-separated parameters {list(a)}: using perturbation",
                  DegenerateParameterWarning, stacklevel=3)
    return _richardson_perturb(lambda aa: _connection(aa, b, z, tol, side), list(a), groups, tol)


def _gauss_one_minus_z(a, b, c, z, tol):
    """2F1 through the 1-z connection formula, valid for |1-z| < 1 off the cut."""
    w = 1.0 - z

    def value(cc):
        s = cc - a - b
        t1 = gamma_ratio([cc, s], [cc - a, cc - b], den_poles="zero")
        t2 = gamma_ratio([cc, -s], [a, b], den_poles="zero")
        out = 0j
        if t1:
            out += t1 * _series([a, b], [1.0 - s], w, tol)[0]
        if t2:
            out += t2 * cmath.exp(s * cmath.log(complex(w))) * _series([cc - a, cc - b], [s + 1.0], w, tol)[0]
        return out

    s = c - a - b
    if abs(s - round(s)) < tol.split_threshold:
        return _perturb_scalar(value, c)
    return value(c)


def _perturb_scalar(fn, c):
    h = 10.0 ** (-16.0 / 5)

    def sym(e):
        return 0.5 * (fn(c + e) + fn(c - e))

    return (4.0 * sym(h) - sym(2.0 * h)) / 3.0


def _theta_moments(a, b, z0, K, tol):
    """theta^k F(z0) for k = 0..K, theta = z d/dz, from the series."""
    out = np.zeros(K + 1, dtype=complex)
    t = 1.0 + 0j
    n = 0
    small = 0
    while True:
        nk = 1.0
        for k in range(K + 1):
            out[k] += t * nk
            nk *= n
        num = 1.0
        for v in a:
            num *= v + n
        den = n + 1.0
        for v in b:
            den *= v + n
        t = t * num / den * z0
        n += 1
        if abs(t) * max(n, 1) ** K <= 1e-18 * abs(out[0]):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        if n > tol.max_terms:
            raise ConvergenceError("moment series did not converge")
    return out


def _ode_continue(a, b, z, tol, r0=0.5):
    """Integrate the hypergeometric ODE in u = log z along the ray through z."""
    p1 = len(a)
    pa = np.poly1d([1.0])
    for v in a:
        pa = pa * np.poly1d([1.0, v])
    pb = np.poly1d([1.0, 0.0])
    for v in b:
        pb = pb * np.poly1d([1.0, v - 1.0])
    ca = pa.coeffs[::-1][:p1]
    cb = pb.coeffs[::-1][:p1]
    z = complex(z)
    z0 = r0 * z / abs(z)
    u0 = cmath.log(z0)
    du = cmath.log(z) - u0
    y0 = _theta_moments(a, b, z0, p1 - 1, tol)

    def rhs(s, y):
        e = cmath.exp(u0 + s * du)
        last = (e * np.dot(ca, y) - np.dot(cb, y)) / (1.0 - e)
        dy = np.empty_like(y)
        dy[:-1] = y[1:]
        dy[-1] = last
        return dy * du

    sol = solve_ivp(rhs, (0.0, 1.0), y0, method="DOP853", rtol=1e-13, atol=1e-300)
    if not sol.success:
        raise ConvergenceError(f"ODE continuation failed at z={z}: {sol.message}")
    return complex(sol.y[0, -1])


def _annulus(a, b, z, tol, degenerate="perturb", fallback="ode"):
    terms = _terms(a, b, complex(z), tol.levin_order + 6)
    est, err = levin_u(terms, tol.levin_order)
    if err <= tol.levin_accept * abs(est):
        return est
    if len(a) == 2 and abs(1.0 - z) < 0.75:
        s = b[0] - a[0] - a[1]
        if abs(s - round(s)) > tol.split_threshold:
            return complex(_gauss_one_minus_z(a[0], a[1], b[0], complex(z), tol))
    if fallback == "sigma2" and z.real < 0 and all(v > 0 for v in a):
        from .transforms import sigma2_value
        return complex(sigma2_value(a, b, -complex(z), tol))
    try:
        return _ode_continue(a, b, z, tol)
    except ConvergenceError:
        pass
    if abs(z) < 0.996:
        return complex(_series(a, b, complex(z), tol)[0])
    if abs(z) > 1.004:
        return _connection_generic(a, b, z, tol, 0, degenerate)
    raise ConvergenceError(f"no method converged at z={z}")


def _hyp(a, b, z, tol=DEFAULT, degenerate="perturb", fallback="ode"):
    """Internal evaluator for any p <= q+1 off the cut; complex result."""
    p, q = len(a), len(b)
    if z == 0:
        return 1.0 + 0j
    if p <= q or any(is_pole(v) for v in a):
        return complex(_series(a, b, complex(z), tol)[0])
    if isinstance(z, complex) and z.imag == 0.0:
        z = z.real
    if not isinstance(z, complex) and z >= 1.0:
        raise CutContactError(f"z={z} lies on the branch cut [1, inf)")
    if p == 1:
        return cmath.exp(-a[0] * cmath.log(1.0 - complex(z)))
    r = abs(z)
    if r <= tol.series_radius:
        return complex(_series(a, b, complex(z), tol)[0])
    if r >= tol.annulus_outer:
        return complex(_connection_generic(a, b, z, tol, 0, degenerate))
    return complex(_annulus(a, b, complex(z), tol, degenerate, fallback))


def hyp(a, b, z, tol=DEFAULT):
    """pFq(a; b; z) with real output for real z off the cut."""
    return _as_out(_hyp(list(pvec(a)), list(pvec(b)), z, tol), z)


def pfq(spec, z, tol=DEFAULT):
    return _as_out(_hyp(list(spec.a), list(spec.b), z, tol), z)


def pfq_continued(spec, z, tol=DEFAULT, degenerate="perturb", fallback="ode"):
    """Analytic continuation of p+1Fp to the plane cut along [1, inf)."""
    if spec.p != spec.q + 1:
        raise ValueError("pfq_continued needs p = q+1")
    zc = complex(z)
    if zc.imag == 0.0 and zc.real >= 1.0 and not spec.polynomial:
        raise CutContactError(f"z={z} lies on the branch cut [1, inf)")
    val = _hyp(list(spec.a), list(spec.b), z, tol, degenerate, fallback)
    return _as_out(val, z)


def cut_values(spec, x, tol=DEFAULT, degenerate="perturb"):
    """Boundary values at x +- i0 for x > 1 via the connection sum."""
    if spec.p != spec.q + 1:
        raise ValueError("cut_values needs p = q+1")
    x = float(x)
    if not x > 1.0:
        raise ValueError("cut_values needs x > 1")
    a, b = list(spec.a), list(spec.b)
    if spec.polynomial:
        v = complex(_series(a, b, x, tol)[0])
        return CutEvaluation(x, v, v)
    if spec.p == 1:
        # (1 - x -+ i0)^(-a) with arg(1-z) = -+ pi
        up = cmath.exp(-a[0] * complex(math.log(x - 1.0), -math.pi))
        dn = cmath.exp(-a[0] * complex(math.log(x - 1.0), math.pi))
        return CutEvaluation(x, up, dn)
    above = _connection_generic(a, b, x, tol, +1, degenerate)
    below = _connection_generic(a, b, x, tol, -1, degenerate)
    return CutEvaluation(x, complex(above), complex(below))


def jump_closed_form(spec, x, tol=DEFAULT):
    """2 pi i Gamma(b)/Gamma(a) G^{p+1,0}_{p+1,p+1}(1/x | 1, b; a)."""
    from .meijerg import GFunctionSpec, meijer_g
    if spec.p != spec.q + 1:
        raise ValueError("jump needs p = q+1")
    a, b = spec.a, spec.b
    pref = gamma_ratio(list(b), list(a), den_poles="zero")
    if pref == 0.0:
        return 0j
    g = GFunctionSpec(spec.p, 0, spec.p, spec.p, ParameterVector((1.0,) + tuple(b)), a)
    return complex(0.0, 2.0 * math.pi * pref * meijer_g(g, 1.0 / x, tol))


def mean_closed_form(spec, x, tol=DEFAULT):
    """-pi Gamma(b)/(sqrt(x) Gamma(a)) G^{p+1,1}_{p+2,p+2}(1/x | 1/2,1,b-1/2; a-1/2,1)."""
    from .meijerg import GFunctionSpec, meijer_g
    if spec.p != spec.q + 1:
        raise ValueError("mean needs p = q+1")
    a, b = spec.a, spec.b
    pref = gamma_ratio(list(b), list(a), den_poles="zero")
    if pref == 0.0:
        return 0.0
    top = ParameterVector((0.5, 1.0) + tuple(v - 0.5 for v in b))
    bottom = ParameterVector(tuple(v - 0.5 for v in a) + (1.0,))
    g = GFunctionSpec(spec.p, 1, spec.p + 1, spec.p + 1, top, bottom)
    return -math.pi * pref / math.sqrt(x) * meijer_g(g, 1.0 / x, tol)


def pfq_derivative(spec, z, tol=DEFAULT):
    """d/dz pFq = ((a)/(b)) pFq(a+1; b+1; z)."""
    c = first_product(spec.a) / first_product(spec.b)
    if c == 0.0:
        return 0.0 if not isinstance(z, complex) else 0j
    return c * pfq(spec.shifted(1), z, tol)
