"""Quadrature engine and the integral-representation verifiers.

Every verifier returns a Comparison holding both sides, so a failing
identity shows by how much and in which direction it misses.
"""
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import roots_jacobi, roots_legendre

from .config import DEFAULT
from .core import pvec, gamma_ratio, first_product, delta_vector, pochhammer
from .errors import QuadratureError
from .meijerg import GFunctionSpec, gspec, meijer_g, _tau_regular, _tau_coefficients
from .pfq import hspec, hyp, pfq_continued, cut_values


@dataclass(frozen=True)
class Comparison:
    lhs: complex
    rhs: complex

    def __iter__(self):
        return iter((self.lhs, self.rhs))

    @property
    def abs_residual(self):
        return abs(self.lhs - self.rhs)

    @property
    def residual(self):
        """|lhs - rhs| / max(|lhs|, |rhs|); zero when both sides vanish."""
        scale = max(abs(self.lhs), abs(self.rhs))
        return self.abs_residual / scale if scale > 0 else 0.0

    @property
    def signed(self):
        """Re(rhs - lhs) relative to the same scale as `residual`."""
        scale = max(abs(self.lhs), abs(self.rhs))
        d = complex(self.rhs) - complex(self.lhs)
        return d.real / scale if scale > 0 else 0.0


# ---- quadrature engine -------------------------------------------------------

@dataclass(frozen=True)
class QuadratureProblem:
    """Integral of `integrand` over [lo, hi]; hi = inf means semi-infinite.

    singularities = (alpha_lo, alpha_hi) are the endpoint exponents: the
    integrand behaves like (x-lo)^alpha_lo and (hi-x)^alpha_hi.  For a
    semi-infinite domain alpha_hi describes the behaviour in s -> 1 after
    the map x = lo + s/(1-s), i.e. a decay x^-k gives alpha_hi = k - 2.
    """
    integrand: object
    lo: float = 0.0
    hi: float = math.inf
    singularities: tuple = (0.0, 0.0)
    rel_tol: float = DEFAULT.quad_rel
    abs_tol: float = DEFAULT.quad_abs
    max_panels: int = DEFAULT.max_panels

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if min(self.singularities) <= -1.0:
            raise ValueError("endpoint exponents must exceed -1")


def _checked(f):
    def g(x):
        v = f(x)
        if isinstance(v, complex):
            ok = math.isfinite(v.real) and math.isfinite(v.imag)
        else:
            ok = math.isfinite(v)
        if not ok:
            raise QuadratureError(f"integrand is {v!r} at x={x!r}", location=x)
        return v
    return g


def _needs_map(alpha):
    return alpha != 0.0 and alpha != round(alpha)


def _map_lo(f, lo, alpha):
    # x = lo + u^(1/(1+alpha)); the Jacobian cancels (x-lo)^alpha
    k = 1.0 / (1.0 + alpha)

    def g(u):
        if u <= 0.0:
            return 0.0
        x = lo + u ** k
        if x == lo:
            return 0.0
        return f(x) * k * u ** (k - 1.0)
    return g


def _map_hi(f, hi, alpha):
    k = 1.0 / (1.0 + alpha)

    def g(u):
        if u <= 0.0:
            return 0.0
        x = hi - u ** k
        if x == hi:
            return 0.0
        return f(x) * k * u ** (k - 1.0)
    return g


def _quad_real(g, a, b, prob):
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always", IntegrationWarning)
        val, err = quad(g, a, b, epsabs=prob.abs_tol, epsrel=prob.rel_tol,
                        limit=prob.max_panels)
    for w in rec:
        if issubclass(w.category, IntegrationWarning):
            if "maximum number of subdivisions" in str(w.message):
                raise QuadratureError(
                    f"no convergence within {prob.max_panels} panels on [{a}, {b}]", location=(a, b))
        else:
            warnings.warn(w.message, w.category, stacklevel=3)
    return val, err


def _finite_pieces(f, lo, hi, alpha, beta):
    """Split [lo, hi] and apply endpoint maps; yields (g, a, b)."""
    ml, mh = _needs_map(alpha), _needs_map(beta)
    if not ml and not mh:
        return [(f, lo, hi)]
    if ml and not mh:
        return [(_map_lo(f, lo, alpha), 0.0, (hi - lo) ** (1.0 + alpha))]
    if mh and not ml:
        return [(_map_hi(f, hi, beta), 0.0, (hi - lo) ** (1.0 + beta))]
    mid = 0.5 * (lo + hi)
    return [(_map_lo(f, lo, alpha), 0.0, (mid - lo) ** (1.0 + alpha)),
            (_map_hi(f, hi, beta), 0.0, (hi - mid) ** (1.0 + beta))]


def integrate(problem):
    """(value, error estimate) of a QuadratureProblem.

    Adaptive Gauss-Kronrod (QUADPACK via scipy) after the endpoint maps.
    Complex integrands are split into real and imaginary parts.
    """
    f = _checked(problem.integrand)
    alpha, beta = problem.singularities
    lo, hi = float(problem.lo), float(problem.hi)
    if math.isinf(hi):
        def h(s):
            if s >= 1.0:
                return 0.0
            return f(lo + s / (1.0 - s)) / (1.0 - s) ** 2
        pieces = _finite_pieces(h, 0.0, 1.0, alpha, beta)
    else:
        pieces = _finite_pieces(f, lo, hi, alpha, beta)
    probe = pieces[0][0](0.5 * (pieces[0][1] + pieces[0][2]))
    is_complex = isinstance(probe, complex)
    total, err = 0j if is_complex else 0.0, 0.0
    for g, a, b in pieces:
        if is_complex:
            vr, er = _quad_real(lambda u: complex(g(u)).real, a, b, problem)
            vi, ei = _quad_real(lambda u: complex(g(u)).imag, a, b, problem)
            total += complex(vr, vi)
            err += math.hypot(er, ei)
        else:
            v, e = _quad_real(g, a, b, problem)
            total += v
            err += e
    return total, err


def quad_value(f, lo=0.0, hi=math.inf, singularities=(0.0, 0.0), tol=DEFAULT, rel_tol=None):
    prob = QuadratureProblem(f, lo, hi, tuple(singularities),
                             rel_tol if rel_tol is not None else tol.quad_rel,
                             tol.quad_abs, tol.max_panels)
    return integrate(prob)[0]


def algebraic_tail_quad(f, lo, decay, tol=DEFAULT, y_max=1e150):
    """int_lo^inf f(y) dy when |f(y)| ~ y^(-1-decay) with small decay > 0.

    Decades are integrated in u = log y until the envelope y|f(y)| drops
    below quad_abs*1e-3, then the remainder f(Y) Y / decay is added.
    """
    if decay <= 0.0:
        raise ValueError("integrand must decay faster than 1/y")
    total = 0.0
    u = math.log(lo)
    while True:
        u1 = u + math.log(10.0)
        total += quad_value(lambda v: f(math.exp(v)) * math.exp(v), u, u1, tol=tol)
        u = u1
        y = math.exp(u)
        env = y * f(y)
        if abs(env) < tol.quad_abs * 1e-3 or y >= y_max:
            return total + env / decay


SELF_TESTS = (
    ("constant", lambda x: 1.0, 0.0, 1.0, (0.0, 0.0), 1.0),
    ("inverse_sqrt", lambda x: x ** -0.5, 0.0, 1.0, (-0.5, 0.0), 2.0),
    ("exp_decay", lambda x: math.exp(-x), 0.0, math.inf, (0.0, 0.0), 1.0),
    ("strong_power", lambda x: x ** -0.9, 0.0, 1.0, (-0.9, 0.0), 10.0),
    ("log", lambda x: math.log(x), 0.0, 1.0, (0.0, 0.0), -1.0),
    ("arcsine", lambda x: (x * (1.0 - x)) ** -0.5, 0.0, 1.0, (-0.5, -0.5), math.pi),
    ("cauchy", lambda x: 1.0 / (1.0 + x * x), 0.0, math.inf, (0.0, 0.0), 0.5 * math.pi),
    ("sine", math.sin, 0.0, math.pi, (0.0, 0.0), 2.0),
    ("half_gamma", lambda x: x ** -0.5 * math.exp(-x), 0.0, math.inf, (-0.5, 0.0), math.sqrt(math.pi)),
    ("power_log", lambda x: x ** -0.3 * math.log(x), 0.0, 1.0, (-0.3, 0.0), -1.0 / 0.49),
    ("oscillating_complex", lambda x: complex(math.cos(x), math.sin(x)), 0.0, 1.0, (0.0, 0.0),
     complex(math.sin(1.0), 1.0 - math.cos(1.0))),
)


def self_test(tol=DEFAULT):
    """Run the closed-form battery; rows (name, value, estimate, true error, ok)."""
    rows = []
    for name, f, lo, hi, sing, exact in SELF_TESTS:
        val, est = integrate(QuadratureProblem(f, lo, hi, sing, tol.quad_rel, tol.quad_abs))
        true = abs(val - exact)
        ok = true <= est + 4.0 * np.finfo(float).eps * abs(exact)
        rows.append((name, val, est, true, ok))
    return rows


# ---- integrals against G^{p,0}_{p,p} ------------------------------------------

def g_integral(spec, weight, tol=DEFAULT, over_t=False, lo_extra=0.0, scale=None):
    """Integral over (0,1) of weight(t) G(t) dt (or dt/t), G = G^{p,0}_{p,p}.

    On [t0, 1) the integral is taken in tau = -log t where G carries the
    explicit factor tau^(psi-1); on (0, t0) G comes from the Slater sum and
    behaves like t^min(bottom).  lo_extra adds to the t -> 0 exponent when
    the weight itself vanishes or blows up there.  scale marks where the
    weight changes on (0, t0), e.g. 1/y for kernels in t*y.
    """
    if not (spec.q == spec.p and spec.m == spec.p and spec.n == 0):
        raise ValueError("g_integral needs G^{p,0}_{p,p}")
    mu, psi, _ = _tau_coefficients(tuple(spec.top), tuple(spec.bottom))
    if psi <= 0.0:
        raise ValueError(f"sum(top) - sum(bottom) = {psi} <= 0: G is not integrable at 1")
    t0 = tol.tau_switch
    shift = 0.0 if over_t else 1.0

    def in_tau(tau):
        t = math.exp(-tau)
        return weight(t) * t ** shift * float(_tau_regular(spec, tau)) * tau ** (psi - 1.0)

    total = quad_value(in_tau, 0.0, -math.log(t0), (psi - 1.0, 0.0), tol)

    def in_t(t):
        return weight(t) * meijer_g(spec, t, tol) / (t if over_t else 1.0)

    e0 = min(spec.bottom) - (1.0 if over_t else 0.0) + lo_extra
    if e0 <= -1.0:
        raise ValueError("integrand is not integrable at t = 0")
    cuts = [t0]
    if scale is not None:
        cuts = [t0] + sorted((c for c in (10.0 * scale, scale, 0.1 * scale) if c < t0), reverse=True)
    for hi, lo in zip(cuts, cuts[1:]):
        total += quad_value(in_t, lo, hi, tol=tol)
    total += quad_value(in_t, 0.0, cuts[-1], (e0, 0.0), tol)
    return total


class GRule:
    """Fixed rule for integrals of f(t) G^{p,0}_{p,p}(t) dt over (0, 1).

    G is sampled once; each later integral is a dot product.  Gauss-Jacobi
    in tau = -log t on [0, -log t0] absorbs tau^(psi-1); below t0 geometric
    Gauss-Legendre panels run down to where t^(min bottom + 1) is negligible.
    """

    def __init__(self, spec, tol=DEFAULT, n_tau=80, n_panel=16, ratio=0.25, floor=None):
        mu, psi, _ = _tau_coefficients(tuple(spec.top), tuple(spec.bottom))
        if psi <= 0.0:
            raise ValueError("G is not integrable at 1")
        t0 = tol.tau_switch
        ts = -math.log(t0)
        x, w = roots_jacobi(n_tau, 0.0, psi - 1.0)
        tau = 0.5 * ts * (1.0 + x)
        nodes = [np.exp(-tau)]
        weights = [w * (0.5 * ts) ** psi * _tau_regular(spec, tau) * np.exp(-tau)]
        e0 = min(spec.bottom)
        if floor is None:
            floor = max(10.0 ** (-17.0 / max(e0 + 1.0, 1e-3)), 1e-300)
        gx, gw = roots_legendre(n_panel)
        hi = t0
        while hi > floor:
            lo = hi * ratio
            t = lo + 0.5 * (hi - lo) * (gx + 1.0)
            g = np.array([meijer_g(spec, v, tol) for v in t])
            nodes.append(t)
            weights.append(0.5 * (hi - lo) * gw * g)
            hi = lo
        self.nodes = np.concatenate(nodes)
        self.weights = np.concatenate(weights)

    def __call__(self, f):
        return float(np.dot(self.weights, f(self.nodes)))


def g_moment(a, b, s, tol=DEFAULT):
    """Integral of t^(s-1) G^{p,0}_{p,p}(t | b; a) over (0,1) by quadrature."""
    spec = gspec(len(a), 0, b, a)
    return g_integral(spec, lambda t: t ** s, tol, over_t=True, lo_extra=s)


def verify_g_moment(a, b, k, tol=DEFAULT):
    """Quadrature of t^(2k) G^{p,0}_{p,p}(t | b; a) against Gamma(a+2k+1)/Gamma(b+2k+1)."""
    a, b = pvec(a), pvec(b)
    lhs = gamma_ratio([v + 2 * k + 1 for v in a], [v + 2 * k + 1 for v in b])
    return Comparison(lhs, g_moment(a, b, 2 * k + 1, tol))


# ---- Laplace representations ---------------------------------------------------

def verify_laplace_pFp(a, b, z, tol=DEFAULT):
    """pFp(a; b; -z) against Gamma(b)/Gamma(a) * int_0^1 e^{-zt} G^{p,0}_{p,p}(t | b; a) dt/t."""
    a, b = pvec(a), pvec(b)
    lhs = hyp(a, b, -z, tol)
    spec = gspec(len(a), 0, b, a)
    integral = g_integral(spec, lambda t: np.exp(-z * t), tol, over_t=True)
    return Comparison(lhs, gamma_ratio(b, a) * integral)


def verify_laplace_p1Fp(a, b, z, tol=DEFAULT):
    """p+1Fp(a; b; -z) against Gamma(b)/Gamma(a) * int_0^inf e^{-zt} G^{p+1,0}_{p,p+1}(t | b; a) dt/t."""
    a, b = pvec(a), pvec(b)
    if len(a) != len(b) + 1:
        raise ValueError("need len(a) = len(b) + 1")
    lhs = pfq_continued(hspec(a, b), -z, tol)
    spec = GFunctionSpec(len(a), 0, len(b), len(a), b, a)

    def f(t):
        return np.exp(-z * t) * meijer_g(spec, t, tol) / t

    rhs = gamma_ratio(b, a) * quad_value(f, 0.0, math.inf, (min(a) - 1.0, 0.0), tol)
    return Comparison(lhs, rhs)


# ---- representing measures -----------------------------------------------------

@dataclass(frozen=True)
class RepresentingMeasure:
    """atom_at_zero * delta_0 + density(t) dt on [0, inf)."""
    atom_at_zero: float
    density: object
    support_hint: str = "semi_infinite"
    growth: float = 0.0     # exponential type of the density

    def laplace(self, x, tol=DEFAULT):
        if x <= self.growth:
            raise ValueError("Laplace transform diverges for x <= growth rate")
        T = 80.0 / (x - self.growth)
        val = quad_value(lambda t: math.exp(-x * t) * self.density(t), 0.0, T, tol=tol)
        return self.atom_at_zero + val


def representing_measure_1_over_x(a, b, alpha=1.0):
    """Measure whose Laplace transform is pFq(a; b; alpha/x).

    density(t) = alpha (a)/(b) pF_{q+1}(a+1; b+1, 2; alpha t), atom 1 at 0.
    """
    spec = hspec(a, b)
    if spec.p > spec.q + 1:
        raise ValueError("need p <= q+1")
    a1 = list(spec.a.shifted(1))
    b1 = list(spec.b.shifted(1)) + [2.0]
    c = alpha * first_product(spec.a) / first_product(spec.b)

    def density(t):
        if c == 0.0:
            return 0.0
        return c * hyp(a1, b1, alpha * t)

    growth = alpha if spec.p == spec.q + 1 else 0.0
    return RepresentingMeasure(1.0, density, "semi_infinite", growth)


def verify_repr_1_over_x(a, b, x, alpha=1.0, tol=DEFAULT):
    """pFq(a; b; alpha/x) against the Laplace transform of its representing measure."""
    spec = hspec(a, b)
    nu = representing_measure_1_over_x(a, b, alpha)
    if spec.p == spec.q + 1:
        lhs = pfq_continued(spec, alpha / x, tol)
    else:
        lhs = hyp(spec.a, spec.b, alpha / x, tol)
    return Comparison(lhs, nu.laplace(x, tol))


def laplace_convolution(k1, k2, t, tol=DEFAULT):
    """int_0^t k1(t-u) k2(u) du."""
    if t <= 0.0:
        return 0.0
    return quad_value(lambda u: k1(t - u) * k2(u), 0.0, t, tol=tol)


def _density_of(nu):
    if isinstance(nu, RepresentingMeasure):
        if nu.atom_at_zero != 1.0:
            raise ValueError("convolution formula assumes unit atoms at zero")
        return nu.density
    return nu


def convolve_measures(nu1, nu2, tol=DEFAULT):
    """Density t -> int_0^t nu2(t-u) nu1(u) du + nu1(t) + nu2(t) of the product."""
    d1, d2 = _density_of(nu1), _density_of(nu2)

    def density(t):
        return laplace_convolution(d2, d1, t, tol) + d1(t) + d2(t)
    return density


def bessel_measure_relation(points, masses, t, tol=DEFAULT):
    """sum_k m_k (u_k/t)^(1/2) I_1(2 sqrt(u_k t)), computed as u 0F1(-; 2; u t)."""
    total = 0.0
    for u, m in zip(points, masses):
        total += m * u * hyp([], [2.0], u * t, tol)
    return total


# ---- Stieltjes representations -----------------------------------------------

def stieltjes_density_rho(a, b, x, tol=DEFAULT):
    """Gamma(b)/Gamma(a) G^{p+1,0}_{p+1,p+1}(1/x | 1, b; a) for x > 1."""
    a, b = pvec(a), pvec(b)
    if len(a) != len(b) + 1:
        raise ValueError("need len(a) = len(b) + 1")
    if not x > 1.0:
        raise ValueError("density lives on x > 1")
    pref = gamma_ratio(b, a, den_poles="zero")
    if pref == 0.0:
        return 0.0
    spec = gspec(len(a), 0, (1.0,) + tuple(b), a)
    return pref * meijer_g(spec, 1.0 / x, tol)


def verify_stieltjes_rho(a, b, z, tol=DEFAULT):
    """p+1Fp(a; b; -z) against int_1^inf rho(x)/(x+z) dx, taken in t = 1/x."""
    a, b = pvec(a), pvec(b)
    lhs = pfq_continued(hspec(a, b), -z, tol)
    spec = gspec(len(a), 0, (1.0,) + tuple(b), a)
    pref = gamma_ratio(b, a)
    rhs = pref * g_integral(spec, lambda t: 1.0 / (1.0 + z * t), tol, over_t=True)
    return Comparison(lhs, rhs)


def _sigma2_params(a, b):
    up = [(v + 1.0) / 2 for v in a] + [(v + 2.0) / 2 for v in a]
    lo = [(v + 1.0) / 2 for v in b] + [(v + 2.0) / 2 for v in b] + [1.5]
    return up, lo


def sigma2_value(a, b, z, tol=DEFAULT):
    """(2(a)/(pi(b))) int_0^inf t^2/(z^2+t^2) F((a+1)/2,(a+2)/2; (b+1)/2,(b+2)/2,3/2; -t^2) dt."""
    a, b = list(pvec(a)), list(pvec(b))
    up, lo = _sigma2_params(a, b)
    z2 = z * z

    def f(t):
        if t == 0.0:
            return 0.0
        return t * t / (z2 + t * t) * hyp(up, lo, -t * t, tol)

    decay = min(a) + 1.0
    sing = (0.0, min(decay - 2.0, 0.0))
    r = abs(z)
    if r < 1.0:
        # the kernel changes on the scale |z|: integrate decade by decade up to 1
        edges = [0.0, r]
        while edges[-1] < 0.1:
            edges.append(10.0 * edges[-1])
        edges.append(1.0)
        val = sum(quad_value(f, lo, hi, tol=tol) for lo, hi in zip(edges[:-1], edges[1:]))
        val += quad_value(f, 1.0, math.inf, sing, tol)
    else:
        val = quad_value(f, 0.0, math.inf, sing, tol)
    return 2.0 * first_product(a) / (math.pi * first_product(b)) * val


def stieltjes_sigma2(a, b, z, tol=DEFAULT):
    return Comparison(pfq_continued(hspec(a, b), -z, tol), sigma2_value(a, b, z, tol))


def _arctan_kernel(sigma, t, y):
    s, c = math.sin(math.pi / sigma), math.cos(math.pi / sigma)
    ty = t * y
    num = math.sin(sigma * math.atan(ty * s / (1.0 + ty * c)))
    return num / (t * (1.0 + 2.0 * ty * c + ty * ty) ** (sigma / 2.0))


def stieltjes_sigma_general(a, b, sigma, y, tol=DEFAULT):
    """Density phi(y) of p+1Fp(sigma, a; b; -z) = int phi(y)/(y^sigma + z^sigma) dy."""
    if sigma < 2:
        raise ValueError("representation holds for sigma >= 2")
    a, b = pvec(a), pvec(b)
    spec = gspec(len(a), 0, b, a)
    pref = sigma * y ** (sigma - 1.0) * gamma_ratio(b, a) / math.pi
    val = g_integral(spec, lambda t: t * _arctan_kernel(sigma, t, y), tol, over_t=True, scale=1.0 / y)
    return pref * val


def sigma2_density(a, b, y, tol=DEFAULT):
    """The sigma = 2 density with the rational kernel y^2/(1+t^2y^2)^2."""
    a, b = pvec(a), pvec(b)
    spec = gspec(len(a), 0, b, a)
    pref = 4.0 * gamma_ratio(b, a) / math.pi
    return pref * g_integral(spec, lambda t: y * y / (1.0 + t * t * y * y) ** 2, tol, scale=1.0 / y)


def sigma3_kernel(u):
    """(1+u)/(1+u+u^2)^3, written in v = 1/u for u > 1 so it cannot overflow."""
    u = np.asarray(u, dtype=float)
    big = u > 1.0
    v = 1.0 / np.where(big, u, 1.0)
    s = np.where(big, 0.0, u)
    out = np.where(big, v ** 5 * (1.0 + v) / (1.0 + v + v * v) ** 3,
                   (1.0 + s) / (1.0 + s + s * s) ** 3)
    return float(out) if out.ndim == 0 else out


def sigma3_density(a, b, y, tol=DEFAULT):
    """The sigma = 3 density with kernel (1+ty)/(1+ty+t^2y^2)^3 (p-vectors a, b)."""
    a, b = pvec(a), pvec(b)
    spec = gspec(len(a), 0, b, a)
    pref = 9.0 * math.sqrt(3.0) * y ** 3 * gamma_ratio(b, a) / (2.0 * math.pi)

    return pref * g_integral(spec, lambda t: sigma3_kernel(t * y), tol, scale=1.0 / y)


def _sigma3_lift(a, b):
    # p+1Fp(a; b) = p+2Fp+1(3, a; 3, b): densities use a and (3, b)
    return pvec(a), pvec((3.0,) + tuple(pvec(b)))


def sigma3_phi(a, b, y, tol=DEFAULT):
    """Density for p+1Fp(a; b; -z) = int_0^inf phi(y)/(z^3+y^3) dy."""
    aa, bb = _sigma3_lift(a, b)
    return sigma3_density(aa, bb, y, tol)


def sigma3_psi(a, b, m, y, tol=DEFAULT):
    """psi_m(y); on y > 1 the mean of the two boundary values is used."""
    a, b = pvec(a), pvec(b)
    up = [3.0] + list(delta_vector(a.shifted(m), 3))
    lo = list(delta_vector(b.shifted(m), 3)) + list(delta_vector([m + 3.0], 3))
    c = y ** (m + 2) * pochhammer(a, m) / (pochhammer([3.0], m) * pochhammer(b, m))
    w = y ** 3
    if w < 1.0:
        return c * hyp(up, lo, w, tol)
    return c * cut_values(hspec(up, lo), w, tol).mean.real


def sigma3_psi_combination(a, b, y, tol=DEFAULT):
    """(9 sqrt 3 / (2 pi)) (psi_1 - 2 psi_2 + 2 psi_4 - psi_5)."""
    s = (sigma3_psi(a, b, 1, y, tol) - 2.0 * sigma3_psi(a, b, 2, y, tol)
         + 2.0 * sigma3_psi(a, b, 4, y, tol) - sigma3_psi(a, b, 5, y, tol))
    return 9.0 * math.sqrt(3.0) / (2.0 * math.pi) * s


def sigma3_double_series(a, b, y, terms=400):
    """Double-series form of the sigma = 3 density for p+1Fp(a; b); y < 1."""
    aa, bb = _sigma3_lift(a, b)
    total = 0.0
    small = 0
    ratio = first_product(aa) / first_product(bb)     # (a)_{j+1}/(b)_{j+1} at j = 0
    for j in range(terms):
        inner = 0.0
        for k in range(max((j - 1) // 2, 0), j + 1):
            n = j - k
            if n > k + 1:
                continue
            inner += (-1) ** k * pochhammer([3.0], k) / math.factorial(k) * math.comb(k + 1, n)
        term = ratio * y ** j * inner
        total += term
        small = small + 1 if abs(term) < 1e-17 * abs(total) else 0
        if small >= 3:
            break
        ratio *= first_product([v + j + 1 for v in aa]) / first_product([v + j + 1 for v in bb])
    return 9.0 * math.sqrt(3.0) * y ** 3 / (2.0 * math.pi) * total


def sigma3_phi_rule(a, b, tol=DEFAULT, floor=1e-160):
    """Vectorised sigma = 3 density for p+1Fp(a; b): y -> phi(y) via GRule."""
    aa, bb = _sigma3_lift(a, b)
    rule = GRule(gspec(len(aa), 0, bb, aa), tol, floor=floor)
    c = 9.0 * math.sqrt(3.0) * gamma_ratio(bb, aa) / (2.0 * math.pi)

    def phi(y):
        return c * y ** 3 * rule(lambda t: sigma3_kernel(t * y))
    return phi


def sigma3_value(a, b, z, tol=DEFAULT):
    """int_0^inf phi(y)/(z^3+y^3) dy with phi from sigma3_phi_rule.

    phi(y)/y^3 decays like y^(-1-min a), which can be very slow, so the
    range beyond max(1, |z|) goes through algebraic_tail_quad.
    """
    z3 = z ** 3
    phi = sigma3_phi_rule(a, b, tol)

    def f(y):
        if y == 0.0:
            return 0.0
        return phi(y) / (z3 + y ** 3)

    split = max(1.0, abs(z))
    head = quad_value(f, 0.0, split, tol=tol)
    return head + algebraic_tail_quad(f, split, min(pvec(a)), tol)


def stieltjes_sigma3(a, b, z, tol=DEFAULT):
    return Comparison(pfq_continued(hspec(a, b), -z, tol), sigma3_value(a, b, z, tol))


def sin3arctan_forms(t, y):
    """Three equal expressions for the sigma = 3 kernel (without the 1/t)."""
    s = t * y
    first = (math.sin(3.0 * math.atan(s * math.sin(math.pi / 3) / (1.0 + s * math.cos(math.pi / 3))))
             / (1.0 + 2.0 * s * math.cos(math.pi / 3) + s * s) ** 1.5)
    r3 = 3.0 * math.sqrt(3.0)
    second = r3 * s * (1.0 + s) / (2.0 * (1.0 + s + s * s) ** 3)
    # the last form is 0/0-prone near s = 1: evaluate its rational part exactly
    q = Fraction(s)
    third = r3 * s * float((1 - 2 * q + 2 * q ** 3 - q ** 4) / (1 - q ** 3) ** 3) / 2.0 if q != 1 else second
    return first, second, third


def gamma_cancellation(s):
    """G(s+3)/G(s+1) - 2G(s+8/3)/G(s+2/3) + 2G(s+2)/G(s) - G(s+5/3)/G(s-1/3).

    Exact rationals go through the shifting property; floats through gamma
    ratios.  Returns (value, scale) where scale is the largest term.
    """
    if isinstance(s, (Fraction, int)):
        s = Fraction(s)
        t = [(s + 1) * (s + 2), 2 * (s + Fraction(2, 3)) * (s + Fraction(5, 3)),
             2 * s * (s + 1), (s - Fraction(1, 3)) * (s + Fraction(2, 3))]
    else:
        t = [gamma_ratio([s + 3], [s + 1]), 2 * gamma_ratio([s + 8 / 3], [s + 2 / 3]),
             2 * gamma_ratio([s + 2], [s], den_poles="zero"),
             gamma_ratio([s + 5 / 3], [s - 1 / 3], den_poles="zero")]
    return t[0] - t[1] + t[2] - t[3], max(abs(v) for v in t)


def four_g_combination(a, b, t, tol=DEFAULT):
    """The four shifted G^{3p+4,0}_{3p+4,3p+4} functions whose sum should vanish."""
    a, b = pvec(a), pvec(b)
    common_top = list(delta_vector(b.shifted(1), 3)) + list(delta_vector([4.0], 3))
    common_bot = list(delta_vector(a.shifted(1), 3))
    vals = []
    for first, lead, coef in ((1.0, 3.0, 1.0), (2 / 3, 8 / 3, -2.0), (0.0, 2.0, 2.0),
                              (-1 / 3, 5 / 3, -1.0)):
        spec = gspec(len(common_bot) + 1, 0, [first] + common_top, [lead] + common_bot)
        vals.append(coef * meijer_g(spec, t, tol))
    return sum(vals), max(abs(v) for v in vals)


def newton_leibnitz_repr(a, b, x, tol=DEFAULT):
    """pFq(a; b; 1/x) against 1 + ((a)/(b)) int_0^inf (x+t)^-2 pFq(a+1; b+1; 1/(x+t)) dt."""
    spec = hspec(a, b)
    if spec.p > spec.q:
        raise ValueError("need p <= q")
    a1, b1 = list(spec.a.shifted(1)), list(spec.b.shifted(1))
    c = first_product(spec.a) / first_product(spec.b)

    def f(t):
        u = 1.0 / (x + t)
        return u * u * hyp(a1, b1, u, tol)

    rhs = 1.0 + c * quad_value(f, 0.0, math.inf, tol=tol)
    return Comparison(hyp(spec.a, spec.b, 1.0 / x, tol), rhs)
