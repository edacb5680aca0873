"""Catalog of identities and inequalities, evaluated over deterministic
sample plans, with residual reports."""
import cmath
import csv
import io
import json
import math
import platform
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from . import __version__
from .conditions import (MuntzSpec, am_check, cm_functions, cm_probe, muntz_nonneg,
                         pfp_cm_hypotheses, stieltjes_moment_check)
from .config import DEFAULT
from .core import first_product, gamma_ratio, pochhammer, pvec, rgamma
from .meijerg import gspec, g_slater, mellin_barnes_oracle, sum_integral_constants
from .pfq import cut_values, hspec, hyp, jump_closed_form, mean_closed_form, pfq_continued
from .transforms import (Comparison, laplace_convolution, newton_leibnitz_repr, quad_value,
                         bessel_measure_relation, sigma2_value, sigma3_value, sin3arctan_forms,
                         verify_laplace_p1Fp, verify_laplace_pFp, verify_repr_1_over_x,
                         verify_stieltjes_rho)


# ---- case description ------------------------------------------------------------

@dataclass(frozen=True)
class Expected:
    """equality: residual <= rel_tol.  inequality: every slack >= -rel_tol.
    known_discrepancy: judged as an equality, expected to fail as written."""
    kind: str = "equality"
    rel_tol: float = 1e-6
    note: str = ""


@dataclass(frozen=True)
class SamplePlan:
    """Scrambled Halton points over a parameter box.

    box entries are (name, lo, hi) for continuous coordinates or
    (name, (choice, ...)) for discrete ones.  anchors are fixed parameter
    dicts evaluated first.  accept filters candidates (drawn in order).
    """
    seed: int = 0
    count: int = 10
    box: tuple = ()
    anchors: tuple = ()
    accept: object = None

    def points(self, seed=None):
        seed = self.seed if seed is None else seed
        pts = [dict(p) for p in self.anchors]
        if not self.box or self.count == 0:
            return pts
        sampler = qmc.Halton(d=len(self.box), scramble=True, seed=seed)
        out = []
        drawn = 0
        while len(out) < self.count:
            batch = sampler.random(max(16, 2 * self.count))
            for u in batch:
                drawn += 1
                p = {}
                for ui, dim in zip(u, self.box):
                    if len(dim) == 2:
                        name, choices = dim
                        p[name] = choices[min(int(ui * len(choices)), len(choices) - 1)]
                    else:
                        name, lo, hi = dim
                        p[name] = float(lo + (hi - lo) * ui)
                if self.accept is None or self.accept(p):
                    out.append(p)
                    if len(out) == self.count:
                        break
            if drawn > 10000 * max(self.count, 1):
                raise RuntimeError("sample plan acceptance rate too low")
        return pts + out


@dataclass(frozen=True)
class IdentityCase:
    id: str
    anchor: str
    lhs: str
    rhs: str
    evaluate: object
    plan: SamplePlan
    expected: Expected = Expected()
    domain: str = ""

    @property
    def flagged(self):
        return self.expected.kind == "known_discrepancy"


@dataclass
class SampleResult:
    inputs: dict
    lhs: tuple
    rhs: tuple
    residual: float
    error: str = None


@dataclass
class VerificationReport:
    case_id: str
    status: str
    max_rel_residual: float
    samples: list
    seed: int
    tolerances: dict
    duration_ms: float = 0.0
    expected: str = "equality"
    flagged: bool = False
    environment: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "pass"

    def to_dict(self):
        d = asdict(self)
        d["samples"] = [{k: v for k, v in s.items() if k != "error" or v is not None}
                        for s in d["samples"]]
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["samples"] = [SampleResult(**s) for s in d["samples"]]
        for s in d["samples"]:
            s.lhs, s.rhs = tuple(s.lhs), tuple(s.rhs)
        return cls(**d)


def _pair(v):
    v = complex(v)
    return (float(v.real), float(v.imag))


def _clean(p):
    out = {}
    for k, v in p.items():
        if isinstance(v, complex):
            out[k] = [v.real, v.imag]
        elif isinstance(v, (list, tuple)):
            out[k] = [float(x) for x in v]
        elif isinstance(v, (int, np.integer)):
            out[k] = int(v)
        else:
            out[k] = float(v)
    return out


def _rel(lhs, rhs):
    return Comparison(lhs, rhs).residual


# ---- evaluators ------------------------------------------------------------------

def _F(a, b, z):
    return hyp(a, b, z).real


def _conv(k1, k2, t):
    return laplace_convolution(k1, k2, t)


def _example1(p, corrected=False):
    a, b, t = p["a"], p["b"], p["t"]
    lhs = a * b * _conv(lambda s: _F([a + 1], [2], s), lambda s: _F([b + 1], [2], s), t)
    top = a + b + 1 if corrected else a + b
    rhs = (a + b) * _F([top], [2], t) - a * _F([a + 1], [2], t) - b * _F([b + 1], [2], t)
    return lhs, rhs


def _example2(p):
    a, b, c, t = p["a"], p["b"], p["c"], p["t"]
    s = a + b - c
    k1 = lambda u: _F([s + 1], [2], u)
    k2 = lambda u: _F([c - a + 1, c - b + 1], [c + 1, 2], u)
    lhs = s * _conv(k1, k2, t)
    d = (c - a) * (c - b)
    rhs = (a * b / d * _F([a + 1, b + 1], [c + 1, 2], t) - c * s / d * k1(t) - k2(t))
    return lhs, rhs


def _example3(p):
    a, b, t = p["a"], p["b"], p["t"]
    k = lambda u: _F([a, b], [a + b - 0.5, 2], u)
    lhs = (a - 1) * (b - 1) / (2 * a + 2 * b - 3) * _conv(k, k, t)
    rhs = _F([2 * a - 1, 2 * b - 1, a + b - 1], [a + b - 0.5, 2 * a + 2 * b - 3, 2], t) - k(t)
    return lhs, rhs


def _example4(p):
    a, b, t = p["a"], p["b"], p["t"]
    k1 = lambda u: _F([], [a + 1, 2], u)
    k2 = lambda u: _F([], [b + 1, 2], u)
    lhs = _conv(k1, k2, t) / (a * b)
    rhs = ((a + b) / (a * b) * _F([(a + b) / 2 + 1, (a + b - 1) / 2 + 1], [a + 1, b + 1, a + b, 2], 4 * t)
           - k1(t) / a - k2(t) / b)
    return lhs, rhs


def _example5a(p):
    a, b, t = p["a"], p["b"], p["t"]
    k1 = lambda u: _F([a + 1, b + 1], [a + b + 0.5, 2], u)
    k2 = lambda u: _F([a + 1, b + 1], [a + b + 1.5, 2], u)
    lhs = a * b * _conv(k1, k2, t)
    rhs = (2 * (a + b) * _F([2 * a + 1, 2 * b + 1, a + b + 1], [a + b + 1.5, 2 * a + 2 * b, 2], t)
           - (a + b + 0.5) * k1(t) - (a + b - 0.5) * k2(t))
    return lhs, rhs


def _example5b(p):
    a, b, t = p["a"], p["b"], p["t"]
    k1 = lambda u: _F([a + 1, b + 1], [a + b + 0.5, 2], u)
    k3 = lambda u: _F([a + 1, b], [a + b + 0.5, 2], u)
    lhs = a * b * (b - 1) / (a + b - 0.5) * _conv(k1, k3, t)
    rhs = ((2 * b - 1) * _F([2 * a + 1, 2 * b, a + b], [a + b + 0.5, 2 * a + 2 * b - 1, 2], t)
           - b * k1(t) - (b - 1) * k3(t))
    return lhs, rhs


def _example5c(p, corrected=False):
    a, b, t = p["a"], p["b"], p["t"]
    k2 = lambda u: _F([a + 1, b + 1], [a + b + 1.5, 2], u)
    k4 = lambda u: _F([1.5 - a, 1.5 - b], [2.5 - a - b, 2], u)
    lhs = (a * b * (0.5 - a) * (0.5 - b) / ((a + b + 0.5) * (1.5 - a - b))) * _conv(k2, k4, t)
    last = k4(t) if corrected else _F([0.5, 1.5 - b], [2.5 - a - b, 2], t)
    rhs = ((a - b + 0.5) * (b - a + 0.5) / (2 * (a + b + 0.5) * (1.5 - a - b))
           * _F([1.5, a - b + 1.5, b - a + 1.5], [a + b + 1.5, 2.5 - a - b, 2], t)
           - a * b / (a + b + 0.5) * k2(t)
           - (0.5 - a) * (0.5 - b) / (1.5 - a - b) * last)
    return lhs, rhs


def _vec(p, name, n):
    return [p[f"{name}{i + 1}"] for i in range(n)]


def _jump_general(p):
    a, b, x = _vec(p, "a", 3), _vec(p, "b", 2), p["x"]
    spec = hspec(a, b)
    return jump_closed_form(spec, x), cut_values(spec, x).jump


def _mean_general(p):
    a, b, x = _vec(p, "a", 3), _vec(p, "b", 2), p["x"]
    spec = hspec(a, b)
    return mean_closed_form(spec, x), cut_values(spec, x).mean


def gauss_jump_formula(a, b, c, x):
    """Jump of 2F1(a, b; c) across the cut at x > 1 via the 1-x form."""
    pref = 2j * math.pi * gamma_ratio([c], [a, b]) * rgamma(1 + c - a - b)
    tail = pfq_continued(hspec([c - a, c - b], [c - a - b + 1]), 1.0 - x)
    return pref * (x - 1.0) ** (c - a - b) * tail


def _jump_2f1(p):
    a, b, c, x = p["a"], p["b"], p["c"], p["x"]
    spec = hspec([a, b], [c])
    formula = gauss_jump_formula(a, b, c, x)
    general = jump_closed_form(spec, x)
    direct = cut_values(spec, x).jump
    r = max(_rel(formula, general), _rel(formula, direct))
    return formula, direct, r


def _polar(p):
    return p["r"] * cmath.exp(1j * p["theta"]) if p.get("theta", 0.0) else p["r"]


def _sigma2(p):
    a, b = _vec(p, "a", 2), [p["b1"]]
    z = _polar(p)
    return pfq_continued(hspec(a, b), -z), sigma2_value(a, b, z)


def _sigma3(p):
    n = int(p.get("p", 1))
    a, b = _vec(p, "a", n + 1), _vec(p, "b", n)
    z = _polar(p)
    return pfq_continued(hspec(a, b), -z), sigma3_value(a, b, z)


def gamma_cancellation_sides(s):
    """The reduced gamma identity split into its positive and negative parts."""
    pos = gamma_ratio([s + 3], [s + 1]) + 2 * gamma_ratio([s + 2], [s])
    neg = 2 * gamma_ratio([s + 8 / 3], [s + 2 / 3]) + gamma_ratio([s + 5 / 3], [s - 1 / 3])
    return pos, neg


def gamma_cancellation_exact(s):
    """Same identity in rational arithmetic via Gamma(z+1) = z Gamma(z)."""
    s = Fraction(s)
    return ((s + 1) * (s + 2) - 2 * (s + Fraction(2, 3)) * (s + Fraction(5, 3))
            + 2 * s * (s + 1) - (s - Fraction(1, 3)) * (s + Fraction(2, 3)))


def _gamma_cancel(p):
    return gamma_cancellation_sides(p["s"])


def _sin3(p):
    f, s, th = sin3arctan_forms(p["t"], p["y"])
    return f, s, max(_rel(f, s), _rel(f, th))


def _repr(p):
    return tuple(verify_repr_1_over_x([p["a1"]], [p["b1"], p["b2"]], p["x"], p.get("alpha", 1.0)))


def _laplace_pfp(p):
    a = _vec(p, "a", 2)
    b = [a[0] + p["d1"], a[1] + p["d2"]]
    return tuple(verify_laplace_pFp(a, b, p["z"]))


def _laplace_p1fp(p):
    a = _vec(p, "a", 2)
    b = [a[0] + p["d1"]]
    return tuple(verify_laplace_p1Fp(a, b, p["z"]))


def _rho(p):
    a = _vec(p, "a", 2)
    return tuple(verify_stieltjes_rho(a, [p["b1"]], p["z"]))


def _foffprime(p):
    return tuple(newton_leibnitz_repr([p["a1"]], [p["b1"]], p["x"]))


def _bessel(p):
    u = [p["u1"], p["u2"]]
    m = [p["m1"], p["m2"]]
    t = p["t"]
    series = 0.0
    for k in range(200):
        term = sum(mi * ui ** (k + 1) for ui, mi in zip(u, m)) * t ** k / (
            math.factorial(k) * math.factorial(k + 1))
        series += term
        if k > 5 and abs(term) < 1e-18 * abs(series):
            break
    return bessel_measure_relation(u, m, t), series


# ---- sum-integral identity ---------------------------------------------------------

def theorem41_lhs(a, b, alpha, beta, m):
    """Finite sum of gamma-product ratios."""
    a, b = pvec(a), pvec(b)
    s = alpha + beta
    total = 0.0
    for k in range(m + 1):
        total += gamma_ratio([v + k for v in a] + [v + s + m - k for v in a],
                             [v + k for v in b] + [v + s + m - k for v in b], den_poles="zero")
        total -= gamma_ratio([v + alpha + k for v in a] + [v + beta + m - k for v in a],
                             [v + alpha + k for v in b] + [v + beta + m - k for v in b],
                             den_poles="zero")
    return total


def theorem41_rhs(a, b, alpha, beta, m, tol=DEFAULT):
    """int_0^1 G^{p,p}_{2p,2p}(x) (1-x^{m+1})(1-x^a)(1-x^b) / (x^{a+b+1}(1-x)) dx.

    G on (0,1) is its Slater sum sum_j M_j x^{a_j+alpha+beta} F_j(x); the
    factor (1-x^{m+1})/(1-x) is replaced by 1 + x + ... + x^m.
    """
    a, b = pvec(a), pvec(b)
    p = len(a)
    M = sum_integral_constants(a, b, alpha, beta, m).M
    s = alpha + beta + m
    rows = []
    for j, aj in enumerate(a):
        if M[j] == 0.0:
            continue
        top = [v + aj + s for v in a] + [1.0 - v + aj for v in b]
        bot = [1.0 - v + aj for i, v in enumerate(a) if i != j] + [v + aj + s for v in b]
        rows.append((M[j], aj, top, bot))
    if not rows:
        return 0.0

    def f(x):
        geo = sum(x ** k for k in range(m + 1))
        w = geo * (1.0 - x ** alpha) * (1.0 - x ** beta)
        return w * sum(c * x ** (aj - 1.0) * hyp(top, bot, x, tol).real for c, aj, top, bot in rows)

    excess = min(sum(bot) - sum(top) for _, _, top, bot in rows)
    hi_exp = excess + 2.0 if excess < 0 else 0.0
    lo_exp = min(aj for _, aj, _, _ in rows) - 1.0
    mid = 0.5
    return (quad_value(f, 0.0, mid, (lo_exp, 0.0), tol)
            + quad_value(f, mid, 1.0, (0.0, hi_exp), tol))


def verify_theorem41(a, b, alpha, beta, m, tol=DEFAULT):
    a, b = pvec(a), pvec(b)
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if not all(0 < v < sum(b) for v in a):
        raise ValueError("need 0 < a_j < sum(b)")
    return Comparison(theorem41_lhs(a, b, alpha, beta, m), theorem41_rhs(a, b, alpha, beta, m, tol))


def corollary41_rhs(a, b, alpha, beta, m, tol=DEFAULT):
    """p = 1 form of the sum-integral identity with a 2F1 integrand."""
    s = alpha + beta + m
    pref = gamma_ratio([2 * a + s], [a + b + s]) * rgamma(b - a)
    if pref == 0.0:
        return 0.0
    up, lo = [2 * a + s, 1 + a - b], [a + b + s]

    def f(x):
        geo = sum(x ** k for k in range(m + 1))
        return x ** (a - 1) * geo * (1 - x ** alpha) * (1 - x ** beta) * hyp(up, lo, x, tol).real

    excess = lo[0] - sum(up)
    hi_exp = excess + 2.0 if excess < 0 else 0.0
    return pref * (quad_value(f, 0.0, 0.5, (a - 1.0, 0.0), tol)
                   + quad_value(f, 0.5, 1.0, (0.0, hi_exp), tol))


def sum_integral_endpoint_exponent(a, b, alpha, beta, m):
    """Exponent of (1-x) in the sum-integral integrand at x = 1 (0 if bounded)."""
    a, b = pvec(a), pvec(b)
    s = alpha + beta + m
    worst = 0.0
    for j, aj in enumerate(a):
        top = [v + aj + s for v in a] + [1.0 - v + aj for v in b]
        bot = [1.0 - v + aj for i, v in enumerate(a) if i != j] + [v + aj + s for v in b]
        worst = min(worst, sum(bot) - sum(top) + 2.0)
    return worst


def _t41_ok(p):
    n = int(p["p"])
    a, b = _vec(p, "a", n), _vec(p, "b", n)
    return sum_integral_endpoint_exponent(a, b, p["alpha"], p["beta"], int(p["m"])) >= -0.5


def _c41_ok(p):
    return sum_integral_endpoint_exponent([p["a"]], [p["b"]], p["alpha"], p["beta"], int(p["m"])) >= -0.5


def _theorem41(p):
    n = int(p["p"])
    a, b = _vec(p, "a", n), _vec(p, "b", n)
    return tuple(verify_theorem41(a, b, p["alpha"], p["beta"], int(p["m"])))


def _corollary41(p):
    a, b, al, be, m = p["a"], p["b"], p["alpha"], p["beta"], int(p["m"])
    return theorem41_lhs([a], [b], al, be, m), corollary41_rhs(a, b, al, be, m)


# ---- inequalities -------------------------------------------------------------------

@dataclass(frozen=True)
class Bound:
    name: str
    lower: float
    value: float
    upper: float

    @property
    def slack(self):
        """Smallest relative margin of the two-sided bound (negative = violated)."""
        return min((self.value - self.lower) / abs(self.value),
                   (self.upper - self.value) / abs(self.value))


def inequality_bounds(a, b, z, tol=DEFAULT, verbatim_third=False):
    """The three two-sided distortion bounds for p+1Fp(a; b; z), Re z < 1.

    The third middle term is |F(a+1; b+1; z) / (F(a; b; z) - 1)|, which is
    what the normalised-function argument produces; verbatim_third=True
    uses |(F(a+1; b+1; z) - 1) / F(a; b; z)| instead.
    """
    a, b = pvec(a), pvec(b)
    z = complex(z)
    if not z.real < 1 or z == 0:
        raise ValueError("need Re z < 1 and z != 0")
    A, B = first_product(a), first_product(b)
    F = complex(pfq_continued(hspec(a, b), z, tol))
    F1 = complex(pfq_continued(hspec(a.shifted(1), b.shifted(1)), z, tol))
    u, v = abs(z - 2), abs(z)
    third = abs((F1 - 1) / F) if verbatim_third else abs(F1 / (F - 1))
    return (
        Bound("value", 2 * A * u * v / (B * (u + v) ** 2), abs(F - 1), 2 * A * u * v / (B * (u - v) ** 2)),
        Bound("derivative", 4 * (u - v) / (u + v) ** 3, abs(F1), 4 * (u + v) / (u - v) ** 3),
        Bound("log_derivative", 2 * B * (u - v) / (A * v * u * (u + v)), third,
              2 * B * (u + v) / (A * v * u * (u - v))),
    )


def verify_inequalities(a, b, z, tol=DEFAULT, verbatim_third=False):
    """All six bounds at (a, b, z): (bounds, min slack, passed)."""
    bounds = inequality_bounds(a, b, z, tol, verbatim_third)
    slack = min(bd.slack for bd in bounds)
    return bounds, slack, slack >= -tol.inequality_slack


def _ineq_params(p):
    a = [p["a1"], p["a2"], p["a3"]]
    b = [p["b1"], p["b2"]]
    return a, b, complex(p["x"], p["y"])


def _ineq_admissible(p):
    a, b, z = _ineq_params(p)
    if abs(z) < 1e-3:
        return False
    return muntz_nonneg(MuntzSpec(a[1:], b))[0]


def _ineq(p, verbatim=False):
    a, b, z = _ineq_params(p)
    _, slack, _ = verify_inequalities(a, b, z, verbatim_third=verbatim)
    return slack, 0.0, slack


def _ineq_verbatim(p):
    """Verbatim third bound judged as a strict check: residual = violation."""
    a, b, z = _ineq_params(p)
    bounds = inequality_bounds(a, b, z, verbatim_third=True)
    slack = bounds[2].slack
    return slack, 0.0, max(0.0, -slack)


def _koebe(p):
    z = p["z"]
    g = (1 - z) ** -2
    u, v = abs(z - 2), abs(z)
    lower = 2 * 2 * u * v / (u + v) ** 2
    return abs(g - 1), lower


# ---- monotonicity suite -------------------------------------------------------------

def _cm_params(p):
    a1 = p["a1"]
    a = [a1, a1 + p["da"]]
    b1 = a1 + 1 + p["db1"]
    b = [b1, max(b1, 1.5) + p["db2"]]
    return a, b


def _cm_admissible(p):
    a, b = _cm_params(p)
    return pfp_cm_hypotheses(a, b) and muntz_nonneg(MuntzSpec(a, b))[0]


def _cm_suite(p):
    a, b = _cm_params(p)
    grid = np.geomspace(0.1, 10.0, 12)
    ok = 0
    for f in cm_functions(a, b).values():
        ok += cm_probe(f, grid).passed
    coeffs = [pochhammer(a, k) / pochhammer(b, k) / math.factorial(k) for k in range(25)]
    ok += am_check(coeffs).passed
    moments = [pochhammer(a, k) / pochhammer(b, k) for k in range(12)]
    ok += stieltjes_moment_check(moments, 5).passed
    return float(ok), 5.0


def _gslater_mb(p):
    spec = gspec(2, 0, [p["b1"] + p["d1"], p["b2"] + p["d2"]], [p["b1"], p["b2"]])
    return g_slater(spec, p["x"]), mellin_barnes_oracle(spec, p["x"])


# ---- catalog ----------------------------------------------------------------------

_T = ("t", 0.2, 2.0)


def _case(id, anchor, lhs, rhs, evaluate, plan, expected=Expected(), domain=""):
    return IdentityCase(id, anchor, lhs, rhs, evaluate, plan, expected, domain)


def _build_catalog():
    E, K = Expected, "known_discrepancy"
    cases = [
        _case("example1", "Laplace convolution of two 1F0 measures (as printed: upper a+b)",
              "ab int 1F1(a+1;2;t-u) 1F1(b+1;2;u) du",
              "(a+b) 1F1(a+b;2;t) - a 1F1(a+1;2;t) - b 1F1(b+1;2;t)",
              _example1, SamplePlan(11, 8, (("a", 0.3, 2.0), ("b", 0.3, 2.0), _T),
                                    ({"a": 1.0, "b": 1.0, "t": 1.0},)),
              E(K, 1e-6, "first right-hand upper parameter must be a+b+1")),
        _case("example1_corrected", "Laplace convolution of two 1F0 measures (upper a+b+1)",
              "ab int 1F1(a+1;2;t-u) 1F1(b+1;2;u) du",
              "(a+b) 1F1(a+b+1;2;t) - a 1F1(a+1;2;t) - b 1F1(b+1;2;t)",
              lambda p: _example1(p, True),
              SamplePlan(11, 8, (("a", 0.3, 2.0), ("b", 0.3, 2.0), _T),
                         ({"a": 1.0, "b": 1.0, "t": 1.0},))),
        _case("example2", "Euler transformation convolution (1F1 x 2F2)",
              "(a+b-c) int 1F1 2F2", "2F2 / 1F1 / 2F2 combination", _example2,
              SamplePlan(12, 8, (("a", 0.3, 1.5), ("b", 0.3, 1.5), ("c", 2.2, 3.5), _T))),
        _case("example3", "Clausen identity convolution (2F2 self-convolution vs 3F3)",
              "(a-1)(b-1)/(2a+2b-3) int 2F2 2F2", "3F3 - 2F2", _example3,
              SamplePlan(13, 8, (("a", 1.2, 2.5), ("b", 1.2, 2.5), _T))),
        _case("example4", "Bessel product formula convolution (0F2 x 0F2 vs 2F4 at 4t)",
              "int 0F2 0F2 / (ab)", "2F4(4t) combination", _example4,
              SamplePlan(14, 8, (("a", 0.5, 2.0), ("b", 0.5, 2.0), _T))),
        _case("example5a", "first Orr identity convolution", "ab int 2F2 2F2", "3F3 - 2F2 - 2F2",
              _example5a, SamplePlan(15, 8, (("a", 0.2, 1.2), ("b", 0.2, 1.2), _T))),
        _case("example5b", "second Orr identity convolution", "ab(b-1)/(a+b-1/2) int 2F2 2F2",
              "3F3 - 2F2 - 2F2", _example5b,
              SamplePlan(16, 8, (("a", 0.3, 1.2), ("b", 0.3, 1.2), _T))),
        _case("example5c", "third Orr identity convolution (as printed: 3/2-1)",
              "int 2F2(a+1,b+1) 2F2(3/2-a,3/2-b)", "3F3 - 2F2 - 2F2(3/2-1, 3/2-b)",
              _example5c, SamplePlan(17, 8, (("a", 0.1, 0.35), ("b", 0.2, 0.6), _T)),
              E(K, 1e-6, "last upper parameter must be 3/2-a")),
        _case("example5c_corrected", "third Orr identity convolution (3/2-a)",
              "int 2F2(a+1,b+1) 2F2(3/2-a,3/2-b)", "3F3 - 2F2 - 2F2(3/2-a, 3/2-b)",
              lambda p: _example5c(p, True),
              SamplePlan(17, 8, (("a", 0.1, 0.35), ("b", 0.2, 0.6), _T))),
        _case("jump_general", "jump of p+1Fp across the cut as a G^{p+1,0}_{p+1,p+1}",
              "2 pi i Gamma(b)/Gamma(a) G(1/x | 1,b; a)", "F(x+i0) - F(x-i0)", _jump_general,
              SamplePlan(21, 30, tuple((f"a{i}", 0.2, 2.5) for i in (1, 2, 3))
                         + (("b1", 0.3, 3.0), ("b2", 0.3, 3.0), ("x", 1.2, 6.0))),
              E("equality", 1e-8)),
        _case("mean_general", "average of the two cut values as a G^{p+1,1}_{p+2,p+2}",
              "-pi Gamma(b)/(sqrt(x) Gamma(a)) G(1/x | 1/2,1,b-1/2; a-1/2,1)",
              "(F(x+i0) + F(x-i0))/2", _mean_general,
              SamplePlan(22, 30, tuple((f"a{i}", 0.2, 2.5) for i in (1, 2, 3))
                         + (("b1", 0.3, 3.0), ("b2", 0.3, 3.0), ("x", 1.2, 6.0))),
              E("equality", 1e-8)),
        _case("jump_2F1", "2F1 jump across the cut via the 1-x connection",
              "2 pi i Gamma(c)/(Gamma(a)Gamma(b)Gamma(1+c-a-b)) (x-1)^{c-a-b} 2F1(c-a,c-b;c-a-b+1;1-x)",
              "general jump formula and direct cut values", _jump_2f1,
              SamplePlan(23, 12, (("a", 0.2, 2.5), ("b", 0.2, 2.5), ("c", 0.5, 3.0), ("x", 1.2, 6.0)),
                         ({"a": 1.0, "b": 1.0, "c": 2.0, "x": 2.0},)),
              E("equality", 1e-8)),
        _case("rho_repr", "p+1Fp(-z) as a Stieltjes transform of the G-density on (1, inf)",
              "p+1Fp(a;b;-z)", "int_1^inf rho(x)/(x+z) dx", _rho,
              SamplePlan(24, 8, (("a1", 0.2, 1.0), ("a2", 0.5, 2.0), ("b1", 2.1, 3.5), ("z", 0.1, 5.0)))),
        _case("sigma2_repr", "sigma = 2 Stieltjes-type representation with a 2p+2F2p+1 density",
              "p+1Fp(a;b;-z)", "2(a)/(pi(b)) int t^2/(z^2+t^2) F(...;-t^2) dt", _sigma2,
              SamplePlan(31, 9, (("a1", 0.3, 2.0), ("a2", 0.3, 2.0), ("b1", 0.5, 3.0),
                                 ("r", 0.1, 3.0), ("theta", -1.2, 1.2)),
                         ({"a1": 0.5, "a2": 1.0, "b1": 1.0, "r": 0.8, "theta": 0.0},)),
              E("equality", 1e-6)),
        _case("sigma3_repr", "sigma = 3 Stieltjes-type representation, real double-integral density",
              "p+1Fp(a;b;-z)", "int phi(y)/(z^3+y^3) dy", _sigma3,
              SamplePlan(32, 4, (("p", (1, 2)), ("a1", 0.3, 1.5), ("a2", 0.3, 1.5), ("a3", 0.3, 1.5),
                                 ("b1", 0.5, 2.5), ("b2", 0.5, 2.5), ("r", 0.1, 2.5),
                                 ("theta", -0.9, 0.9)),
                         ({"p": 1, "a1": 0.5, "a2": 1.0, "b1": 1.0, "r": 0.6, "theta": 0.0},)),
              E("equality", 1e-5)),
        _case("gamma_cancellation", "four-G cancellation reduced to a gamma identity",
              "G(s+3)/G(s+1) + 2G(s+2)/G(s)", "2G(s+8/3)/G(s+2/3) + G(s+5/3)/G(s-1/3)",
              _gamma_cancel, SamplePlan(33, 100, (("s", 0.5, 8.0),), ({"s": 1.0},)),
              E("equality", 1e-12)),
        _case("sin3arctan", "sin(3 arctan) kernel reduction, three equal forms",
              "sin(3 arctan(...))/(...)^{3/2}", "3 sqrt3 s(1+s)/(2(1+s+s^2)^3)", _sin3,
              SamplePlan(34, 100, (("t", 0.0, 1.0), ("y", 0.0, 1.0))), E("equality", 1e-12)),
        _case("repr_1_over_x", "pFq(a;b;alpha/x) as a Laplace transform of delta_0 + density",
              "1F2(a;b;alpha/x)", "int e^{-xt} [alpha (a)/(b) F(a+1;b+1,2;alpha t) + delta_0] dt",
              _repr, SamplePlan(41, 8, (("a1", 0.3, 2.0), ("b1", 0.5, 3.0), ("b2", 0.5, 3.0),
                                        ("x", 0.5, 4.0), ("alpha", 0.5, 4.0)))),
        _case("laplace_pFp", "pFp(-z) as a Laplace transform of a G^{p,0}_{p,p} density",
              "pFp(a;b;-z)", "Gamma(b)/Gamma(a) int_0^1 e^{-zt} G(t|b;a) dt/t", _laplace_pfp,
              SamplePlan(42, 20, (("a1", 0.3, 2.0), ("a2", 0.3, 2.0), ("d1", 0.2, 2.0),
                                  ("d2", 0.2, 2.0), ("z", -3.0, 8.0))), E("equality", 1e-7)),
        _case("laplace_p1Fp", "p+1Fp(-z) as a Laplace transform of a G^{p+1,0}_{p,p+1} density",
              "p+1Fp(a;b;-z)", "Gamma(b)/Gamma(a) int_0^inf e^{-zt} G(t|b;a) dt/t", _laplace_p1fp,
              SamplePlan(43, 20, (("a1", 0.3, 2.0), ("a2", 0.3, 2.0), ("d1", 0.0, 2.0),
                                  ("z", 0.05, 8.0))), E("equality", 1e-7)),
        _case("foffprime", "phi(1/x) = phi(0) + int phi'(1/(x+t))/(x+t)^2 dt for 1F1",
              "1F1(a;b;1/x)", "1 + (a/b) int (x+t)^{-2} 1F1(a+1;b+1;1/(x+t)) dt", _foffprime,
              SamplePlan(44, 8, (("a1", 0.3, 2.0), ("b1", 0.5, 3.0), ("x", 0.5, 4.0)))),
        _case("bessel_measure", "representing density of phi(1/x) from the measure of phi(-x)",
              "sum m_k u_k 0F1(-;2;u_k t)", "sum_k phi_{k+1} t^k / k!", _bessel,
              SamplePlan(45, 8, (("u1", 0.1, 2.0), ("u2", 0.1, 2.0), ("m1", 0.1, 1.0),
                                 ("m2", 0.1, 1.0), ("t", 0.1, 5.0)),
                         ({"u1": 1.0, "u2": 1.0, "m1": 1.0, "m2": 0.0, "t": 0.7},)),
              E("equality", 1e-10)),
        _case("theorem41", "finite gamma-ratio sum as an integral of G^{p,p}_{2p,2p}",
              "sum_k gamma-product ratios", "int_0^1 G(x) (1-x^{m+1})(1-x^a)(1-x^b)/(x^{a+b+1}(1-x)) dx",
              _theorem41,
              SamplePlan(51, 12, (("p", (1, 2)), ("m", (0, 1, 2)), ("a1", 0.3, 1.2), ("a2", 0.3, 1.2),
                                  ("b1", 0.6, 2.0), ("b2", 0.6, 2.0), ("alpha", 0.2, 1.5),
                                  ("beta", 0.2, 1.5)),
                         ({"p": 1, "m": 0, "a1": 0.6, "b1": 1.1, "alpha": 0.5, "beta": 0.5},),
                         accept=_t41_ok)),
        _case("corollary41", "p = 1 gamma-ratio sum as an integral of 2F1",
              "sum_k gamma-product ratios", "Gamma-prefactor int x^{a-1} (...) 2F1(...;x) dx/(1-x)",
              _corollary41,
              SamplePlan(52, 10, (("m", (0, 1, 2)), ("a", 0.3, 1.5), ("b", 0.4, 2.0),
                                  ("alpha", 0.2, 1.5), ("beta", 0.2, 1.5)),
                         ({"m": 1, "a": 0.8, "b": 0.8, "alpha": 0.4, "beta": 0.9},),
                         accept=_c41_ok)),
        _case("cm_suite", "CM of pFp(-x), pFp(1/x), x^{-a_p} pFp(-1/x); AM and moment checks",
              "checks passed", "5", _cm_suite,
              SamplePlan(61, 10, (("a1", 0.1, 1.0), ("da", 0.0, 2.0), ("db1", 0.0, 1.5),
                                  ("db2", 0.0, 2.0)),
                         ({"a1": 0.5, "da": 0.5, "db1": 0.1, "db2": 0.0},), accept=_cm_admissible)),
        _case("inequalities", "distortion bounds for p+1Fp in Re z < 1 (six bounds)",
              "min relative slack", "0", _ineq,
              SamplePlan(71, 100, (("a1", 0.1, 1.0), ("a2", 0.2, 2.0), ("a3", 0.2, 2.0),
                                   ("b1", 0.2, 3.0), ("b2", 0.2, 3.0), ("x", -6.0, 0.95),
                                   ("y", -6.0, 6.0)), accept=_ineq_admissible),
              E("inequality", DEFAULT.inequality_slack)),
        _case("ineq3_verbatim", "third distortion bound with |(F(a+1;b+1)-1)/F| as printed",
              "min relative slack", "0", _ineq_verbatim,
              SamplePlan(71, 100, (("a1", 0.1, 1.0), ("a2", 0.2, 2.0), ("a3", 0.2, 2.0),
                                   ("b1", 0.2, 3.0), ("b2", 0.2, 3.0), ("x", -6.0, 0.95),
                                   ("y", -6.0, 6.0)), accept=_ineq_admissible),
              E(K, DEFAULT.inequality_slack,
                "middle term must be |F(a+1;b+1;z)/(F(a;b;z)-1)|")),
        _case("koebe", "2F1(1,2;1;z) attains the lower value bound on the negative axis",
              "|(1-z)^-2 - 1|", "2(a)/(b) |z-2||z|/(|z-2|+|z|)^2", _koebe,
              SamplePlan(72, 10, (("z", -5.0, -0.1),), ({"z": -1.0},)), E("equality", 1e-12)),
        _case("gslater_vs_mb", "Slater sum vs Mellin-Barnes quadrature for G^{2,0}_{2,2}",
              "g_slater", "mellin_barnes_oracle", _gslater_mb,
              SamplePlan(81, 30, (("b1", 0.2, 2.0), ("b2", 0.2, 2.0), ("d1", 0.3, 2.0),
                                  ("d2", 0.3, 2.0), ("x", 0.05, 0.95))),
              E("equality", 1e-7)),
    ]
    ids = [c.id for c in cases]
    assert len(ids) == len(set(ids))
    return {c.id: c for c in cases}


CATALOG = _build_catalog()
ALIASES = {"sigma3_jump_cancel": "gamma_cancellation",
           "gamma_sum_integral": "theorem41", "gamma_sum_integral_p1": "corollary41"}


def resolve_id(cid):
    """Catalog id for a name or alias; KeyError if unknown."""
    cid = ALIASES.get(cid, cid)
    if cid not in CATALOG:
        raise KeyError(cid)
    return cid


def case_seed(case, seed=None):
    """Per-case seed: the plan's own seed, or one derived from a run seed."""
    if seed is None:
        return case.plan.seed
    return (int(seed) * 1000003 + zlib.crc32(case.id.encode())) % (2 ** 32)


def _judge(case, residuals, rel_tol):
    if case.expected.kind == "inequality":
        return all(r >= -rel_tol for r in residuals)
    return all(r <= rel_tol for r in residuals)


def run_case(case, seed=None, tol=DEFAULT, timings=False, rel_tol=None):
    """Evaluate every sample of a case.  rel_tol overrides the case tolerance."""
    if isinstance(case, str):
        case = CATALOG[resolve_id(case)]
    rel_tol = case.expected.rel_tol if rel_tol is None else float(rel_tol)
    s = case_seed(case, seed)
    t0 = time.perf_counter()
    samples = []
    errored = False
    for p in case.plan.points(s):
        try:
            out = case.evaluate(p)
            if isinstance(out, Comparison):
                out = (out.lhs, out.rhs)
            lhs, rhs = out[0], out[1]
            res = out[2] if len(out) > 2 else _rel(lhs, rhs)
            samples.append(SampleResult(_clean(p), _pair(lhs), _pair(rhs), float(res)))
        except Exception as exc:
            errored = True
            samples.append(SampleResult(_clean(p), (math.nan, math.nan), (math.nan, math.nan),
                                        math.nan, f"{type(exc).__name__}: {exc}"))
    residuals = [smp.residual for smp in samples if smp.error is None]
    if case.expected.kind == "inequality":
        worst = min(residuals) if residuals else math.nan
    else:
        worst = max(residuals) if residuals else math.nan
    if errored:
        status = "errored"
    else:
        status = "pass" if _judge(case, residuals, rel_tol) else "fail"
    ms = (time.perf_counter() - t0) * 1000.0 if timings else 0.0
    tols = dict(tol.as_dict(), case_rel_tol=rel_tol)
    return VerificationReport(case.id, status, float(worst), samples, s, tols, ms,
                              case.expected.kind, case.flagged, environment())


def environment():
    return {"package": "hyperverify", "version": __version__,
            "numpy": np.__version__, "python": platform.python_version()}


def _run_by_id(args):
    cid, seed, timings, rel_tol = args
    return run_case(CATALOG[cid], seed, DEFAULT, timings, rel_tol)


def run_cases(ids, seed=None, parallelism=1, timings=False, rel_tol=None):
    """Run several cases; report order follows ids whatever the worker count."""
    jobs = [(resolve_id(i), seed, timings, rel_tol) for i in ids]
    if parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as ex:
            return list(ex.map(_run_by_id, jobs))
    return [_run_by_id(j) for j in jobs]


def summarize(reports):
    counts = {"pass": 0, "fail": 0, "errored": 0}
    for r in reports:
        counts[r.status] += 1
    return counts


def emit_report(reports, fmt="json"):
    """Deterministic serialization of a report list (json, csv or text)."""
    reports = list(reports)
    if fmt == "json":
        doc = {"summary": summarize(reports), "reports": [r.to_dict() for r in reports]}
        return json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["case_id", "status", "max_rel_residual", "duration_ms"])
        for r in reports:
            w.writerow([r.case_id, r.status, repr(r.max_rel_residual), repr(r.duration_ms)])
        return buf.getvalue()
    if fmt == "text":
        lines = []
        for r in reports:
            flag = " (known discrepancy)" if r.flagged else ""
            label = "min slack" if r.expected == "inequality" else "max residual"
            lines.append(f"{r.case_id:<22} {r.status.upper():<8} {label} {r.max_rel_residual:.3e}"
                         f" over {len(r.samples)} samples{flag}")
        c = summarize(reports)
        lines.append(f"pass={c['pass']} fail={c['fail']} errored={c['errored']}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def load_report(text):
    doc = json.loads(text)
    return [VerificationReport.from_dict(d) for d in doc["reports"]]


def exit_code(reports, explicit=()):
    """0 when every counted case passes, 1 on a failure, 3 when only errors remain.

    Flagged (known-discrepancy) cases count only when named explicitly.
    """
    explicit = set(explicit)
    counted = [r for r in reports if not r.flagged or r.case_id in explicit]
    if any(r.status == "fail" for r in counted):
        return 1
    if any(r.status == "errored" for r in counted):
        return 3
    return 0
