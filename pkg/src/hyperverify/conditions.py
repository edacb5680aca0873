"""Numerical probes for the parameter hypotheses: Muntz nonnegativity,
weak supermajorization, complete/absolute monotonicity and the Stieltjes
moment property."""
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .core import pochhammer, pvec
from .pfq import hyp


@dataclass(frozen=True)
class MuntzSpec:
    """v_{a,b}(t) = sum_k (t^a_k - t^b_k) on [0, 1]."""
    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", pvec(self.a))
        object.__setattr__(self, "b", pvec(self.b))
        if len(self.a) != len(self.b):
            raise ValueError("a and b must have equal lengths")


def muntz(a, b):
    return MuntzSpec(a, b)


def muntz_eval(spec, t):
    """v_{a,b}(t); exactly 0 at t = 1.  Accepts scalars or arrays."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for ak, bk in zip(spec.a, spec.b):
        out = out + (t ** ak - t ** bk)
    return float(out) if out.ndim == 0 else out


def _muntz_deriv(spec, t):
    out = 0.0
    for ak, bk in zip(spec.a, spec.b):
        out += ak * t ** (ak - 1.0) - bk * t ** (bk - 1.0)
    return out


@dataclass(frozen=True)
class MuntzCertificate:
    nonnegative: bool
    t_min: float
    v_min: float


def muntz_nonneg(spec, n_grid=2049, slack=0.0):
    """Scan v_{a,b} on a Chebyshev-spaced grid of [0, 1], then refine.

    Interior minima are located by bisection on sign changes of v' between
    grid neighbours.  Returns (passed, MuntzCertificate) where the
    certificate carries the smallest value found and where.
    """
    if any(v <= 0 for v in spec.a + spec.b):
        raise ValueError("Muntz exponents must be positive")
    k = np.arange(n_grid)
    t = 0.5 * (1.0 - np.cos(np.pi * k / (n_grid - 1)))
    v = muntz_eval(spec, t)
    i = int(np.argmin(v))
    best_t, best_v = float(t[i]), float(v[i])
    interior = t[1:-1]
    d = np.array([_muntz_deriv(spec, x) for x in interior])
    for j in np.nonzero((d[:-1] < 0.0) & (d[1:] >= 0.0))[0]:
        lo, hi = interior[j], interior[j + 1]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if _muntz_deriv(spec, mid) < 0.0:
                lo = mid
            else:
                hi = mid
        tm = 0.5 * (lo + hi)
        vm = muntz_eval(spec, tm)
        if vm < best_v:
            best_t, best_v = tm, vm
    ok = best_v >= -slack
    return ok, MuntzCertificate(ok, best_t, best_v)


def weak_supermajorization(a, b):
    """True iff every prefix sum of sorted(a) is <= that of sorted(b)."""
    a, b = pvec(a), pvec(b)
    if len(a) != len(b):
        raise ValueError("a and b must have equal lengths")
    sa = np.cumsum(sorted(a))
    sb = np.cumsum(sorted(b))
    return bool(np.all(sa <= sb + 1e-15 * np.maximum(1.0, np.abs(sb))))


@dataclass(frozen=True)
class MonotonicityVerdict:
    kind: str
    passed: bool
    max_order_checked: int
    witness: tuple = None

    def __post_init__(self):
        if self.passed != (self.witness is None):
            raise ValueError("witness must be present exactly when the check fails")


class TaylorFunction:
    """A function bundled with its Taylor data at a point.

    taylor(x, n) returns [f(x), f'(x), f''(x)/2!, ..., f^(n)(x)/n!].
    """

    def __init__(self, f, taylor):
        self.f = f
        self.taylor = taylor

    def __call__(self, x):
        return self.f(x)


def pfp_negative(a, b, tol=DEFAULT):
    """x -> pFq(a; b; -x) with Taylor data from the derivative formula."""
    a, b = pvec(a), pvec(b)

    def f(x):
        return hyp(a, b, -x, tol).real

    def taylor(x, n):
        out = []
        for k in range(n + 1):
            c = pochhammer(a, k) / pochhammer(b, k) / math.factorial(k)
            out.append((-1) ** k * c * hyp(a.shifted(k), b.shifted(k), -x, tol).real)
        return out
    return TaylorFunction(f, taylor)


def cm_probe(f, grid, max_order=8, steps=(1e-2, 1e-3), slack=None, tol=DEFAULT):
    """Sign test of (-1)^n f^(n) >= 0 on grid, n = 0..max_order.

    With Taylor data (f.taylor) the coefficients are checked directly.
    Otherwise forward differences (-1)^n Delta_h^n f(x) are checked for each
    step h; for a CM function these are nonnegative for every h.  Values are
    compared against slack times the largest |f| on the stencil.
    """
    slack = tol.cm_slack if slack is None else slack
    grid = [float(x) for x in grid]
    taylor = getattr(f, "taylor", None)
    for x in grid:
        try:
            if taylor is not None:
                coeffs = taylor(x, max_order)
                scale = max(abs(c) for c in coeffs[:1]) or 1.0
                for n, c in enumerate(coeffs):
                    val = (-1) ** n * c
                    if val < -slack * max(scale, 1e-300):
                        return MonotonicityVerdict("CM", False, max_order, (x, n, val))
                continue
            for h in steps:
                vals = np.array([f(x + k * h) for k in range(max_order + 1)], dtype=float)
                scale = float(np.max(np.abs(vals))) or 1.0
                diff = vals.copy()
                for n in range(max_order + 1):
                    val = (-1) ** n * diff[0]
                    if val < -slack * scale:
                        return MonotonicityVerdict("CM", False, max_order, (x, n, float(val)))
                    diff = np.diff(diff)
        except Exception as exc:
            raise type(exc)(f"{exc} (at x = {x!r})") from exc
    return MonotonicityVerdict("CM", True, max_order)


def am_check(taylor, slack=None, tol=DEFAULT):
    """Absolute monotonicity from a finite prefix of Taylor coefficients."""
    slack = tol.am_slack if slack is None else slack
    coeffs = list(taylor)
    for n, c in enumerate(coeffs):
        if c < -slack:
            return MonotonicityVerdict("AM", False, len(coeffs) - 1, (0.0, n, float(c)))
    return MonotonicityVerdict("AM", True, max(len(coeffs) - 1, 0))


def hankel_determinants(s, order, shift=0):
    """det(s_{i+j+shift})_{i,j=0..k} for k = 0..order."""
    s = np.asarray(s, dtype=float)
    out = []
    for k in range(order + 1):
        H = np.array([[s[i + j + shift] for j in range(k + 1)] for i in range(k + 1)])
        out.append(float(np.linalg.det(H)))
    return out


def stieltjes_moment_check(s, order, slack=None, tol=DEFAULT):
    """Both Hankel determinant families of s must be >= -slack up to order."""
    slack = tol.hankel_slack if slack is None else slack
    if len(s) < 2 * order + 2:
        raise ValueError(f"need at least {2 * order + 2} moments")
    for shift in (0, 1):
        for k, d in enumerate(hankel_determinants(s, order, shift)):
            if d < -slack:
                return MonotonicityVerdict("Stieltjes-moment", False, order, (shift, k, d))
    return MonotonicityVerdict("Stieltjes-moment", True, order)


def pfp_cm_hypotheses(a, b):
    """Hypotheses under which x^{-a_p} pFp(a; b; -1/x) is CM (p >= 2).

    Ascending positive a, b; 0 < a_1 <= 1; b_1 >= a_1 + 1; v_{a*,b*} >= 0
    with a* = (a without a_1 and a_p, 3/2) and b* = b without b_1.
    """
    a, b = pvec(a), pvec(b)
    p = len(a)
    if p < 2 or len(b) != p:
        return False
    if list(a) != sorted(a) or list(b) != sorted(b) or min(a + b) <= 0:
        return False
    if not (0 < a[0] <= 1 and b[0] >= a[0] + 1):
        return False
    a_star = tuple(a[1:-1]) + (1.5,)
    b_star = tuple(b[1:])
    return muntz_nonneg(MuntzSpec(a_star, b_star))[0]


def cm_functions(a, b, tol=DEFAULT):
    """The three functions that are CM under the pFp hypotheses:
    pFp(a; b; -x), pFp(a; b; 1/x) and x^{-a_p} pFp(a; b; -1/x)."""
    a, b = pvec(a), pvec(b)
    ap = a[-1]
    return {
        "pFp(-x)": pfp_negative(a, b, tol),
        "pFp(1/x)": lambda x: hyp(a, b, 1.0 / x, tol).real,
        "x^-ap pFp(-1/x)": lambda x: x ** (-ap) * hyp(a, b, -1.0 / x, tol).real,
    }
