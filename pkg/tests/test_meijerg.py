import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperverify.conditions import MuntzSpec, muntz_nonneg
from hyperverify.core import gamma_ratio
from hyperverify.errors import ContourError, DegenerateParameterError, UnitCircleError
from hyperverify.identities import gauss_jump_formula
from hyperverify.meijerg import (GFunctionSpec, contour_abscissa, g_q_plus_one, g_shift, g_slater,
                                 g_tau_series, gspec, meijer_g, mellin_barnes_oracle,
                                 slater_constants, sum_integral_constants)
from hyperverify.transforms import verify_g_moment


def mp_g(spec, x):
    a = [list(spec.top[:spec.n]), list(spec.top[spec.n:])]
    b = [list(spec.bottom[:spec.m]), list(spec.bottom[spec.m:])]
    return float(mpmath.re(mpmath.meijerg(a, b, x)))


def rel(x, y):
    return abs(x - y) / max(abs(x), abs(y), 1e-300)


BETA = gspec(1, 0, [1.5], [0.5])


def test_shape_validation():
    with pytest.raises(ValueError):
        GFunctionSpec(1, 0, 1, 1, (1.0, 2.0), (0.5,))
    with pytest.raises(ValueError):
        gspec(3, 0, [1.0], [0.5, 0.2])
    with pytest.raises(ValueError):
        gspec(1, 1, [1.0], [0.5, 0.2])      # q = p+1 needs n = 0
    assert gspec(2, 0, [1, 2], [0.3, 0.4]).generic
    assert not gspec(2, 0, [1, 2], [0.3, 1.3]).generic


def test_beta_kernel():
    assert abs(g_slater(BETA, 0.25) - 0.5) < 1e-14
    assert abs(meijer_g(BETA, 0.25) - 0.5) < 1e-14
    a, b, x = 0.3, 1.9, 0.6
    closed = x ** a * (1 - x) ** (b - a - 1) / math.gamma(b - a)
    assert rel(meijer_g(gspec(1, 0, [b], [a]), x), closed) < 1e-13


def test_zero_outside_unit_interval():
    spec = gspec(2, 0, [1.2, 1.9], [0.4, 0.7])
    assert g_slater(spec, 1.7) == 0.0
    assert meijer_g(spec, 3.0) == 0.0


def test_g22_against_gauss_jump():
    a, b, c, x = 0.5, 0.7, 1.3, 0.4
    spec = gspec(2, 0, [1.0, c], [a, b])
    jump = gauss_jump_formula(a, b, c, 1 / x)
    via_jump = (jump / (2j * math.pi)).real * math.gamma(a) * math.gamma(b) / math.gamma(c)
    assert rel(g_slater(spec, x), via_jump) < 1e-10


@pytest.mark.parametrize("spec,x", [
    (gspec(2, 0, [1.1, 1.8], [0.3, 0.65]), 0.37),
    (gspec(3, 0, [1.1, 1.8, 2.6], [0.3, 0.65, 0.9]), 0.81),
    (gspec(2, 1, [0.5, 1.7], [0.2, 0.9]), 2.4),
    (gspec(2, 1, [0.5, 1.7], [0.2, 0.9]), 0.3),
    (gspec(2, 2, [0.1, 0.35, 1.6, 2.1], [0.8, 1.3, 0.45, 0.2]), 0.6),
    (gspec(2, 2, [0.1, 0.35, 1.6, 2.1], [0.8, 1.3, 0.45, 0.2]), 1.7),
])
def test_against_mpmath(spec, x):
    assert rel(meijer_g(spec, x), mp_g(spec, x)) < 1e-10


def test_tau_series_matches_slater():
    rng = np.random.default_rng(8)
    for _ in range(20):
        b = rng.uniform(0.2, 2.0, 2)
        a = b + rng.uniform(0.3, 2.0, 2)
        spec = gspec(2, 0, a, b)
        for x in (0.05, 0.3, 0.7, 0.95):
            assert rel(g_tau_series(spec, x), g_slater(spec, x)) < 1e-9


def test_degenerate_parameters():
    spec = gspec(2, 0, [1.4, 2.2], [0.5, 1.5])
    with pytest.raises(DegenerateParameterError):
        g_slater(spec, 0.3)
    assert rel(meijer_g(spec, 0.3), mp_g(spec, 0.3)) < 1e-8


def test_unit_circle_error():
    spec = gspec(2, 1, [0.5, 1.7], [0.2, 0.9])
    with pytest.raises(UnitCircleError):
        g_slater(spec, 1.0 + 1e-10)


def test_q_plus_one_examples():
    assert abs(g_q_plus_one(gspec(1, 0, [], [1.0]), 2.0) - 2 * math.exp(-2)) < 1e-15
    spec = gspec(2, 0, [1.5], [0.5, 1.0])
    assert abs(meijer_g(spec, 60.0)) < 1e-20
    for t in (0.1, 1.0, 2.5, 8.0):
        assert rel(meijer_g(spec, t), mp_g(spec, t)) < 1e-10


def test_q_plus_one_p0_laplace_pair():
    # int_0^inf e^{-zt} t^{a-1} e^{-t} dt / Gamma(a) = (1+z)^{-a}
    from scipy.integrate import quad
    a, z = 0.8, 0.6
    spec = gspec(1, 0, [], [a])
    val, _ = quad(lambda t: math.exp(-z * t) * g_q_plus_one(spec, t) / t, 0, np.inf)
    assert rel(val / math.gamma(a), (1 + z) ** -a) < 1e-9


def test_shift():
    spec = gspec(2, 0, [1.3, 1.9], [0.35, 0.8])
    assert g_shift(spec, 0) == spec
    x, mu = 0.3, 0.4
    assert rel(meijer_g(g_shift(spec, mu), x), x ** mu * meijer_g(spec, x)) < 1e-10
    assert g_shift(g_shift(spec, 0.2), 0.3).top == pytest.approx(g_shift(spec, 0.5).top)
    assert g_shift(g_shift(spec, 0.2), 0.3).bottom == pytest.approx(g_shift(spec, 0.5).bottom)


def test_mellin_barnes_examples():
    assert abs(mellin_barnes_oracle(BETA, 0.25) - 0.5) < 1e-9
    s1 = gspec(2, 0, [1.3, 1.9], [0.35, 0.8])
    s2 = gspec(2, 0, [1.3, 1.9], [0.8, 0.35])
    assert rel(mellin_barnes_oracle(s1, 0.45), mellin_barnes_oracle(s2, 0.45)) < 1e-12
    assert rel(mellin_barnes_oracle(s1, 0.45), g_slater(s1, 0.45)) < 1e-7


def test_mellin_barnes_refuses_without_contour():
    spec = gspec(1, 1, [0.2], [0.9])           # poles overlap: -0.9 < s < 0.8 is fine
    contour_abscissa(spec)
    bad = gspec(1, 1, [-0.5], [-1.8])          # need 1.8 < s < 1.5
    with pytest.raises(ContourError):
        contour_abscissa(bad)
    with pytest.raises(ValueError):
        mellin_barnes_oracle(BETA, 1.01)


def test_nonnegativity_link():
    rng = np.random.default_rng(21)
    checked = 0
    grid = np.linspace(0.0025, 0.9975, 200)
    while checked < 50:
        p = int(rng.integers(1, 3))
        a = rng.uniform(0.2, 2.0, p)
        b = rng.uniform(0.2, 3.0, p)
        if not muntz_nonneg(MuntzSpec(a, b))[0]:
            continue
        spec = gspec(p, 0, b, a)
        assert min(meijer_g(spec, x) for x in grid) >= -1e-10
        checked += 1


@pytest.mark.parametrize("k", range(6))
def test_moment_identity(k):
    c = verify_g_moment([0.4, 1.1], [1.3, 1.75], k)
    assert c.residual < 1e-8


def test_slater_constants_beta_kernel():
    # G^{1,0}_{1,1}(x | b; a) = x^a (1-x)^{b-a-1}/Gamma(b-a): A_0 = 1/Gamma(b-a)
    c = slater_constants(gspec(1, 0, [1.9], [0.3]))
    assert rel(c.A[0], 1 / math.gamma(1.6)) < 1e-14 and c.B == ()


def test_sum_integral_constants_M():
    a, b, al, be, m = [0.6, 0.9], [1.3, 1.7], 0.4, 0.7, 1
    c = sum_integral_constants(a, b, al, be, m)
    s = al + be + m
    j = 1
    direct = (math.gamma(a[0] - a[1]) * math.gamma(a[0] + s + a[1]) * math.gamma(a[1] + s + a[1])
              / (math.gamma(b[0] + s + a[1]) * math.gamma(b[1] + s + a[1])
                 * math.gamma(b[0] - a[1]) * math.gamma(b[1] - a[1])))
    assert rel(c.M[j], direct) < 1e-13
    assert len(c.A) == 2 and len(c.B) == 2
