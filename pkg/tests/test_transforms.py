import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import iv

from hyperverify.config import DEFAULT
from hyperverify.errors import QuadratureError
from hyperverify.identities import gauss_jump_formula
from hyperverify.pfq import hspec, pfq_continued
from hyperverify.transforms import (GRule, QuadratureProblem, algebraic_tail_quad,
                                    bessel_measure_relation, convolve_measures, four_g_combination,
                                    gamma_cancellation, integrate, laplace_convolution,
                                    newton_leibnitz_repr, quad_value, representing_measure_1_over_x,
                                    self_test, sigma2_density, sigma3_density, sigma3_double_series,
                                    sigma3_kernel, sigma3_phi, sigma3_psi_combination, sin3arctan_forms,
                                    stieltjes_density_rho, stieltjes_sigma2, stieltjes_sigma3,
                                    stieltjes_sigma_general, verify_laplace_p1Fp, verify_laplace_pFp,
                                    verify_repr_1_over_x, verify_stieltjes_rho)
from hyperverify.meijerg import gspec


# ---- quadrature engine ---------------------------------------------------------

def test_integrate_examples():
    assert abs(integrate(QuadratureProblem(lambda x: 1.0, 0.0, 1.0))[0] - 1) < 1e-14
    assert abs(quad_value(lambda x: x ** -0.5, 0.0, 1.0, (-0.5, 0.0)) - 2) < 1e-13
    assert abs(quad_value(lambda x: math.exp(-x)) - 1) < 1e-13


def test_self_test_battery():
    rows = self_test()
    assert len(rows) >= 10
    for name, val, est, true, ok in rows:
        assert ok, (name, val, est, true)
        assert true < 1e-9, name


def test_problem_validation():
    with pytest.raises(ValueError):
        QuadratureProblem(lambda x: 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        QuadratureProblem(lambda x: 1.0, 0.0, 1.0, (-1.0, 0.0))
    with pytest.raises(ValueError):
        QuadratureProblem(lambda x: 1.0, 0.0, 1.0, rel_tol=0.0)


def test_nan_reports_location():
    with pytest.raises(QuadratureError) as exc:
        quad_value(lambda x: math.nan if x > 0.5 else 1.0, 0.0, 1.0)
    assert exc.value.location > 0.5


def test_panel_limit():
    tol = DEFAULT.with_(max_panels=3)
    with pytest.raises(QuadratureError, match="panels"):
        quad_value(lambda x: math.sin(1 / x) if x else 0.0, 0.0, 1.0, tol=tol)


def test_algebraic_tail():
    # int_1^inf y^{-1.05} dy = 20
    assert abs(algebraic_tail_quad(lambda y: y ** -1.05, 1.0, 0.05) - 20) < 1e-9


def test_grule_moments():
    # the rule targets bounded weights f
    # int_0^1 t^{s-1} G(t|b;a) dt = Gamma(a+s)Gamma(b)/(Gamma(b+s)Gamma(a)) with G = beta kernel
    spec = gspec(1, 0, [1.7], [0.4])
    rule = GRule(spec, DEFAULT)
    for s in (1.0, 2.5, 4.0):
        exact = math.gamma(0.4 + s) / math.gamma(1.7 + s)
        assert abs(rule(lambda t: t ** (s - 1)) / exact - 1) < 1e-12


# ---- Laplace representations ------------------------------------------------------

def test_laplace_pfp_examples():
    assert verify_laplace_pFp([0.7], [1.9], 1.3).residual < 1e-9
    c = verify_laplace_pFp([0.7], [1.9], 0.0)
    assert abs(c.lhs - 1) < 1e-15 and abs(c.rhs - 1) < 1e-12
    assert verify_laplace_pFp([0.5, 1.0], [1.2, 1.6], 2.0).residual < 1e-8


def test_laplace_p1fp_examples():
    assert verify_laplace_p1Fp([0.8], [], 0.6).residual < 1e-10
    assert abs(verify_laplace_p1Fp([0.8], [], 0.0).rhs - 1) < 1e-12
    assert verify_laplace_p1Fp([0.5, 1.2], [1.7], 1.0).residual < 1e-8
    assert verify_laplace_p1Fp([0.5, 1.0], [1.5], 0.5).residual < 1e-8


# ---- representing measures and convolution --------------------------------------

def test_measure_1_over_x_geometric():
    nu = representing_measure_1_over_x([1.0], [])
    for t in (0.0, 0.5, 2.0):
        assert abs(nu.density(t) - math.exp(t)) < 1e-13 * math.exp(t)
    x = 3.0
    assert abs(nu.laplace(x) - x / (x - 1)) < 1e-10
    assert verify_repr_1_over_x([1.0], [], x).residual < 1e-10


def test_measure_1_over_x_bessel_density():
    nu = representing_measure_1_over_x([], [])
    for t in (0.3, 1.0, 4.0):
        exact = iv(1, 2 * math.sqrt(t)) / math.sqrt(t)
        assert abs(nu.density(t) - exact) < 1e-13 * exact
    assert verify_repr_1_over_x([], [], 0.7).residual < 1e-10


def test_measure_scale_limit():
    nu = representing_measure_1_over_x([0.5], [1.5], alpha=1e-12)
    assert abs(nu.density(1.0)) < 1e-11
    assert abs(nu.laplace(2.0) - 1) < 1e-11


def test_scaled_measure():
    assert verify_repr_1_over_x([0.6, 1.1], [1.9], 5.0, alpha=2.0).residual < 1e-9


def test_convolution_closed_form():
    nu = representing_measure_1_over_x([1.0], [])
    dens = convolve_measures(nu, nu)
    for t in (0.5, 1.0, 2.0):
        assert abs(dens(t) - (t + 2) * math.exp(t)) < 1e-12 * math.exp(t)


def test_convolution_edges_and_symmetry():
    nu1 = representing_measure_1_over_x([0.7], [1.3])
    nu2 = representing_measure_1_over_x([1.4], [2.1, 0.6])
    zero = lambda t: 0.0
    assert convolve_measures(nu1, zero)(1.3) == pytest.approx(nu1.density(1.3), rel=1e-14)
    for t in (0.4, 1.7):
        a, b = convolve_measures(nu1, nu2)(t), convolve_measures(nu2, nu1)(t)
        assert abs(a - b) < 1e-10 * abs(a)
    assert laplace_convolution(math.exp, math.exp, 0.0) == 0.0


def test_convolution_rejects_non_unit_atom():
    from hyperverify.transforms import RepresentingMeasure
    with pytest.raises(ValueError):
        convolve_measures(RepresentingMeasure(2.0, math.exp), RepresentingMeasure(1.0, math.exp))


def test_bessel_measure_relation():
    t = 0.7
    series = sum(t ** k / (math.factorial(k) * math.factorial(k + 1)) for k in range(40))
    assert abs(bessel_measure_relation([1.0], [1.0], t) - series) < 1e-12
    assert bessel_measure_relation([], [], t) == 0.0
    u = 2.5
    direct = math.sqrt(u / t) * iv(1, 2 * math.sqrt(u * t))
    assert abs(bessel_measure_relation([u], [1.0], t) - direct) < 1e-12 * direct


# ---- Stieltjes representations ------------------------------------------------------

def test_rho_gauss_case():
    a, b, c, x = 0.4, 0.9, 1.7, 2.5
    rho = stieltjes_density_rho([a, b], [c], x)
    assert abs(rho - (gauss_jump_formula(a, b, c, x) / (2j * math.pi)).real) < 1e-12


def test_rho_decays_and_represents():
    # rho(x) ~ C x^{-min a} at infinity
    r4, r8 = (stieltjes_density_rho([0.5, 0.8], [1.6], x) for x in (1e4, 1e8))
    assert abs(r8 / r4 / 1e-2 - 1) < 0.05
    assert verify_stieltjes_rho([0.5, 0.8], [1.6], 0.5).residual < 1e-7


def test_rho_positivity_on_grid():
    rng = np.random.default_rng(12)
    grid = np.linspace(1.0, 50.0, 101)[1:]
    done = 0
    while done < 5:
        a1 = rng.uniform(0.1, 1.0)
        rest = np.sort(rng.uniform(0.3, 2.0, 2))
        b = rest + rng.uniform(0.0, 1.0, 2)
        from hyperverify.conditions import weak_supermajorization
        if not weak_supermajorization(rest, b):
            continue
        done += 1
        assert min(stieltjes_density_rho([a1, *rest], b, x) for x in grid) >= -1e-10


def test_sigma2_examples():
    assert stieltjes_sigma2([0.5, 1.0], [1.0], 0.8).residual < 1e-7
    assert abs(stieltjes_sigma2([0.5, 1.0], [1.0], 0.8).lhs - 1.8 ** -0.5) < 1e-14
    c = stieltjes_sigma2([0.5, 1.0], [1.0], 1e-8)
    assert abs(c.lhs - 1) < 1e-7 and abs(c.rhs - 1) < 1e-7
    assert stieltjes_sigma2([0.5, 1.0], [1.0], 0.5 * cmath.exp(1j * math.pi / 4)).residual < 1e-7


def test_sigma2_matches_continuation():
    z = -0.9
    assert abs(pfq_continued(hspec([0.5, 0.5], [1.0]), z)
               - stieltjes_sigma2([0.5, 0.5], [1.0], -z).rhs) < 1e-8


def test_sigma3_examples():
    c = stieltjes_sigma3([0.5, 1.0], [1.0], 0.6)
    assert c.residual < 1e-6
    assert abs(c.lhs - 1.6 ** -0.5) < 1e-14


def test_psi_combination_matches_density():
    y = 0.5
    phi = sigma3_phi([0.5, 1.0], [1.0], y)
    assert abs(sigma3_psi_combination([0.5, 1.0], [1.0], y) - phi) < 1e-7 * abs(phi)


def test_double_series_matches_density():
    y = 0.3
    phi = sigma3_phi([0.5, 1.0], [1.0], y)
    assert abs(sigma3_double_series([0.5, 1.0], [1.0], y) - phi) < 1e-6 * abs(phi)


def test_sigma_general_kernels():
    a, b = [0.6], [1.4]
    assert abs(stieltjes_sigma_general(a, b, 2, 0.7) - sigma2_density(a, b, 0.7)) < 1e-10
    assert abs(stieltjes_sigma_general(a, b, 3, 0.5) - sigma3_density(a, b, 0.5)) < 1e-9
    assert abs(stieltjes_sigma_general(a, b, 2.5, 1e-6)) < 1e-8
    with pytest.raises(ValueError):
        stieltjes_sigma_general(a, b, 1.5, 0.5)


def test_sin3arctan_100_points():
    rng = np.random.default_rng(100)
    for t, y in rng.uniform(0, 1, (100, 2)):
        f1, f2, f3 = sin3arctan_forms(t, y)
        assert abs(f1 - f2) < 1e-12 * max(abs(f1), 1e-300) + 1e-300
        assert abs(f2 - f3) < 1e-12 * abs(f2) + 1e-300


def test_gamma_cancellation():
    val, scale = gamma_cancellation(Fraction(1))
    assert val == 0 and scale == Fraction(80, 9)
    rng = np.random.default_rng(101)
    for s in rng.uniform(0.5, 8.0, 100):
        val, scale = gamma_cancellation(float(s))
        assert abs(val) < 1e-12 * scale


def test_four_g_combination_vanishes():
    for t in (0.2, 0.5, 0.8):
        val, scale = four_g_combination([0.6, 1.0], [1.4], t)
        assert abs(val) < 1e-10 * scale


# ---- Newton-Leibnitz form -----------------------------------------------------------

def test_newton_leibnitz_examples():
    c = newton_leibnitz_repr([], [], 1.0)
    assert abs(c.lhs - math.e) < 1e-15 and c.residual < 1e-9
    assert newton_leibnitz_repr([0.5], [1.5], 2.0).residual < 1e-8
    far = newton_leibnitz_repr([0.5], [1.5], 1e9)
    assert abs(far.lhs - 1) < 1e-9 and abs(far.rhs - 1) < 1e-9
    with pytest.raises(ValueError):
        newton_leibnitz_repr([0.5, 1.0], [1.5], 2.0)


@given(st.floats(0.2, 3.0), st.floats(0.3, 3.0), st.floats(0.5, 5.0))
def test_newton_leibnitz_property(a, b, x):
    assert newton_leibnitz_repr([a], [b], x).residual < 1e-9


@given(st.floats(0.0, 1e40))
def test_sigma3_kernel_matches_direct_form(u):
    direct = (1.0 + u) / (1.0 + u + u * u) ** 3
    assert math.isclose(sigma3_kernel(u), direct, rel_tol=1e-13, abs_tol=1e-300)


def test_sigma3_kernel_large_arguments():
    with np.errstate(over="raise", invalid="raise"):
        vals = sigma3_kernel(np.array([1e60, 1e200, 1e308, np.inf]))
    assert vals[0] == pytest.approx(1e-300, rel=1e-12) and np.all(vals[1:] == 0.0)
