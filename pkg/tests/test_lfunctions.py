import math

import mpmath
import numpy as np
import pytest

from lfkit.analytic.lfunctions import (
    DirichletLFunction,
    EigenformFunction,
    FunctionEvaluable,
    LiftedFunction,
    PoleError,
    WindowError,
    ZetaFunction,
    builtin_function,
    check_window,
    completed,
    evaluate,
    fe_residual,
    function_for_source,
    hurwitz_sum,
    upper_gamma,
)
from lfkit.coefficients import DirichletL, Eigenform, Lift, Zeta, builtin_data, character
from lfkit.fe_core import lift_data

RNG = np.random.default_rng(11)
WINDOW_POINTS = RNG.uniform(-1, 3, 40) + 1j * RNG.uniform(-100, 100, 40)


def _mp_dirichlet(chi, s):
    q = chi.modulus
    return complex(sum(complex(chi.values[a]) * mpmath.zeta(s, mpmath.mpf(a) / q) for a in range(1, q)) / mpmath.mpf(q) ** s)


def _mp_eigenform(s, N=40):
    # Mellin split at y = 1: independent of the rotated contour, but it cancels
    # down to Lambda ~ e^(-pi |t| / 2), so the precision grows with |t|
    with mpmath.workdps(30 + int(abs(complex(s).imag) * 0.7)):
        w = mpmath.mpc(s) + mpmath.mpf(11) / 2
        tau = Eigenform()
        lam = mpmath.mpf(0)
        for n in range(1, N + 1):
            x = 2 * mpmath.pi * n
            lam += tau.tau(n) * (x ** (-w) * mpmath.gammainc(w, x) + x ** (w - 12) * mpmath.gammainc(12 - w, x))
        return complex((2 * mpmath.pi) ** w * lam / mpmath.gamma(w))


def test_special_values():
    z = ZetaFunction()
    assert z(2) == pytest.approx(math.pi**2 / 6, abs=1e-14)
    assert z(0) == pytest.approx(-0.5, abs=1e-14)
    assert z(-1) == pytest.approx(-1 / 12, abs=1e-14)
    L4 = DirichletLFunction(character("chi4"))
    assert L4(1) == pytest.approx(math.pi / 4, abs=1e-14)
    assert L4(0) == pytest.approx(0.5, abs=1e-14)


def test_zeta_against_mpmath_with_error_bound():
    z = ZetaFunction()
    vals, errs = z.values(WINDOW_POINTS)
    ref = np.array([complex(mpmath.zeta(s)) for s in WINDOW_POINTS])
    assert np.all(np.abs(vals - ref) <= errs)
    assert errs.max() < 1e-8


@pytest.mark.parametrize("name", ["chi3", "chi4", "chi5_odd", "chi5_odd_bar"])
def test_dirichlet_against_mpmath(name):
    chi = character(name)
    L = DirichletLFunction(chi)
    pts = WINDOW_POINTS[:15]
    vals, errs = L.values(pts)
    ref = np.array([_mp_dirichlet(chi, s) for s in pts])
    assert np.all(np.abs(vals - ref) <= errs)


@pytest.mark.parametrize("s", [0.5 + 1j, 1.0 + 0j, -0.5 + 30j, 2.0 - 60j, 0.75 + 95j])
def test_eigenform_against_high_precision(s):
    E = EigenformFunction()
    p = E.evaluate(s)
    ref = _mp_eigenform(s)
    assert abs(p.value - ref) <= max(p.est_abs_error, 1e-9 * abs(ref))


def test_eigenform_dirichlet_series_right_of_one():
    # absolutely convergent at sigma = 3 with the normalized coefficients
    a = Eigenform().prefix(4000)
    n = np.arange(1, 4001)
    direct = np.sum(a[1:] * n ** -3.0)
    assert EigenformFunction()(3.0) == pytest.approx(direct, abs=1e-9)


@pytest.mark.parametrize("name", ["zeta", "chi4", "chi5_odd", "eigenform"])
def test_functional_equation(name):
    f = builtin_function(name)
    for s in (0.2 + 3j, -0.7 + 41j, 1.4 - 77j):
        assert fe_residual(f.data, f, s, relative=True) < 1e-10


def test_wrong_root_number_breaks_fe():
    data = builtin_data("chi5_odd")
    from lfkit.fe_core import GammaFactorData

    wrong = GammaFactorData(data.Q, data.lam, data.mu, -data.omega)
    f = builtin_function("chi5_odd")
    assert fe_residual(wrong, f, 0.6 + 3j, relative=True) > 0.1


def test_lifted_function_matches_base():
    base = DirichletLFunction(character("chi4"))
    F2 = LiftedFunction(base, 2)
    s = 0.8 + 1.5j
    assert F2(s) == pytest.approx(base(2 * s - 0.5))
    assert fe_residual(lift_data(base.data, 2), F2, s, relative=True) < 1e-10
    assert LiftedFunction(ZetaFunction(), 3).pole == pytest.approx(2 / 3)


def test_window_and_pole_errors():
    z = ZetaFunction()
    with pytest.raises(WindowError):
        z(0.5 + 101j)
    with pytest.raises(WindowError):
        z(-2)
    with pytest.raises(PoleError):
        z(1)
    assert ZetaFunction(t_max=300)(0.5 + 200j) == pytest.approx(complex(mpmath.zeta(0.5 + 200j)), abs=1e-9)
    with pytest.raises(WindowError):
        check_window([0.5, 5.0])


def test_vectorized_shape_and_scalar():
    z = ZetaFunction()
    s = np.array([[2.0, 3.0], [0.5 + 1j, 1.5]])
    out = z(s)
    assert out.shape == (2, 2)
    assert isinstance(z(2.0), complex)


def test_function_for_source():
    assert isinstance(function_for_source(Zeta()), ZetaFunction)
    assert isinstance(function_for_source(Lift(DirichletL(character("chi3")), 2)), LiftedFunction)
    with pytest.raises(TypeError):
        from lfkit.coefficients import Explicit

        function_for_source(Explicit([1]))
    with pytest.raises(KeyError):
        builtin_function("chi7")


def test_evaluate_by_name():
    p = evaluate("zeta", 2)
    assert p.value == pytest.approx(math.pi**2 / 6) and p.est_abs_error < 1e-12


def test_hurwitz_sum_matches_mpmath():
    v, e = hurwitz_sum(np.array([0.3 + 7j]), 1, [0.25], [1.0])
    assert abs(v[0] - complex(mpmath.zeta(0.3 + 7j, 0.25))) <= e[0]


@pytest.mark.parametrize("a,z", [(3 + 10j, 20.0), (6 + 40j, 5 + 30j), (0.5, 0.1), (12 - 50j, 4 - 9j)])
def test_upper_gamma(a, z):
    ref = complex(mpmath.gammainc(a, z))
    assert abs(upper_gamma(a, z)[0] - ref) <= 1e-11 * abs(ref)


def test_completed_function_wrapper():
    f = FunctionEvaluable(lambda s: 2.0 ** (-s), "pow2")
    assert f(1) == 0.5
    data = builtin_data("zeta")
    lam = completed(data, ZetaFunction(), 2.0)
    assert lam == pytest.approx(math.pi**-1 * math.gamma(1) * math.pi**2 / 6)
