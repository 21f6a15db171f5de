import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfkit.coefficients import (
    BUILTIN_CHARACTERS,
    CoefficientError,
    DirichletCharacter,
    DirichletL,
    Eigenform,
    Explicit,
    Lift,
    Ratio,
    Zeta,
    builtin_source,
    character,
    coeff,
    dirichlet_data,
    dirichlet_inverse,
    euler_factor,
    load_explicit,
    ramanujan_audit,
    tau_table,
)


def _tau_naive(N):
    # q prod (1 - q^n)^24 by plain multiplication
    poly = [1] + [0] * (N - 1)
    for n in range(1, N):
        for _ in range(24):
            for i in range(N - 1, n - 1, -1):
                poly[i] -= poly[i - n]
    return [0] + poly


def test_tau_known_values():
    t = tau_table(12)
    assert t[1:11] == [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def test_tau_matches_naive_product():
    assert tau_table(150) == _tau_naive(151)[:151]


def test_tau_multiplicative_and_hecke():
    E = Eigenform()
    assert E.tau(6) == E.tau(2) * E.tau(3)
    assert E.tau(20) == E.tau(4) * E.tau(5)
    for p in (2, 3, 5):
        for m in range(1, 4):
            assert E.tau_prime_power(p, m) == E.tau(p**m)


def test_deligne_bound_on_normalized():
    a = np.abs(Eigenform().prefix(2000))
    d = np.array([sum(1 for k in range(1, int(math.isqrt(n)) + 1) if n % k == 0) for n in range(1, 2001)])
    # |a(n)| <= d(n), and d(n) >= number of divisors up to sqrt(n)
    assert np.all(a[1:] <= 2 * d + 1e-12)


@pytest.mark.parametrize("name", sorted(BUILTIN_CHARACTERS))
def test_builtin_characters_are_primitive(name):
    chi = character(name)
    assert chi.primitive and not chi.is_principal
    assert abs(abs(dirichlet_data(chi).omega) - 1) < 1e-12


def test_character_validation():
    with pytest.raises(ValueError):
        DirichletCharacter(4, (0, 1, 0, 1j))  # not multiplicative
    with pytest.raises(ValueError):
        DirichletCharacter(4, (1, 1, 0, -1))  # chi(0) must vanish
    with pytest.raises(KeyError):
        character("chi7")


def test_real_characters_have_root_number_one():
    for name in ("chi3", "chi4", "chi5_even"):
        assert dirichlet_data(character(name)).omega == pytest.approx(1)


def test_chi4_values():
    a = DirichletL(character("chi4")).prefix(8)
    assert list(a[1:].real) == [1, 0, -1, 0, 1, 0, -1, 0]


@pytest.mark.parametrize("name", ["zeta", "chi4", "chi5_odd", "eigenform"])
def test_prefix_and_coeff_agree(name):
    src = builtin_source(name)
    a = src.prefix(300)
    for n in (1, 2, 17, 64, 210, 300):
        assert coeff(src, n) == pytest.approx(a[n], rel=1e-12, abs=1e-15)


def test_prefix_is_read_only_and_grows():
    z = Zeta()
    a = z.prefix(10)
    with pytest.raises(ValueError):
        a[1] = 3
    assert len(z.prefix(1000)) == 1001


def test_lift_coefficients():
    L = Lift(DirichletL(character("chi4")), 2)
    a = L.prefix(100)
    assert a[9] == pytest.approx(-math.sqrt(3))  # chi4(3) 3^(1/2)
    assert a[25] == pytest.approx(math.sqrt(5))
    assert a[10] == 0
    assert Lift(L, 3).k == 6


@settings(max_examples=40)
@given(st.integers(1, 4), st.integers(1, 3000))
def test_lift_support_is_kth_powers(k, n):
    L = Lift(Zeta(), k)
    r = round(n ** (1 / k))
    is_power = any((r + d) ** k == n for d in (-1, 0, 1) if r + d >= 1)
    assert (L.coeff(n) != 0) == is_power


def test_lift_prime_power_matches_coeff():
    L = Lift(Eigenform(), 3)
    for p in (2, 3):
        for m in range(0, 7):
            assert L.prime_power(p, m) == pytest.approx(L.coeff(p**m) if m else 1, rel=1e-12)


def test_explicit_source(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("# coefficients\n1\n-1 0.5\n\n0\n")
    src = load_explicit(path)
    assert src.length == 3
    assert src.coeff(2) == complex(-1, 0.5)
    with pytest.raises(CoefficientError):
        src.coeff(4)
    poly = load_explicit(path, polynomial=True)
    assert poly.coeff(10) == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("1\nx y z\n")
    with pytest.raises(CoefficientError, match=":2:"):
        load_explicit(bad)


def test_explicit_multiplicative_flag():
    with pytest.raises(CoefficientError):
        Explicit([1, 1]).prime_power(2, 1)
    assert Explicit([1, 2, 3, 4], multiplicative=True).prime_power(2, 2) == 4


def test_ratio_zeta_over_zeta_is_identity():
    r = Ratio(Zeta(), Zeta())
    a = r.prefix(50)
    assert a[1] == 1 and not np.any(a[2:])


def test_dirichlet_inverse_of_zeta_is_mobius():
    mu = dirichlet_inverse(Zeta(), 30)
    assert mu[30].real == -1 and mu[12] == 0


def test_euler_factor_of_chi4():
    f = euler_factor(DirichletL(character("chi4")), 3, 4)
    assert f == pytest.approx([1, -1, 1, -1, 1])


def test_ramanujan_audit_zeta_is_flat():
    rep = ramanujan_audit(Zeta(), 10**4, 0.2)
    assert rep.max_ratio == 1 and rep.argmax == 1
    assert not rep.growth_flag


def test_ramanujan_audit_lift_grows_on_squares():
    rep = ramanujan_audit(Lift(DirichletL(character("chi4")), 2), 10**5, 0.2)
    assert rep.growth_flag
    r = math.isqrt(rep.argmax)
    assert r * r == rep.argmax
    assert rep.growth_exponent == pytest.approx(0.25)
    assert rep.fitted_exponent == pytest.approx(0.25, abs=0.03)


def test_ramanujan_audit_rejects_bad_input():
    with pytest.raises(ValueError):
        ramanujan_audit(Zeta(), 1, 0.2)
