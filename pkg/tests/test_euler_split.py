import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfkit.arith import prime_sieve
from lfkit.coefficients import DirichletL, Eigenform, Explicit, Lift, Ratio, Zeta, character
from lfkit.euler_split import (
    SplitError,
    b_bound_audit,
    b_coefficient,
    build_exceptional_set,
    complete_multiplicativity_failures,
    k_tail_sum,
    lemma_scan,
    lemma_theta,
    ratio_coefficients,
    split_theorem1,
    split_theorem3,
    theorem3_exceptional_set,
)

CHI4 = DirichletL(character("chi4"))


def test_exceptional_set_threshold():
    S = build_exceptional_set(Zeta(), 0.5, 3, 200)
    # 3^(2/0.5) = 81: every prime below 81 and none above (|a(p)| = 1)
    assert S.primes == tuple(int(p) for p in prime_sieve(80))
    assert 83 not in S


def test_exceptional_set_catches_large_coefficients():
    S = build_exceptional_set(Lift(CHI4, 2), 0.5, 3, 2000)
    # the lift vanishes at primes, so only the c0 threshold contributes
    assert max(S.primes) < 81


def test_exceptional_set_rejects_small_c0():
    with pytest.raises(ValueError):
        build_exceptional_set(Zeta(), 0.5, 2, 100)


@pytest.mark.parametrize("src", [Zeta(), CHI4, DirichletL(character("chi5_odd"))], ids=["zeta", "chi4", "chi5_odd"])
@pytest.mark.parametrize("shape", ["geometric", "linear"])
def test_theorem1_split_reconstructs(src, shape):
    sp = split_theorem1(src, 0.5, 3, 3000, shape=shape)
    assert sp.max_error() < 1e-12
    if src.exact:
        assert sp.is_exact()


def test_theorem1_geometric_part1_completely_multiplicative():
    sp = split_theorem1(CHI4, 0.5, 3, 5000)
    assert complete_multiplicativity_failures(sp) == []
    # outside S the first factor carries the coefficients at primes
    for p in (83, 89, 97):
        assert sp.part1[p] == CHI4.coeff(p)
        assert sp.part2[p] == 0


def test_theorem1_linear_part1_squarefree():
    sp = split_theorem1(Zeta(), 0.5, 3, 10000, shape="linear")
    assert sp.part1[83 * 89] == 1
    assert sp.part1[83 * 83] == 0


def test_theorem1_eigenform_reconstructs_numerically():
    sp = split_theorem1(Eigenform(), 0.5, 3, 2000)
    assert sp.max_error() < 1e-12


def test_theorem1_rejects_nonmultiplicative():
    with pytest.raises(Exception):
        split_theorem1(Explicit([1, 2, 3]), 0.5, 3, 3)


def test_split_csv(tmp_path):
    sp = split_theorem1(Zeta(), 0.5, 3, 50)
    path = tmp_path / "split.csv"
    sp.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,part1,part2,part3,reconstructed,source,abs_error"
    assert len(lines) == 51


def test_b_coefficients_of_zeta():
    # (1 - x)^-1 / (1 + x) = 1 + x^2 + x^4 + ...: b(p^m) = 1 for m even
    assert b_coefficient(Zeta(), 101, 2) == 1
    assert b_coefficient(Zeta(), 101, 3) == 0


def test_b_bound_audit_passes_and_reports():
    rep = b_bound_audit(CHI4, 0.5, 3, [p for p in prime_sieve(200) if p > 81], 10)
    assert rep.passed and rep.checked > 0
    with pytest.raises(SplitError):
        b_bound_audit(CHI4, 0.5, 3, [2, 3], 5)


def test_ratio_coefficients_chi4_over_zeta():
    h = ratio_coefficients(CHI4, Zeta(), 100)
    direct = Ratio(CHI4, Zeta()).prefix(100)
    assert np.allclose(h, direct)


def test_theorem3_default_cutoff_makes_everything_exceptional():
    h = Ratio(CHI4, Zeta())
    S = theorem3_exceptional_set(h, 2000)
    assert len(S) == len(prime_sieve(2000))


def test_theorem3_split_with_lowered_cutoff():
    h = Ratio(CHI4, Zeta())
    sp = split_theorem3(h, 5000, cutoff=100)
    assert sp.max_error() < 1e-12
    outside = [p for p in prime_sieve(5000) if int(p) not in sp.exceptional]
    assert outside
    # Q1 is quadratic at primes outside S
    p = int(outside[0])
    if p**3 <= 5000:
        assert sp.part1[p**3] == 0
    assert all(np.isfinite(v) for v in sp.k_bound.values())


def test_theorem3_quadratic_h_gives_trivial_part3():
    # h(p^m) = 0 for m >= 3
    h = Ratio(Zeta(), Zeta())
    sp = split_theorem3(h, 500, cutoff=10)
    assert sp.part3[1] == 1 and not np.any(sp.part3[2:])


def test_theorem3_rejects_nonmultiplicative():
    with pytest.raises(SplitError):
        split_theorem3(Explicit([2, 1]), 2)


def test_k_tail_sum_zero_for_quadratic():
    assert k_tail_sum(Ratio(Zeta(), Zeta()), 101) == 0


def test_lemma_theta_trivial_and_worst_case():
    assert lemma_theta(0, 0).value == pytest.approx(1)
    r = lemma_theta(1, 0)
    assert r.value == pytest.approx(2, abs=1e-12)
    assert abs(r.theta - 1) < 1e-6


@settings(max_examples=60, deadline=None)
@given(
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
)
def test_lemma_bound_holds(a, b):
    r = lemma_theta(a, b)
    assert r.value >= r.bound - 1e-12
    assert abs(abs(r.theta) - 1) < 1e-12
    assert r.value == pytest.approx(abs(1 + r.theta * a + r.theta**2 * b))


def test_lemma_theta_beats_dense_grid():
    a, b = 3 - 2j, -1 + 4j
    phis = np.linspace(0, 2 * np.pi, 200001)
    z = np.exp(1j * phis)
    dense = np.abs(1 + z * a + z * z * b).max()
    assert lemma_theta(a, b).value >= dense - 1e-9


def test_lemma_scan_deterministic():
    s1, s2 = lemma_scan(50, seed=3), lemma_scan(50, seed=3)
    assert s1.rows == s2.rows
    assert s1.min_slack >= 0 and not s1.failures
    assert len(s1.rows) == 50
    assert lemma_scan(50, seed=4).rows != s1.rows


def test_lemma_grid_validation():
    with pytest.raises(ValueError):
        lemma_theta(1, 1, grid=8)
