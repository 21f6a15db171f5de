import math

import numpy as np
import pytest

from lfkit.abscissa import (
    bound_oracle_entire,
    bound_oracle_lift,
    boundedness_probe,
    e_factor_check,
    estimate_sigma_a,
    estimate_sigma_c,
    smoothed_sum,
    smoothing_cutoff,
    write_estimate_csv,
)
from lfkit.coefficients import DirichletL, Eigenform, Explicit, Lift, Zeta, character

CHI4 = DirichletL(character("chi4"))


def test_zeta_abscissae():
    assert estimate_sigma_a(Zeta(), 10**5).value == pytest.approx(1.0, abs=1e-9)
    assert estimate_sigma_c(Zeta(), 10**5).value == pytest.approx(1.0, abs=1e-9)


def test_chi4_convergence_floors_to_zero():
    est = estimate_sigma_c(CHI4, 10**5)
    assert est.value == 0 and est.floored
    assert "resolution" in est.note
    assert estimate_sigma_a(CHI4, 10**5).value == pytest.approx(1.0, abs=0.02)


def test_lift_abscissa_in_oracle_interval():
    est = estimate_sigma_a(Lift(CHI4, 2), 10**5)
    assert bound_oracle_lift(1, 2).contains(est.value, widen=0.02)
    assert est.tail_slope_diagnostic == pytest.approx(0.75, abs=0.01)


def test_eigenform_sigma_a_near_one():
    # |tau(n)| n^(-11/2) has sigma_a = 1; sums grow like N (log-free) on average
    est = estimate_sigma_a(Eigenform(), 10**4)
    assert 0.85 < est.value < 1.15


def test_polynomial_is_degenerate():
    est = estimate_sigma_a(Explicit([1, 2, 3], polynomial=True), 2000)
    assert est.degenerate and est.value == -math.inf


def test_all_zero_raises():
    with pytest.raises(ValueError):
        estimate_sigma_a(Explicit([0.0], polynomial=True), 2000)


def test_small_nmax_rejected():
    with pytest.raises(ValueError):
        estimate_sigma_a(Zeta(), 999)


def test_estimate_table_and_csv(tmp_path):
    est = estimate_sigma_a(Zeta(), 4000)
    assert [N for N, _ in est.table] == [1000, 2000, 4000]
    path = tmp_path / "a.csv"
    write_estimate_csv(path, est)
    assert path.read_text().splitlines()[0] == "N,quotient"


def test_smoothing_cutoff():
    assert smoothing_cutoff(1) == 3
    assert smoothing_cutoff(50) == math.ceil(150 * math.log(50))
    with pytest.raises(ValueError):
        smoothing_cutoff(0.5)


def test_smoothed_sum_against_direct():
    Y = 20.0
    N = smoothing_cutoff(Y)
    n = np.arange(1, N + 1)
    direct = np.sum(n ** (-(1.5 + 2j)) * np.exp(-n / Y))
    assert smoothed_sum(Zeta(), 1.5, 2.0, Y) == pytest.approx(direct, rel=1e-13)
    arr = np.zeros(3)
    arr[1] = 1
    assert smoothed_sum(arr, 0.5, 0, Y) == pytest.approx(math.exp(-1 / Y))


def test_smoothed_sum_approaches_zeta_right_of_one():
    import mpmath

    # sum n^-2 (1 - e^(-n/Y)) <= sum_{n <= Y} 1/(n Y) + 1/Y
    Y = 2000
    val = smoothed_sum(Zeta(), 2.0, 0.0, Y)
    assert abs(val - float(mpmath.zeta(2))) <= (math.log(Y) + 2) / Y


def test_boundedness_probe():
    rep = boundedness_probe(CHI4, 0.6, np.linspace(0, 20, 100), [10, 50, 100])
    assert len(rep.per_Y) == 3
    assert rep.sup == max(s for _, s in rep.per_Y)
    with pytest.raises(ValueError):
        boundedness_probe(CHI4, 0.6, [], [10])


@pytest.mark.parametrize("Y", [10, 50, 100])
@pytest.mark.parametrize("src", [Zeta(), CHI4, Eigenform()], ids=["zeta", "chi4", "eigen"])
def test_e_factor(Y, src):
    assert e_factor_check(src, 0.9, Y).holds


def test_oracles():
    assert bound_oracle_entire(1) == bound_oracle_entire(1.0)
    iv = bound_oracle_entire(2)
    assert (iv.lower, iv.upper) == (0.25, pytest.approx(1 / 3))
    iv = bound_oracle_lift(1, 3)
    assert iv.lower == iv.upper == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        bound_oracle_lift(0.5, 1)
