import math

import mpmath
import pytest

from lfkit.kronecker import (
    BudgetExhausted,
    KroneckerTarget,
    alignment_report,
    component_errors,
    completely_multiplicative,
    prime_phase_targets,
    solve,
    write_solution_csv,
)


def _check(target, sol):
    with mpmath.workdps(80):
        for th, b, n in zip(target.thetas, target.betas, sol.n):
            assert abs(sol.t * th - n - b) < target.eta
    assert sol.t > target.T


def test_target_validation():
    with pytest.raises(ValueError):
        KroneckerTarget((0.1, 0.1), (0, 0), 0, 0.1)
    with pytest.raises(ValueError):
        KroneckerTarget((0.1,), (0,), 0, 0.6)
    with pytest.raises(ValueError):
        KroneckerTarget((), (), 0, 0.1)


def test_grid_solve_small():
    target = KroneckerTarget((math.sqrt(2), math.sqrt(3)), (0.25, 0.5), 10.0, 0.01)
    sol = solve(target)
    assert sol.method == "grid"
    _check(target, sol)
    assert sol.max_error == max(sol.errors) < 0.01


def test_grid_solve_respects_start():
    target = KroneckerTarget((math.log(2),), (0.0,), 1000.0, 0.05)
    sol = solve(target)
    assert sol.t > 1000


def test_lattice_solve_prime_phases():
    c = {p: (-1) ** ((p - 1) // 2) for p in (3, 5, 7, 11, 13, 17, 19, 23)}
    target = prime_phase_targets(c, 0.0, 0.05)
    sol = solve(target, seed=0)
    assert sol.method == "lattice"
    _check(target, sol)


def test_solve_is_deterministic():
    c = {p: 1j ** p for p in (2, 3, 5, 7, 11)}
    target = prime_phase_targets(c, 5.0, 0.05)
    assert solve(target).t == solve(target).t


def test_budget_exhausted_reports_range():
    target = KroneckerTarget((math.sqrt(2), math.sqrt(3), math.sqrt(5)), (0.1, 0.2, 0.3), 0.0, 1e-6)
    with pytest.raises(BudgetExhausted) as exc:
        solve(target, budget=1)
    assert exc.value.scanned is not None


def test_prime_phase_targets_drop_zeros():
    t = prime_phase_targets({2: 0, 3: -1, 5: 1}, 0, 0.1)
    assert t.labels == (3, 5)
    assert float(t.betas[0]) == 0.5 and float(t.betas[1]) == 0


def test_component_errors_reduce_mod_one():
    t = KroneckerTarget((0.5,), (0.25,), 0, 0.1)
    n, e = component_errors(t, 2.5)
    assert n == (1,) and e[0] == pytest.approx(0)


def test_alignment_after_solution():
    c = {p: (-1) ** ((p - 1) // 2) for p in (3, 5, 7, 11, 13)}
    sol = solve(prime_phase_targets(c, 0, 0.02))
    rep = alignment_report(sol, c, 100, 0.9, 50)
    assert 0.9 <= rep.ratio <= 1 + 1e-12
    with pytest.raises(ValueError):
        alignment_report(sol, c, 10**4, 0.9, 50)


def test_alignment_at_zero_is_cancellation():
    c = {3: -1.0, 5: 1.0}
    rep = alignment_report(0.0, c, 100, 0.9, 50)
    assert rep.ratio < 1


def test_completely_multiplicative_extension():
    c = completely_multiplicative({2: 1j, 3: -1}, 20)
    assert c[12] == pytest.approx((1j) ** 2 * -1)
    assert c[5] == 0 and c[1] == 1


def test_solution_csv(tmp_path):
    c = {3: -1, 5: 1}
    target = prime_phase_targets(c, 0, 0.05)
    sol = solve(target)
    path = tmp_path / "k.csv"
    write_solution_csv(path, target, sol)
    lines = path.read_text().splitlines()
    assert lines[0] == "prime,theta,beta,n,error"
    assert [l.split(",")[0] for l in lines[1:]] == ["3", "5"]
