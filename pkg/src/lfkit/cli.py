"""Command-line front door: ``lfkit <subcommand> ...``.

Every subcommand writes one CSV into ``--outdir`` and prints a summary block
to stdout.  Exit status: 0 pass, 2 witness or violation found, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from lfkit import abscissa, euler_split, kronecker
from lfkit.arith import prime_sieve
from lfkit.fe_core import check_lift_laws, invariants, lift_admissible
from lfkit.specfile import SpecError, SpecFile, load_spec, write_spec

EXIT_PASS, EXIT_ERROR, EXIT_WITNESS = 0, 1, 2

FE_TOL = 1e-6
SPLIT_EPS, SPLIT_C0 = 0.5, 3.0
KRONECKER_SIGMA, KRONECKER_Y = 0.9, 50.0
DOMINATE_FLOOR = 0.5005
LAW_RTOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for witnesses here
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# output helpers


def _summary(name: str, items) -> None:
    print(f"[{name}]")
    for key, value in items:
        print(f"{key}: {value}")


def _num(x) -> str:
    if isinstance(x, complex):
        return f"{x.real!r} {x.imag!r}"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_num(x) for x in row])


def _out(args, stem: str) -> Path:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out / f"{stem}.csv"


def _stem(spec: SpecFile) -> str:
    return Path(spec.origin).stem if spec.origin else "spec"


# ---------------------------------------------------------------------------
# subcommands


def cmd_invariants(args) -> int:
    spec = load_spec(args.spec)
    g = spec.gamma
    inv = invariants(g)
    rows = [
        ("degree", inv.degree),
        ("conductor", inv.conductor),
        ("B", inv.b_invariant),
        ("r", g.r),
        ("pole_order", g.pole_order),
        ("pole_moved", str(g.pole_moved).lower()),
        ("sharp_admissible", str(g.sharp_admissible).lower()),
    ]
    _write_csv(_out(args, f"invariants_{_stem(spec)}"), ["field", "value"], rows)
    _summary("invariants", [("spec", args.spec), *[(k, _num(v)) for k, v in rows]])
    return EXIT_PASS


def cmd_lift(args) -> int:
    spec = load_spec(args.spec)
    k = args.k
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    lifted = spec.lifted(k)
    target = Path(args.o) if args.o else Path(args.outdir) / f"{_stem(spec)}_lift{k}.spec"
    target.parent.mkdir(parents=True, exist_ok=True)
    write_spec(target, lifted)
    law = check_lift_laws(spec.gamma, k)
    laws_hold = law.degree_diff <= LAW_RTOL * law.degree_law and law.conductor_rel_diff <= LAW_RTOL
    inv = invariants(lifted.gamma)
    rows = [
        ("k", k),
        ("degree", inv.degree),
        ("degree_law", law.degree_law),
        ("conductor", inv.conductor),
        ("conductor_law", law.conductor_law),
        ("B", inv.b_invariant),
        ("laws_hold", str(laws_hold).lower()),
        ("admissible", str(lift_admissible(spec.gamma, spec.gamma.pole_order == 0, k)).lower()),
        ("pole_moved", str(lifted.gamma.pole_moved).lower()),
    ]
    _write_csv(_out(args, f"lift_{_stem(spec)}_k{k}"), ["field", "value"], rows)
    items = [("spec", args.spec), ("written", str(target)), *[(a, _num(b)) for a, b in rows]]
    if lifted.gamma.pole_moved:
        items.append(("warning", "lifted function has its pole away from s = 1"))
    _summary("lift", items)
    return EXIT_PASS if laws_hold else EXIT_WITNESS


def cmd_abscissa(args) -> int:
    spec = load_spec(args.spec)
    src = spec.source()
    fn = abscissa.estimate_sigma_a if args.which == "a" else abscissa.estimate_sigma_c
    est = fn(src, args.nmax)
    abscissa.write_estimate_csv(_out(args, f"abscissa_{args.which}_{_stem(spec)}"), est)
    _summary(
        "abscissa",
        [
            ("spec", args.spec),
            ("which", f"sigma_{args.which}"),
            ("nmax", args.nmax),
            ("estimate", _num(est.value)),
            ("tail_slope", _num(est.tail_slope_diagnostic)),
            ("degenerate", str(est.degenerate).lower()),
            ("floored", str(est.floored).lower()),
            ("note", est.note or "-"),
        ],
    )
    return EXIT_PASS


def cmd_split(args) -> int:
    spec = load_spec(args.spec)
    src = spec.source()
    eps = args.eps if args.eps is not None else spec.override("eps", SPLIT_EPS)
    c0 = args.c0 if args.c0 is not None else spec.override("c0", SPLIT_C0)
    if args.variant == "t1":
        split = euler_split.split_theorem1(src, eps, c0, args.nmax, shape=args.shape)
        cm_fail = euler_split.complete_multiplicativity_failures(split) if args.shape == "geometric" else []
    else:
        cutoff = args.cutoff if args.cutoff is not None else spec.override("cutoff", euler_split.THM3_CUTOFF)
        split = euler_split.split_theorem3(src, args.nmax, cutoff=cutoff, seed=args.seed)
        cm_fail = []
    split.to_csv(_out(args, f"split_{args.variant}_{_stem(spec)}"))
    exact = split.is_exact()
    S = sorted(split.exceptional.primes)
    _summary(
        "split",
        [
            ("spec", args.spec),
            ("variant", args.variant),
            ("nmax", args.nmax),
            *([("eps", _num(eps)), ("c0", _num(c0))] if args.variant == "t1" else []),
            ("exceptional_primes", len(S)),
            ("exceptional_head", " ".join(map(str, S[:10])) or "-"),
            ("exact", str(exact).lower()),
            ("max_error", _num(split.max_error())),
            ("multiplicativity_failures", len(cm_fail)),
        ],
    )
    return EXIT_PASS if exact and not cm_fail else EXIT_WITNESS


def cmd_kronecker(args) -> int:
    spec = load_spec(args.spec)
    src = spec.source()
    eps = spec.override("eps", SPLIT_EPS)
    c0 = spec.override("c0", SPLIT_C0)
    primes = [int(p) for p in prime_sieve(args.prime_max)]
    stream = args.stream
    c_values = {}
    if stream in ("part1", "auto"):
        split = euler_split.split_theorem1(src, eps, c0, args.prime_max)
        c_values = {p: complex(split.part1[p]) for p in primes}
        if stream == "auto" and not any(c_values.values()):
            # every prime this small is exceptional; align the coefficients themselves
            stream = "source"
        else:
            stream = "part1"
    if stream == "source":
        c_values = {p: complex(src.coeff(p)) for p in primes}
    if not any(c_values.values()):
        raise ValueError(f"no nonzero prime coefficients up to {args.prime_max}")
    target = kronecker.prime_phase_targets(c_values, args.tmin, args.eta)
    path = _out(args, f"kronecker_{_stem(spec)}")
    try:
        sol = kronecker.solve(target, budget=args.budget, seed=args.seed)
    except kronecker.BudgetExhausted as exc:
        _write_csv(path, ["prime", "theta", "beta", "n", "error"], [])
        _summary("kronecker", [("spec", args.spec), ("found", "false"), ("reason", str(exc))])
        return EXIT_WITNESS
    kronecker.write_solution_csv(path, target, sol)
    # largest n allowed by the smoothing window 3 Y log Y
    N = int(math.floor(3 * args.Y * max(math.log(args.Y), 1.0)))
    rep = kronecker.alignment_report(sol, c_values, N, args.sigma, args.Y)
    _summary(
        "kronecker",
        [
            ("spec", args.spec),
            ("stream", stream),
            ("primes", target.k),
            ("eta", _num(args.eta)),
            ("found", "true"),
            ("method", sol.method),
            ("t", kronecker.mpmath.nstr(sol.t, 20)),
            ("max_error", _num(sol.max_error)),
            ("alignment_sigma", _num(args.sigma)),
            ("alignment_Y", _num(args.Y)),
            ("alignment_ratio", _num(rep.ratio)),
        ],
    )
    return EXIT_PASS if sol.max_error < args.eta else EXIT_WITNESS


def cmd_zeros(args) -> int:
    from lfkit.analytic.lfunctions import SIGMA_MAX
    from lfkit.analytic.zeros import count_zeros, locate_zeros

    spec = load_spec(args.spec)
    fn = spec.function(t_max=max(args.tmax, 100.0))
    rect = (args.sigma, SIGMA_MAX, -args.tmax, args.tmax)
    res = count_zeros(fn, rect)
    zeros = locate_zeros(fn, rect) if res.count > 0 else []
    _write_csv(
        _out(args, f"zeros_{_stem(spec)}"),
        ["sigma", "t", "multiplicity"],
        [(z.s.real, z.s.imag, z.multiplicity) for z in zeros],
    )
    _summary(
        "zeros",
        [
            ("spec", args.spec),
            ("rectangle", " ".join(_num(x) for x in res.rectangle)),
            ("count", res.count),
            ("pole_correction", res.pole_correction),
            ("nudged", str(res.nudged).lower()),
            ("min_edge_modulus", _num(res.min_edge_modulus)),
        ],
    )
    return EXIT_PASS if res.count == 0 else EXIT_WITNESS


def _witness_items(prefix: str, w) -> list:
    if w is None:
        return [(prefix, "none")]
    return [(prefix, _num(w.s)), (f"{prefix}_lhs", _num(w.lhs)), (f"{prefix}_rhs", _num(w.rhs))]


def cmd_majorant(args) -> int:
    from lfkit.analytic.majorant import Grid, majorant_check

    specF, specG = load_spec(args.specF), load_spec(args.specG)
    F, G = specF.function(), specG.function()
    sigma_max = args.sigma_max if args.sigma_max is not None else args.sigma_min + 0.5
    grid = Grid(args.n_sigma, args.grid, -args.tmax, args.tmax)
    rep = majorant_check(F, G, (args.sigma_min, sigma_max), args.c, grid)
    rows = []
    for w in (rep.witness, rep.worst):
        if w is not None:
            rows.append(("witness" if w is rep.witness else "worst", w.s.real, w.s.imag, w.lhs, w.rhs, w.ratio))
    _write_csv(_out(args, f"majorant_{_stem(specF)}_{_stem(specG)}"), ["kind", "sigma", "t", "lhs", "rhs", "ratio"], rows)
    _summary(
        "majorant",
        [
            ("F", args.specF),
            ("G", args.specG),
            ("strip", f"{_num(args.sigma_min)} {_num(sigma_max)}"),
            ("c", _num(args.c)),
            ("points", rep.points),
            ("violations", rep.violations),
            ("passed", str(rep.passed).lower()),
            *_witness_items("witness", rep.witness),
            *_witness_items("worst", rep.worst),
        ],
    )
    return EXIT_PASS if rep.passed else EXIT_WITNESS


def cmd_dominate(args) -> int:
    from lfkit.analytic.majorant import Grid, domination_witness

    specF, specG = load_spec(args.specF), load_spec(args.specG)
    F, G = specF.function(), specG.function()
    grid = Grid(args.n_sigma, args.grid, -args.tmax, args.tmax)
    rep = domination_witness(F, G, args.sigma_floor, args.m, grid)
    rows = []
    for r in rep.rows:
        w = r.witness
        if w is None:
            rows.append((r.M, "", "", "", "", "false"))
        else:
            rows.append((r.M, w.s.real, w.s.imag, w.lhs, w.rhs, str(r.verified).lower()))
    _write_csv(_out(args, f"dominate_{_stem(specF)}_{_stem(specG)}"), ["M", "sigma", "t", "abs_F", "M_abs_G", "verified"], rows)
    items = [("F", args.specF), ("G", args.specG), ("sigma_floor", _num(args.sigma_floor))]
    for r in rep.rows:
        items += _witness_items(f"M={_num(r.M)}", r.witness)
    items.append(("witness_found", str(rep.witness_found).lower()))
    _summary("dominate", items)
    return EXIT_WITNESS if rep.witness_found else EXIT_PASS


def cmd_lemma_scan(args) -> int:
    scan = euler_split.lemma_scan(args.trials, grid=args.grid, radius=args.radius, seed=args.seed)
    _write_csv(
        _out(args, "lemma_scan"),
        ["a_re", "a_im", "b_re", "b_im", "value", "bound"],
        [(a.real, a.imag, b.real, b.imag, v, bd) for a, b, v, bd in scan.rows],
    )
    _summary(
        "lemma-scan",
        [
            ("trials", args.trials),
            ("grid", args.grid),
            ("seed", args.seed),
            ("min_slack", _num(scan.min_slack)),
            ("min_ratio", _num(scan.min_ratio)),
            ("max_ratio", _num(scan.max_ratio)),
            ("failures", len(scan.failures)),
        ],
    )
    return EXIT_PASS if scan.min_slack >= 0 and not scan.failures else EXIT_WITNESS


def cmd_fe_check(args) -> int:
    from lfkit.analytic.lfunctions import SIGMA_MIN, T_MAX, fe_residual

    spec = load_spec(args.spec)
    fn = spec.function()
    rng = np.random.default_rng(args.seed)
    # both s and its reflection 1 - conj(s) stay inside the evaluation window;
    # a k-lift maps s to k s + (1 - k)/2, which fixes 1/2
    k = getattr(fn, "k", 1)
    half = (0.5 - SIGMA_MIN) / k
    sig = rng.uniform(0.5 - half, 0.5 + half, args.samples)
    ts = rng.uniform(-T_MAX / k, T_MAX / k, args.samples)
    rows, worst, worst_rel = [], 0.0, 0.0
    for sg, t in zip(sig, ts):
        s = complex(sg, t)
        pole = fn.pole
        if pole is not None and (abs(s - pole) < 0.05 or abs((1 - s.conjugate()) - pole) < 0.05):
            continue
        r = fe_residual(spec.gamma, fn, s)
        rr = fe_residual(spec.gamma, fn, s, relative=True)
        worst, worst_rel = max(worst, r), max(worst_rel, rr)
        rows.append((sg, t, r, rr))
    _write_csv(_out(args, f"fe_check_{_stem(spec)}"), ["sigma", "t", "residual", "relative"], rows)
    _summary(
        "fe-check",
        [
            ("spec", args.spec),
            ("samples", len(rows)),
            ("seed", args.seed),
            ("max_residual", _num(worst)),
            ("max_relative", _num(worst_rel)),
            ("tolerance", _num(args.tol)),
            ("passed", str(worst < args.tol).lower()),
        ],
    )
    return EXIT_PASS if worst < args.tol else EXIT_WITNESS


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lfkit", description=__doc__.splitlines()[0])
    p.add_argument("--outdir", default=".", help="directory for CSV artifacts (default: .)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized scans (default: 0)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="SUBCOMMAND")

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        # also accepted after the subcommand
        sp.add_argument("--outdir", default=argparse.SUPPRESS)
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        return sp

    sp = add("invariants", cmd_invariants, "degree, conductor and B of a spec")
    sp.add_argument("spec")

    sp = add("lift", cmd_lift, "write the k-lift of a spec")
    sp.add_argument("spec")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("-o", default=None, help="output spec path")

    sp = add("abscissa", cmd_abscissa, "estimate sigma_a or sigma_c")
    sp.add_argument("spec")
    sp.add_argument("--which", choices=("a", "c"), default="a")
    sp.add_argument("--nmax", type=int, default=10**6)

    sp = add("split", cmd_split, "three-factor Euler product split")
    sp.add_argument("spec")
    sp.add_argument("--variant", choices=("t1", "t3"), default="t1")
    sp.add_argument("--eps", type=float, default=None)
    sp.add_argument("--c0", type=float, default=None)
    sp.add_argument("--nmax", type=int, default=10**4)
    sp.add_argument("--shape", choices=("geometric", "linear"), default="geometric")
    sp.add_argument("--cutoff", type=float, default=None)

    sp = add("kronecker", cmd_kronecker, "align prime phases of the split's first factor")
    sp.add_argument("spec")
    sp.add_argument("--prime-max", type=int, default=50)
    sp.add_argument("--eta", type=float, default=0.02)
    sp.add_argument("--tmin", type=float, default=0.0)
    sp.add_argument("--budget", type=int, default=64)
    sp.add_argument(
        "--stream",
        choices=("auto", "part1", "source"),
        default="auto",
        help="prime values to align: the split's first factor, the raw coefficients, "
        "or part1 unless it vanishes on every prime (default)",
    )
    sp.add_argument("--sigma", type=float, default=KRONECKER_SIGMA)
    sp.add_argument("--Y", type=float, default=KRONECKER_Y)

    sp = add("zeros", cmd_zeros, "count zeros with real part > sigma and |t| <= tmax")
    sp.add_argument("spec")
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--tmax", type=float, default=50.0)

    sp = add("majorant", cmd_majorant, "check |F| <= c |G| on a strip grid")
    sp.add_argument("specF")
    sp.add_argument("specG")
    sp.add_argument("--sigma-min", type=float, required=True)
    sp.add_argument("--sigma-max", type=float, default=None)
    sp.add_argument("--grid", type=int, default=2001, help="samples in t")
    sp.add_argument("--n-sigma", type=int, default=9)
    sp.add_argument("--tmax", type=float, default=30.0)
    sp.add_argument("--c", type=float, default=1.0)

    sp = add("dominate", cmd_dominate, "search for |F| > M |G| right of sigma_floor")
    sp.add_argument("specF")
    sp.add_argument("specG")
    sp.add_argument("--m", type=float, action="append", required=True, help="repeatable")
    sp.add_argument("--sigma-floor", type=float, default=DOMINATE_FLOOR)
    sp.add_argument("--grid", type=int, default=2001, help="samples in t")
    sp.add_argument("--n-sigma", type=int, default=9)
    sp.add_argument("--tmax", type=float, default=30.0)

    sp = add("lemma-scan", cmd_lemma_scan, "random check of the 1 + (|a|+|b|)/24 bound")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--grid", type=int, default=2048)
    sp.add_argument("--radius", type=float, default=10.0)

    sp = add("fe-check", cmd_fe_check, "functional-equation residuals at random window points")
    sp.add_argument("spec")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--tol", type=float, default=FE_TOL)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if getattr(args, "func", None) is None:
        print("error: lfkit: a subcommand is required", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (SpecError, OSError, ValueError, RuntimeError, KeyError, ArithmeticError) as exc:
        print(f"error: {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
