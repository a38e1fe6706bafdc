"""Command-line front end.

Exit codes: 0 on success, 1 on a domain error (message on stderr), 2 on a
usage error. Numbers print with 6 significant digits; files carry full
double precision.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import bench as bench_mod
from .dataio import (
    Dataset,
    ParseError,
    embed2x2,
    load_dataset,
    load_solution,
    random_spd,
    save_dataset,
    save_solution,
)
from .geometry import (
    diamond_midpoint,
    dphi_distance,
    geodesic_point,
    geometric_mean,
    karcher_mean,
    star_midrange,
    thompson_distance,
)
from .matcore import DimensionMismatch, NoConvergence, NotPositiveDefinite, sym
from .nsolver import (
    CertificateViolation,
    SolverConfig,
    SolverStalled,
    convex_form_report,
    solve_midrange,
)

_DOMAIN_ERRORS = (
    NotPositiveDefinite,
    NoConvergence,
    DimensionMismatch,
    ParseError,
    CertificateViolation,
    SolverStalled,
    ValueError,
    OSError,
)


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _print_matrix(values: np.ndarray) -> None:
    for row in values:
        print(" ".join(_fmt(v) for v in row))


def _pair(dataset: Dataset):
    if len(dataset.matrices) != 2:
        raise ValueError(f"expected exactly 2 matrices, found {len(dataset.matrices)}")
    return dataset.matrices[0], dataset.matrices[1]


def _cmd_dist(args) -> int:
    data = load_dataset(args.infile)
    metrics = {
        "thompson": thompson_distance,
        "riemannian": lambda a, b: dphi_distance(a, b, 2),
        "d1": lambda a, b: dphi_distance(a, b, 1),
        "euclidean": lambda a, b: float(np.linalg.norm(a.values - b.values)),
    }
    metric = metrics[args.metric]
    ms = data.matrices
    for i in range(len(ms)):
        print(" ".join(_fmt(metric(ms[i], ms[j])) if i != j else _fmt(0.0) for j in range(len(ms))))
    return 0


def _cmd_midrange2(args) -> int:
    a, b = _pair(load_dataset(args.infile))
    kinds = {"star": star_midrange, "diamond": diamond_midpoint, "geomean": geometric_mean}
    x = kinds[args.kind](a, b)
    _print_matrix(x.values)
    print(f"d_inf(X, Y1) = {_fmt(thompson_distance(x, a))}")
    print(f"d_inf(X, Y2) = {_fmt(thompson_distance(x, b))}")
    return 0


def _cmd_mean(args) -> int:
    data = load_dataset(args.infile)
    if args.kind == "karcher":
        x = karcher_mean(data.matrices, tol=args.tol, max_iter=args.max_iter).values
    else:
        x = np.mean([m.values for m in data.matrices], axis=0)
    _print_matrix(x)
    return 0


def _cmd_geodesic(args) -> int:
    a, b = _pair(load_dataset(args.infile))
    x = geodesic_point(a, b, args.t, args.kind)
    _print_matrix(x.values)
    return 0


def _cmd_solve(args) -> int:
    data = load_dataset(args.infile)
    cfg = SolverConfig(
        bisect_tol=args.bisect_tol,
        feas_tol=args.feas_tol,
        max_proj_iters=args.max_proj_iters,
    )
    solution = solve_midrange(data.matrices, cfg)
    convex_form_report(solution, data.matrices, cfg.feas_tol)
    print(f"t_star = {_fmt(solution.t_star)}")
    print(f"lower  = {_fmt(solution.lower)}")
    print(f"upper  = {_fmt(solution.upper)}")
    print(f"status = {solution.status}")
    print("active = " + ", ".join(f"{a.index}:{a.side}" for a in solution.active))
    print("X =")
    _print_matrix(solution.x.values)
    if args.outfile:
        save_solution(solution, args.outfile)
    return 0


def _cmd_bench(args) -> int:
    n_list = [int(v) for v in args.nlist.split(",") if v]
    runner = bench_mod.bench_means if args.which == "means" else bench_mod.bench_distances
    records = runner(n_list, args.trials, args.seed)
    bench_mod.write_records_csv(records, args.outfile)
    for r in records:
        print(f"n={r.n} {r.operation}: median {_fmt(r.median_seconds)} s over {r.trials} trials")
    return 0


def _cmd_embed3d(args) -> int:
    data = load_dataset(args.infile)
    if data.n != 2:
        raise ValueError("embed3d is specific to 2x2 datasets; use n = 2")
    solution = load_solution(args.solution)
    active = {a.index for a in solution.active}
    karcher = karcher_mean(data.matrices)
    rows = []
    for i, m in enumerate(data.matrices):
        role = "active" if i in active else "data"
        rows.append((i, embed2x2(m.base), role))
    rows.append((len(rows), embed2x2(solution.x.base), "midrange"))
    rows.append((len(rows), embed2x2(karcher.base), "karcher"))
    with open(args.outfile, "w") as handle:
        handle.write("index,x,y,z,role\n")
        for index, point, role in rows:
            coords = ",".join(repr(v) for v in point)
            handle.write(f"{index},{coords},{role}\n")
    print(f"wrote {len(rows)} points to {args.outfile}")
    return 0


def _cmd_gen(args) -> int:
    sigma = None
    if args.sigma_scale != 1.0:
        sigma = sym(args.sigma_scale * np.eye(args.n))
    data = random_spd(
        args.n,
        args.count,
        args.seed,
        model=args.model,
        sigma=sigma,
        stddev=args.stddev,
        radius=args.radius,
    )
    save_dataset(data, args.outfile)
    print(f"wrote {args.count} matrices of dimension {args.n} to {args.outfile}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdmidrange",
        description="Geometric midrange statistics on the SPD cone",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="pairwise distance matrix of a dataset")
    p.add_argument("--metric", choices=("thompson", "riemannian", "d1", "euclidean"), required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("midrange2", help="two-point midpoint of a 2-matrix dataset")
    p.add_argument("--kind", choices=("star", "diamond", "geomean"), required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_midrange2)

    p = sub.add_parser("mean", help="N-point mean of a dataset")
    p.add_argument("--kind", choices=("karcher", "arithmetic"), default="karcher")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_mean)

    p = sub.add_parser("geodesic", help="point on a geodesic between 2 matrices")
    p.add_argument("--kind", choices=("riemannian", "nussbaum"), required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_geodesic)

    p = sub.add_parser("solve", help="N-point geometric midrange")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--bisect-tol", type=float, default=SolverConfig.bisect_tol)
    p.add_argument("--feas-tol", type=float, default=SolverConfig.feas_tol)
    p.add_argument("--max-proj-iters", type=int, default=SolverConfig.max_proj_iters)
    p.add_argument("--out", dest="outfile", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", help="timing benchmarks, CSV output")
    p.add_argument("which", choices=("means", "distances"))
    p.add_argument("--nlist", required=True, help="comma-separated ascending dimensions")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="outfile", required=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("embed3d", help="R^3 cone coordinates of a 2x2 dataset + solution")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.set_defaults(func=_cmd_embed3d)

    p = sub.add_parser("gen", help="generate a random SPD dataset")
    p.add_argument("--model", choices=("wishart_shifted", "logeuclid_ball"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sigma-scale", type=float, default=1.0, help="Sigma = scale * I")
    p.add_argument("--stddev", type=float, default=1.0, help="entry standard deviation")
    p.add_argument("--radius", type=float, default=1.0, help="logeuclid_ball radius")
    p.add_argument("--out", dest="outfile", required=True)
    p.set_defaults(func=_cmd_gen)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
