"""Command-line front end.

Exit codes: 0 converged, 2 max-iters or stagnated, 3 domain failure
(including flow breakdown), 4 input error.  ``CDARE_LOG`` selects the
diagnostic level written to standard error (error, info or debug).
"""

import argparse
import csv
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import io as cio
from .benchgen import ScalarFamilyParams, make_example1, make_example2, params_for_rho, random_problem, scalar_oracle
from .errors import CdareError, ParameterError, StabilityError
from .solvers import SolverConfig, Status, afpi_solve, fpi_hat_solve, fpi_solve, make_initial
from .transform import transform

log = logging.getLogger("cdare")

EXIT_OK, EXIT_NOT_CONVERGED, EXIT_DOMAIN, EXIT_INPUT = 0, 2, 3, 4

_STATUS_EXIT = {
    Status.CONVERGED: EXIT_OK,
    Status.MAX_ITERS: EXIT_NOT_CONVERGED,
    Status.STAGNATED: EXIT_NOT_CONVERGED,
    Status.DOMAIN_FAILURE: EXIT_DOMAIN,
    Status.FLOW_BREAKDOWN: EXIT_DOMAIN,
    Status.RECOVERY_FAILURE: EXIT_DOMAIN,
}

BENCH_COLUMNS = ("problem", "method", "r", "k", "nres", "rho", "elapsed", "status")


def _setup_logging():
    level = os.environ.get("CDARE_LOG", "error").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.ERROR),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _fail(msg):
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_INPUT


def run_method(P, method, X0, cfg):
    if method == "fpi":
        return fpi_solve(P, X0, cfg)
    if method == "fpi-hat":
        return fpi_hat_solve(P, X0, cfg)
    if method == "afpi":
        return afpi_solve(transform(P), X0, cfg, problem=P)
    raise ParameterError(f"unknown method {method!r}")


def cmd_solve(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {
        "command": ["cdare"] + list(args.argv),
        "config": {"method": args.method, "r": args.r, "tol": args.tol, "max_iters": args.max_iters, "x0": args.x0},
        "status": "input-error",
        "iterations": 0,
        "final_nres": None,
        "wall_time": 0.0,
        "solution_path": None,
        "iterations_path": None,
    }
    t0 = time.perf_counter()
    code = EXIT_INPUT
    try:
        code = _solve(args, out, manifest)
    finally:
        manifest["exit_code"] = code
        manifest["wall_time"] = time.perf_counter() - t0
        with open(out / "manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
    return code


def _solve(args, out, manifest):
    try:
        P = cio.read_problem(args.problem)
        cfg = SolverConfig(nres_tol=args.tol, max_iters=args.max_iters, r=args.r)
        X0 = make_initial(P) if args.x0 == "auto" else cio.read_solution(args.x0)
        if X0.shape != (P.n, P.n):
            return _fail(f"initial matrix has shape {X0.shape}, expected {(P.n, P.n)}")
        report = run_method(P, args.method, X0, cfg)
    except StabilityError as exc:
        return _fail(f"{exc}; pass --x0 with a starting matrix")
    except CdareError as exc:
        return _fail(str(exc))

    sol_path = out / "solution.json"
    csv_path = out / "iterations.csv"
    cio.write_solution(sol_path, report.solution)
    cio.write_iterations(csv_path, report.iterates)
    manifest.update(
        status=report.status.value,
        iterations=report.iterations,
        final_nres=report.final_nres,
        solution_path=str(sol_path),
        iterations_path=str(csv_path),
        message=report.message,
    )
    code = _STATUS_EXIT[report.status]
    if code:
        print(f"{args.method}: {report.status.value} after {report.iterations} iterations ({report.message})", file=sys.stderr)
    return code


def cmd_transform(args):
    try:
        D = transform(cio.read_problem(args.problem))
    except CdareError as exc:
        return _fail(str(exc))
    cio.write_dare(args.out, D)
    return EXIT_OK


def _sidecar(path):
    p = Path(path)
    return p.with_name(p.stem + ".reference" + p.suffix)


def cmd_generate(args):
    try:
        if args.family == "random":
            P = random_problem(args.n, args.m, args.seed, args.regime)
            ref = None
        elif args.family == "example1":
            if args.rho is not None:
                p = params_for_rho(complex(args.a), complex(args.b), args.r0, args.rho)
            else:
                p = ScalarFamilyParams(complex(args.a), complex(args.b), args.r0, args.h)
            scalar_oracle(p)
            P, ref = make_example1(args.n, p, args.seed)
        else:
            P, ref = make_example2(args.n, complex(args.a), complex(args.b), args.r0, args.seed)
    except (CdareError, ValueError) as exc:
        return _fail(str(exc))
    cio.write_problem(args.out, P)
    if ref is not None:
        cio.write_solution(_sidecar(args.out), ref, kind="reference")
    return EXIT_OK


def _bench_one(problem_path, method, r, cfg):
    label = str(problem_path)
    try:
        P = cio.read_problem(problem_path)
        report = run_method(P, method, make_initial(P), SolverConfig(**{**cfg, "r": r or 2}))
    except CdareError as exc:
        return [(label, method, r or "", "", "", "", "", f"error: {exc}")]
    return [
        (label, method, r or "", rec.k, cio.fmt_float(rec.nres), cio.fmt_float(rec.rho_that), cio.fmt_float(rec.elapsed_s), report.status.value)
        for rec in report.iterates
    ]


def cmd_bench(args):
    try:
        with open(args.suite, encoding="utf-8") as fh:
            suite = json.load(fh)
        problems = suite["problems"] if isinstance(suite, dict) else suite
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(f"cannot read suite manifest: {exc}")
    if not problems:
        return _fail("suite lists no problems")
    base = Path(args.suite).parent
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    rs = [int(v) for v in args.rs.split(",") if v.strip()]
    jobs = []
    for prob in problems:
        path = base / prob
        for method in methods:
            for r in rs if method == "afpi" else [None]:
                jobs.append((path, method, r))
    cfg = {"nres_tol": args.tol, "max_iters": args.max_iters}
    with ThreadPoolExecutor(max_workers=args.workers or os.cpu_count() or 1) as pool:
        results = list(pool.map(lambda job: _bench_one(*job, cfg), jobs))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "bench.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BENCH_COLUMNS)
        for rows in results:
            w.writerows(rows)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not argparse's default exit status 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(prog="cdare", description="Maximal solutions of conjugate discrete-time Riccati equations.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a cdare-1 problem file")
    s.add_argument("problem")
    s.add_argument("--method", choices=("fpi", "fpi-hat", "afpi"), default="afpi")
    s.add_argument("--r", type=int, default=2, help="acceleration order for afpi")
    s.add_argument("--tol", type=float, default=1e-15, help="NRes stopping tolerance")
    s.add_argument("--max-iters", type=int, default=1000)
    s.add_argument("--x0", default="auto", help="'auto' or a cdare-solution-1 file")
    s.add_argument("--out", default=".", help="output directory")
    s.set_defaults(func=cmd_solve)

    t = sub.add_parser("transform", help="write the transformed DARE (dare-1)")
    t.add_argument("problem")
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_transform)

    g = sub.add_parser("generate", help="write a benchmark problem")
    g.add_argument("--family", choices=("example1", "example2", "random"), required=True)
    g.add_argument("--n", type=int, default=4)
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--a", default="0.6")
    g.add_argument("--b", default="1")
    g.add_argument("--r0", type=float, default=1.0)
    g.add_argument("--h", type=float, default=1.0)
    g.add_argument("--rho", type=float, default=None, help="example1: choose h so that rho(That_XM) = RHO")
    g.add_argument("--regime", choices=("pd", "indefinite"), default="pd")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("bench", help="run a method x r grid over a suite of problems")
    b.add_argument("--suite", required=True, help='JSON manifest: {"problems": [paths...]}')
    b.add_argument("--methods", default="fpi,afpi")
    b.add_argument("--rs", default="2")
    b.add_argument("--tol", type=float, default=1e-15)
    b.add_argument("--max-iters", type=int, default=1000)
    b.add_argument("--workers", type=int, default=0, help="worker threads (0: all cores)")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None):
    _setup_logging()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except ParameterError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
