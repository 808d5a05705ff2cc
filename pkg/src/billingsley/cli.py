"""Command-line entry point.

Exit codes: 0 success, 1 domain/numerical/resource error, 2 usage error.
When --out (or --report) is given, the file receives exactly the bytes that
went to standard output.  All randomized subcommands take an explicit --seed
(default 42) and are bitwise reproducible, independent of --threads.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .convergence import BoxCriterion, run_criterion
from .dickman import DEFAULT_STEP, DEFAULT_U_MAX, DickmanTable, build_rho_table, rho
from .errors import BillingsleyError
from .factor_stats import (BoxSpec, box_probability_exact, box_probability_via_psi,
                           sample_box_probability, sample_factor_vectors)
from .pd_process import (DEFAULT_TRUNCATION, pd_box_probability_refined, pd_density,
                         pd_sample_batch)
from .primes import build_sieve, mertens_constant_estimate, mertens_sum, power_floor
from .rng import DEFAULT_SEED
from .smoothcount import psi_bruteforce, psi_dickman, psi_exact
from .suite import BUNDLES, run_suite

CACHE_ENV = "BILLINGSLEY_CACHE"


def _emit(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text, encoding="utf-8")


def _cache_dir(args) -> Path | None:
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _table_csv(table: DickmanTable) -> str:
    lines = [f"# u_max={table.u_max!r} step={table.step!r} "
             f"order={table.interpolation_order}",
             "u,rho"]
    for j, v in enumerate(table.values):
        lines.append(f"{j * table.step!r},{v!r}")
    return "\n".join(lines) + "\n"


def _load_cached_table(path: Path, u_max: float, step: float) -> DickmanTable | None:
    try:
        with path.open(encoding="utf-8") as fh:
            header = fh.readline().strip()
            if not header.startswith("#"):
                return None
            fields = dict(part.split("=", 1) for part in header[1:].split())
            if (float(fields.get("u_max", "nan")) != u_max
                    or float(fields.get("step", "nan")) != step):
                return None
            if fh.readline().strip() != "u,rho":
                return None
            values = np.array([float(line.split(",")[1]) for line in fh if line.strip()])
    except (OSError, ValueError, IndexError):
        return None
    expected = int(math.ceil(u_max / step - 1e-9)) + 1
    if len(values) != expected:
        return None
    return DickmanTable(u_max=u_max, step=step, values=values,
                        interpolation_order=int(fields.get("order", 3)))


def _get_table(args) -> DickmanTable:
    u_max = getattr(args, "umax", DEFAULT_U_MAX)
    step = getattr(args, "step", DEFAULT_STEP)
    cache = _cache_dir(args)
    if cache is not None:
        path = cache / "rho_table.csv"
        table = _load_cached_table(path, u_max, step) if path.exists() else None
        if table is None:
            table = build_rho_table(u_max, step)
            cache.mkdir(parents=True, exist_ok=True)
            path.write_text(_table_csv(table), encoding="utf-8")
        return table
    return build_rho_table(u_max, step)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _report_envelope(command: str, config: dict, results) -> dict:
    return {"version": __version__, "command": command, "config": config,
            "results": results}


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_rho(args) -> int:
    table = _get_table(args)
    _emit(f"{rho(table, args.u):.{args.digits}f}\n", args.out)
    return 0


def _cmd_rho_table(args) -> int:
    table = _get_table(args)
    _emit(_table_csv(table), args.out)
    return 0


def _cmd_mertens(args) -> int:
    if (args.x is None) == (args.range is None):
        raise UsageError("give exactly one of --x or --range A B")
    if args.x is not None:
        sieve = build_sieve(max(args.x, 2))
        value = mertens_constant_estimate(sieve, args.x)
        text = (f"x,mertens_constant_estimate\n{args.x},{value!r}\n"
                if args.out else f"{value:.{args.digits}f}\n")
    else:
        a, b = args.range
        sieve = build_sieve(max(b, 2))
        value = mertens_sum(sieve, a, b)
        text = (f"a,b,reciprocal_sum\n{a},{b},{value!r}\n"
                if args.out else f"{value:.{args.digits}f}\n")
    _emit(text, args.out)
    return 0


def _cmd_psi(args) -> int:
    if args.method == "brute":
        sieve = build_sieve(max(args.x, 2))
        value = psi_bruteforce(sieve, args.x, args.y)
        text = f"{value}\n"
    elif args.method == "exact":
        value = psi_exact(args.x, args.y)
        text = f"{value}\n"
    else:
        table = _get_table(args)
        value = psi_dickman(table, args.x, args.y)
        text = f"{value:.{args.digits}f}\n"
    _emit(text, args.out)
    return 0


def _cmd_psi_ladder(args) -> int:
    table = _get_table(args)
    rho_t = rho(table, args.t)
    lines = ["n,psi,psi_over_n,rho,abs_err"]
    n = args.nmin
    while n <= args.nmax:  # by decades
        y = power_floor(n, 1.0 / args.t)
        psi = psi_exact(n, max(y, 1))
        ratio = psi / n
        lines.append(f"{n},{psi},{ratio!r},{rho_t!r},{abs(ratio - rho_t)!r}")
        n *= 10
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_box(args) -> int:
    box = BoxSpec.from_string(args.box)
    sieve = build_sieve(args.n)
    if args.method == "exact":
        est = box_probability_exact(sieve, args.n, box)
        payload = {"count": est.count, "total": est.total, "p_hat": est.value}
    elif args.method == "psi":
        est = box_probability_via_psi(sieve, args.n, box)
        payload = {"count": est.count, "total": est.total, "p_hat": est.value}
    else:
        est = sample_box_probability(sieve, args.n, box, args.samples,
                                     seed=args.seed, threads=args.threads)
        payload = {"count": est.hits, "total": est.total, "p_hat": est.p_hat,
                   "std_err": est.std_err}
    _emit(_json_text(payload), args.out)
    return 0


def _cmd_sample_factors(args) -> int:
    sieve = build_sieve(args.n)
    rows = sample_factor_vectors(sieve, args.n, args.count, args.k, seed=args.seed)
    header = ("N," + ",".join(f"p{i+1}" for i in range(args.k))
              + "," + ",".join(f"L{i+1}" for i in range(args.k)))
    lines = [header]
    for fv in rows:
        lines.append(f"{fv.N},"
                     + ",".join(str(p) for p in fv.p) + ","
                     + ",".join(repr(v) for v in fv.L))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_pd_sample(args) -> int:
    sticks, _tails = pd_sample_batch(args.seed, args.count, args.trunc)
    k = min(args.k, args.trunc)
    lines = [",".join(f"c{i+1}" for i in range(k))]
    for row in sticks[:, :k]:
        lines.append(",".join(repr(float(v)) for v in row))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_pd_density(args) -> int:
    table = _get_table(args)
    point = [float(v) for v in args.point.split(",")]
    _emit(f"{pd_density(table, point):.{args.digits}f}\n", args.out)
    return 0


def _cmd_pd_box(args) -> int:
    table = _get_table(args)
    box = BoxSpec.from_string(args.box)
    value, err = pd_box_probability_refined(table, box, grid=args.grid)
    _emit(_json_text({"value": value, "error_estimate": err}), args.out)
    return 0


def _cmd_verify(args) -> int:
    box = BoxSpec.from_string(args.box)
    ladder = [int(float(v)) for v in args.ladder.split(",")]
    # both the exact scan and the Monte Carlo factor checks need the sieve to
    # reach the largest ladder entry
    sieve = build_sieve(max(max(ladder), 10**4))
    table = _get_table(args)
    crit = BoxCriterion(epsilon=args.epsilon, k=box.k)
    report = run_criterion(sieve, table, ladder, box, crit, budget=args.samples,
                           seed=args.seed, exact_threshold=args.exact_threshold,
                           threads=args.threads)
    payload = _report_envelope(
        "verify",
        {"epsilon": args.epsilon, "ladder": ladder, "samples": args.samples,
         "seed": args.seed},
        report.to_dict())
    _emit(_json_text(payload), args.report)
    return 0 if report.all_pass() else 1


def _cmd_suite(args) -> int:
    report, passed = run_suite(args.name, seed=args.seed, threads=args.threads)
    _emit(_json_text(report), args.report)
    if not passed:
        first = next(r["name"] for r in report["results"] if not r["passed"])
        print(f"FAILED: {first}", file=sys.stderr)
    return 0 if passed else 1


class UsageError(Exception):
    pass


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _add_common(sub, *, digits=True, out=True, table=False, seed=False, threads=False):
    if digits:
        sub.add_argument("--digits", type=int, default=6,
                         help="decimal places for human-readable numbers")
    if out:
        sub.add_argument("--out", default=None, help="also write the output to this file")
    if table:
        sub.add_argument("--umax", type=float, default=DEFAULT_U_MAX)
        sub.add_argument("--step", type=float, default=DEFAULT_STEP)
        sub.add_argument("--cache-dir", default=None,
                         help=f"rho-table cache directory (or ${CACHE_ENV})")
    if seed:
        sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    if threads:
        sub.add_argument("--threads", type=_positive_int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="billingsley",
        description="Dickman function, smooth-number counts, prime-factor "
                    "statistics, Poisson-Dirichlet sampling, and the box "
                    "criterion harness.")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("rho", help="evaluate the Dickman function")
    s.add_argument("--u", type=float, required=True)
    _add_common(s, table=True)
    s.set_defaults(fn=_cmd_rho)

    s = subs.add_parser("rho-table", help="write the rho grid as CSV")
    _add_common(s, digits=False, table=True)
    s.set_defaults(fn=_cmd_rho_table)

    s = subs.add_parser("mertens", help="prime-reciprocal sums")
    s.add_argument("--x", type=int, default=None,
                   help="print sum_{p<=x} 1/p - log log x")
    s.add_argument("--range", type=int, nargs=2, metavar=("A", "B"), default=None,
                   help="print sum of 1/p over primes in [A, B]")
    _add_common(s)
    s.set_defaults(fn=_cmd_mertens)

    s = subs.add_parser("psi", help="count y-smooth integers up to x")
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--y", type=int, required=True)
    s.add_argument("--method", choices=("brute", "exact", "dickman"), default="exact")
    _add_common(s, table=True)
    s.set_defaults(fn=_cmd_psi)

    s = subs.add_parser("psi-ladder", help="Psi(n, n^{1/t})/n versus rho(t) by decades")
    s.add_argument("--t", type=float, default=2.0)
    s.add_argument("--nmin", type=lambda v: int(float(v)), default=10**4)
    s.add_argument("--nmax", type=lambda v: int(float(v)), required=True)
    _add_common(s, digits=False, table=True)
    s.set_defaults(fn=_cmd_psi_ladder)

    s = subs.add_parser("box", help="probability that ranked factors fall in a box")
    s.add_argument("--n", type=lambda v: int(float(v)), required=True)
    s.add_argument("--box", required=True, help="'t1,dt1;t2,dt2;...'")
    s.add_argument("--method", choices=("exact", "psi", "mc"), default="exact")
    s.add_argument("--samples", type=lambda v: int(float(v)), default=10**5)
    _add_common(s, digits=False, seed=True, threads=True)
    s.set_defaults(fn=_cmd_box)

    s = subs.add_parser("sample-factors", help="draw integers and rank their factors")
    s.add_argument("--n", type=lambda v: int(float(v)), required=True)
    s.add_argument("--count", type=lambda v: int(float(v)), required=True)
    s.add_argument("--k", type=int, default=3)
    _add_common(s, digits=False, seed=True)
    s.set_defaults(fn=_cmd_sample_factors)

    s = subs.add_parser("pd-sample", help="ranked stick-breaking samples as CSV")
    s.add_argument("--count", type=lambda v: int(float(v)), required=True)
    s.add_argument("--trunc", type=int, default=DEFAULT_TRUNCATION)
    s.add_argument("--k", type=int, default=5)
    _add_common(s, digits=False, seed=True)
    s.set_defaults(fn=_cmd_pd_sample)

    s = subs.add_parser("pd-density", help="Poisson-Dirichlet density at a point")
    s.add_argument("--point", required=True, help="'t1,t2,...'")
    _add_common(s, table=True)
    s.set_defaults(fn=_cmd_pd_density)

    s = subs.add_parser("pd-box", help="integral of the PD density over a box")
    s.add_argument("--box", required=True)
    s.add_argument("--grid", type=int, default=256)
    _add_common(s, digits=False, table=True)
    s.set_defaults(fn=_cmd_pd_box)

    s = subs.add_parser("verify", help="box-criterion harness along an n-ladder")
    s.add_argument("--box", required=True)
    s.add_argument("--epsilon", type=float, default=0.25)
    s.add_argument("--ladder", required=True, help="'1e4,1e5,1e6'")
    s.add_argument("--samples", type=lambda v: int(float(v)), default=10**5)
    s.add_argument("--exact-threshold", type=lambda v: int(float(v)), default=10**6)
    s.add_argument("--report", default=None)
    _add_common(s, digits=False, out=False, table=True, seed=True, threads=True)
    s.set_defaults(fn=_cmd_verify)

    s = subs.add_parser("suite", help="run a named verification bundle")
    s.add_argument("--name", choices=BUNDLES, required=True)
    s.add_argument("--report", default=None)
    _add_common(s, digits=False, out=False, seed=True, threads=True)
    s.set_defaults(fn=_cmd_suite)

    return parser


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BillingsleyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
