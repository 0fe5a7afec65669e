"""Command-line front end: gen, solve, verify, bench.

Exit codes: 0 ok, 1 bad input, 2 incompatible request or failed check,
3 enumeration cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from typing import Optional

import numpy as np

from .approx import solve_approx, hub_solution
from .core import Instance, Solution, canonicalize, induced_graph, is_strongly_connected, is_t_spanner
from .errors import (AlphaUnsupported, BadParams, DimensionMismatch, RangekitError, TooLarge)
from .exact1d import solve_1d_cubic, solve_1d_quadratic
from .oracle import brute_force_minrange, brute_force_spanner
from .spanner1d import solve_1d_spanner

EXIT_OK, EXIT_INPUT, EXIT_INCOMPATIBLE, EXIT_CAP = 0, 1, 2, 3
ALGORITHMS = ("exact1d-cubic", "exact1d", "spanner1d", "hub", "approx", "brute", "brute-spanner")
DISTRIBUTIONS = ("uniform", "clustered", "collinear-noise")
CSV_HEADER = ["alg", "n", "dim", "alpha", "t", "seed", "cost", "valid", "elapsed_ms"]


# ------------------------------------------------------------------ files

def instance_to_json(dimension: int, alpha: float, points) -> str:
    obj = {"dimension": int(dimension), "alpha": float(alpha),
           "points": [[float(c) for c in p] for p in points]}
    return json.dumps(obj) + "\n"


def parse_instance_text(text: str) -> dict:
    """JSON instance file, or plain text: first line "dim n alpha", then one
    point per line."""
    s = text.lstrip()
    if s.startswith("{"):
        obj = json.loads(s)
        if not isinstance(obj, dict) or not {"dimension", "alpha", "points"} <= obj.keys():
            raise BadParams("instance JSON needs dimension, alpha and points")
        return {"dimension": int(obj["dimension"]), "alpha": float(obj["alpha"]),
                "points": [[float(c) for c in p] for p in obj["points"]]}
    lines = [ln.split() for ln in s.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 3:
        raise BadParams('plain-text instance must start with "dim n alpha"')
    dim, n, alpha = int(lines[0][0]), int(lines[0][1]), float(lines[0][2])
    pts = [[float(c) for c in ln] for ln in lines[1:]]
    if len(pts) != n:
        raise BadParams(f"header says {n} points, found {len(pts)}")
    return {"dimension": dim, "alpha": alpha, "points": pts}


def load_instance(path: str, alpha: Optional[float] = None) -> Instance:
    with open(path, encoding="utf-8") as f:
        obj = parse_instance_text(f.read())
    a = obj["alpha"] if alpha is None else alpha
    return canonicalize(obj["points"], obj["dimension"], a)


def _jsonable(v):
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        out = {str(k): _jsonable(x) for k, x in v.items()}
        return {k: x for k, x in out.items() if x is not _SKIP}
    return _SKIP


_SKIP = object()


def solution_to_json(instance: Instance, sol: Solution) -> str:
    ranges = instance.to_input_order(sol.ranges)
    params = {k: v for k, v in (_jsonable(sol.params) or {}).items() if v is not _SKIP}
    params["alpha"] = instance.alpha
    t = sol.t if sol.t is not None and math.isfinite(sol.t) else None
    obj = {"algorithm": sol.algorithm,
           "cost": float((ranges ** instance.alpha).sum()),
           "ranges": [float(r) for r in ranges],
           "valid": bool(sol.valid),
           "t": t,
           "params": params,
           "elapsed_ms": round(float(sol.elapsed_ms), 3)}
    return json.dumps(obj) + "\n"


def parse_solution_text(text: str) -> dict:
    obj = json.loads(text)
    need = {"algorithm", "cost", "ranges", "valid", "t", "params", "elapsed_ms"}
    if not isinstance(obj, dict) or not need <= obj.keys():
        raise BadParams("solution JSON is missing fields")
    return obj


# ------------------------------------------------------------- generation

def generate_points(dist: str, n: int, dim: int, seed: int) -> np.ndarray:
    if n < 1:
        raise BadParams("n must be >= 1")
    if dim not in (1, 2, 3):
        raise BadParams("dim must be 1, 2 or 3")
    if dist not in DISTRIBUTIONS:
        raise BadParams(f"unknown distribution {dist!r}")
    rng = np.random.Generator(np.random.PCG64(int(seed) % 2 ** 64))
    if dist == "uniform":
        return rng.random((n, dim))
    if dist == "clustered":
        k = math.ceil(math.sqrt(n))
        centers = rng.random((k, dim))
        which = rng.integers(0, k, n)
        return centers[which] + rng.normal(0.0, 0.05, (n, dim))
    pts = np.zeros((n, dim))
    pts[:, 0] = np.sort(rng.random(n))
    if dim > 1:
        pts[:, 1:] = rng.uniform(-0.01, 0.01, (n, dim - 1))
    return pts


# ------------------------------------------------------------------ solve

def run_solver(alg: str, instance: Instance, t: Optional[float] = None, cap: Optional[int] = None) -> Solution:
    if alg == "exact1d-cubic":
        return solve_1d_cubic(instance)
    if alg == "exact1d":
        return solve_1d_quadratic(instance)
    if alg == "spanner1d":
        return solve_1d_spanner(instance, math.inf if t is None else t, cap=cap)
    if alg == "hub":
        if instance.alpha != 1:
            raise AlphaUnsupported("hub is defined for alpha = 1 only")
        c = hub_solution(instance)
        return Solution("hub", c.cost, c.ranges, c.valid, params=dict(c.params))
    if alg == "approx":
        return solve_approx(instance, cap=cap)
    if alg == "brute":
        c, rho = brute_force_minrange(instance.metric(), instance.alpha, cap=cap)
        return Solution("brute", c, rho, is_strongly_connected(induced_graph(instance.metric(), rho, instance.tol)))
    if alg == "brute-spanner":
        tt = math.inf if t is None else t
        c, rho = brute_force_spanner(instance, t=tt, cap=cap)
        g = induced_graph(instance.metric(), rho, instance.tol)
        return Solution("brute-spanner", c, rho, is_t_spanner(g, None, tt, instance.tol), t=tt)
    raise BadParams(f"unknown algorithm {alg!r}")


def timed_solve(alg, instance, t=None, cap=None) -> Solution:
    t0 = time.perf_counter()
    sol = run_solver(alg, instance, t, cap)
    sol.elapsed_ms = (time.perf_counter() - t0) * 1e3
    # independent re-check of what the solver claims
    g = induced_graph(instance.metric(), sol.ranges, instance.tol)
    tt = sol.t if sol.t is not None else (t if alg in ("spanner1d", "brute-spanner") else None)
    sol.valid = is_t_spanner(g, None, tt, instance.tol) if tt is not None else is_strongly_connected(g)
    return sol


def _exit_for(err: Exception) -> int:
    if isinstance(err, TooLarge):
        return EXIT_CAP
    if isinstance(err, (DimensionMismatch, AlphaUnsupported)):
        return EXIT_INCOMPATIBLE
    return EXIT_INPUT


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def cmd_gen(args) -> int:
    pts = generate_points(args.dist, args.n, args.dim, args.seed)
    _write(args.out, instance_to_json(args.dim, args.alpha, pts))
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = load_instance(args.input, args.alpha)
    sol = timed_solve(args.alg, inst, args.t, args.cap)
    _write(args.out, solution_to_json(inst, sol))
    return EXIT_OK


def verify_report(inst: Instance, sol: dict, t: Optional[float] = None):
    """List of (check name, passed, detail)."""
    ranges = np.asarray(sol["ranges"], float)
    checks = []
    if len(ranges) != inst.n:
        return [("size", False, f"{len(ranges)} ranges for {inst.n} points")]
    rho = inst.from_input_order(ranges)
    c = float((ranges ** inst.alpha).sum())
    ok = abs(c - float(sol["cost"])) <= 1e-9 * max(1.0, abs(c))
    checks.append(("cost", ok, f"recomputed {c!r}, file {sol['cost']!r}"))
    g = induced_graph(inst.metric(), rho, inst.tol)
    checks.append(("connectivity", is_strongly_connected(g), "strongly connected"))
    if t is not None:
        checks.append(("spanner", is_t_spanner(g, None, t, inst.tol), f"t={t!r}"))
    return checks


def cmd_verify(args) -> int:
    with open(args.solution, encoding="utf-8") as f:
        sol = parse_solution_text(f.read())
    alpha = args.alpha
    if alpha is None:
        alpha = (sol.get("params") or {}).get("alpha")
    inst = load_instance(args.instance, alpha)
    checks = verify_report(inst, sol, args.t)
    for name, ok, detail in checks:
        print(f"{name}: {'pass' if ok else 'FAIL'} ({detail})")
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_INCOMPATIBLE


def bench_rows(algs, sizes, seeds, dim=1, dist="uniform", alpha=1.0, t=None, cap=None):
    rows = []
    for n in sizes:
        for seed in seeds:
            pts = generate_points(dist, n, dim, seed)
            for alg in algs:
                tt = t if alg in ("spanner1d", "brute-spanner") else None
                row = {"alg": alg, "n": n, "dim": dim, "alpha": alpha,
                       "t": "" if tt is None else tt, "seed": seed}
                try:
                    inst = canonicalize(pts, dim, alpha)
                    sol = timed_solve(alg, inst, tt, cap)
                    row.update(cost=repr(float((sol.ranges ** alpha).sum())), valid=str(sol.valid).lower(),
                               elapsed_ms=f"{sol.elapsed_ms:.3f}")
                except RangekitError as err:
                    row.update(cost="", valid=f"error:{type(err).__name__}", elapsed_ms="")
                rows.append(row)
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _int_list(s):
    return [int(x) for x in s.split(",") if x.strip()]


def cmd_bench(args) -> int:
    algs = [a for a in args.algs.split(",") if a]
    for a in algs:
        if a not in ALGORITHMS:
            raise BadParams(f"unknown algorithm {a!r}")
    rows = bench_rows(algs, _int_list(args.sizes), _int_list(args.seeds), args.dim, args.dist,
                      args.alpha, args.t, args.cap)
    _write(args.out, rows_to_csv(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rangekit", description="Range assignment solvers")
    sub = p.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--dist", default="uniform", choices=DISTRIBUTIONS)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--alpha", type=float, default=1.0)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("alg", choices=ALGORITHMS)
    s.add_argument("input")
    s.add_argument("--out", default="-")
    s.add_argument("--alpha", type=float)
    s.add_argument("--t", type=float)
    s.add_argument("--cap", type=int)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="re-check a solution file")
    v.add_argument("instance")
    v.add_argument("solution")
    v.add_argument("--t", type=float)
    v.add_argument("--alpha", type=float)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run a benchmark grid and write CSV")
    b.add_argument("--algs", default="exact1d,exact1d-cubic")
    b.add_argument("--sizes", default="")
    b.add_argument("--seeds", default="0")
    b.add_argument("--dim", type=int, default=1)
    b.add_argument("--dist", default="uniform", choices=DISTRIBUTIONS)
    b.add_argument("--alpha", type=float, default=1.0)
    b.add_argument("--t", type=float)
    b.add_argument("--cap", type=int)
    b.add_argument("--out", default="-")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except RangekitError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return _exit_for(err)
    except (OSError, ValueError, KeyError, TypeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
