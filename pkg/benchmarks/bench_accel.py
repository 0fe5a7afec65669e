"""Time the numba kernels against the pure-numpy fallback.

Each backend runs in its own subprocess because the backend is fixed at import
time by RANGEKIT_NO_NUMBA.

    python3 benchmarks/bench_accel.py [--sizes 100,200,400] [--repeat 3]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
import rangekit
from rangekit.core import canonicalize
from rangekit.exact1d import solve_1d_cubic, solve_1d_quadratic
from rangekit.oracle import brute_force_minrange

sizes, repeat = json.loads(sys.argv[1]), int(sys.argv[2])

def best(fn):
    fn()  # warm-up (and JIT compile)
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter(); fn(); ts.append(time.perf_counter() - t0)
    return min(ts) * 1e3

rng = np.random.default_rng(0)
out = {"backend": rangekit.BACKEND, "rows": []}
for n in sizes:
    inst = canonicalize(np.sort(rng.random(n)), 1, 2.0)
    out["rows"].append({"kernel": "quadratic", "n": n, "ms": best(lambda: solve_1d_quadratic(inst))})
    out["rows"].append({"kernel": "cubic", "n": n, "ms": best(lambda: solve_1d_cubic(inst))})
small = canonicalize(rng.random((7, 2)), 2, 1.0)
out["rows"].append({"kernel": "brute", "n": 7, "ms": best(lambda: brute_force_minrange(small.metric(), 1.0))})
print(json.dumps(out))
"""


def run_backend(no_numba: bool, sizes, repeat):
    env = dict(os.environ)
    if no_numba:
        env["RANGEKIT_NO_NUMBA"] = "1"
    else:
        env.pop("RANGEKIT_NO_NUMBA", None)
    res = subprocess.run([sys.executable, "-c", WORKER, json.dumps(sizes), str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,200,400")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    fast = run_backend(False, sizes, args.repeat)
    slow = run_backend(True, sizes, args.repeat)
    print(f"{'kernel':<10}{'n':>6}{fast['backend'] + ' ms':>12}{slow['backend'] + ' ms':>12}{'speedup':>10}")
    for a, b in zip(fast["rows"], slow["rows"]):
        print(f"{a['kernel']:<10}{a['n']:>6}{a['ms']:>12.2f}{b['ms']:>12.2f}{b['ms'] / a['ms']:>9.1f}x")


if __name__ == "__main__":
    main()
