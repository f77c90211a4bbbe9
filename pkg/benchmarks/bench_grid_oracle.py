"""Benchmark the balanced-fiber grid scan: numba kernel vs numpy fallback.

Each backend runs in a fresh subprocess because the backend is chosen at
import time from TORIC_FLOER_BACKEND. Usage:

    python3 benchmarks/bench_grid_oracle.py [--polytope NAME] [--repeats K]
"""

from __future__ import annotations

import argparse
import os
import statistics
import subprocess
import sys

WORKER = r"""
import sys, time
from importlib import resources
from toricfloer.kernels import backend_name
from toricfloer.lattice import parse_polytope
from toricfloer.oracle import grid_scan

name, n_a, n_nu, repeats = sys.argv[1], int(sys.argv[2]), int(sys.argv[3]), \
    int(sys.argv[4])
text = (resources.files("toricfloer") / "data" / "polytopes"
        / f"{name}.poly").read_text()
p = parse_polytope(text)
grid_scan(p, 8, 8)  # warm up (JIT compile on the numba path)
times = []
for _ in range(repeats):
    t0 = time.perf_counter()
    pts, nus, res = grid_scan(p, n_a, n_nu)
    times.append(time.perf_counter() - t0)
print(backend_name(), min(times), res.min())
"""


def run_backend(backend: str, name: str, n_a: int, n_nu: int,
                repeats: int) -> tuple[str, float, float]:
    env = dict(os.environ, TORIC_FLOER_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, name, str(n_a), str(n_nu),
         str(repeats)],
        capture_output=True, text=True, env=env, check=True)
    tokens = out.stdout.split()
    return tokens[0], float(tokens[1]), float(tokens[2])


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--polytope", default="p2")
    ap.add_argument("--n-a", type=int, default=120)
    ap.add_argument("--n-nu", type=int, default=48)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    print(f"grid scan on {args.polytope}: {args.n_a}^n fiber points x "
          f"{args.n_nu}^n holonomies, best of {args.repeats}")
    results = {}
    for backend in ("numpy", "numba"):
        used, best, minres = run_backend(
            backend, args.polytope, args.n_a, args.n_nu, args.repeats)
        results[backend] = best
        note = "" if used == backend else f" (fell back to {used})"
        print(f"  {backend:6s}{note}: {best * 1e3:9.1f} ms   "
              f"min residual {minres:.3e}")
    if results["numba"] > 0:
        print(f"  speedup: {results['numpy'] / results['numba']:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
