#!/usr/bin/env python3
"""Benchmark the compiled geometry core against the pure-Python fallback.

Three workloads exercise the hot kernel paths: canonicalization round trips
of random halfspace systems, hulls of random generator sets, and a bulk of
lattice operations driven through the public kernel (backend selected by
SETLATTICE_PURE, so the kernel workload is run in a subprocess per backend).

Usage: python benchmarks/bench_core.py [--systems N] [--repeat K]
"""

import argparse
import os
import random
import subprocess
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from setlattice import _geom_py  # noqa: E402
from setlattice.backend import available_impls  # noqa: E402


def random_system(rng, m):
    out = []
    for _ in range(m):
        a, b = 0, 0
        while (a, b) == (0, 0):
            a, b = rng.randint(-5, 5), rng.randint(-5, 5)
        out.append(_geom_py.reduce_facet(a, b, rng.randint(-12, 12), rng.randint(1, 5)))
    return out


def random_generators(rng):
    pts = [
        (rng.randint(-8, 8), rng.randint(-8, 8), rng.randint(1, 4))
        for _ in range(rng.randint(1, 7))
    ]
    rays = []
    for _ in range(rng.randint(0, 3)):
        r = (rng.randint(-3, 3), rng.randint(-3, 3))
        if r != (0, 0):
            rays.append(r)
    return pts, rays


def bench_canonicalize(mod, systems):
    t0 = time.perf_counter()
    sink = 0
    for fs in systems:
        ok, pts, rays = mod.vrep_from_hrep(fs)
        if ok:
            sink += len(mod.hrep_from_vrep(pts, rays))
    return time.perf_counter() - t0, sink


def bench_hulls(mod, gens):
    t0 = time.perf_counter()
    sink = 0
    for pts, rays in gens:
        sink += len(mod.hrep_from_vrep(pts, rays))
    return time.perf_counter() - t0, sink


def bench_kernel_ops(pure: bool, n: int) -> float:
    """Lattice-op workload through the public kernel in a fresh interpreter."""
    code = (
        "import random, time\n"
        "from fractions import Fraction\n"
        "from setlattice.instances import random_workspace, random_upper_set\n"
        "from setlattice.kernel import inf_family\n"
        "rng = random.Random(13)\n"
        "t0 = time.perf_counter()\n"
        f"for _ in range({n}):\n"
        "    ws = random_workspace(rng)\n"
        "    a = random_upper_set(rng, ws)\n"
        "    b = random_upper_set(rng, ws)\n"
        "    q = a.residual(b)\n"
        "    _ = a.add(b), inf_family(ws, [a, b]), q.recession(), a.leq(b)\n"
        "print(time.perf_counter() - t0)\n"
    )
    env = dict(os.environ)
    if pure:
        env["SETLATTICE_PURE"] = "1"
    else:
        env.pop("SETLATTICE_PURE", None)
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True
    )
    return float(out.stdout.strip())


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--systems", type=int, default=6000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    impls = available_impls()
    rng = random.Random(20240809)
    systems = [random_system(rng, rng.randint(1, 9)) for _ in range(args.systems)]
    gens = [random_generators(rng) for _ in range(args.systems)]

    print(f"backends available: {', '.join(impls)}")
    rows = []
    for name, mod in impls.items():
        canon = min(bench_canonicalize(mod, systems)[0] for _ in range(args.repeat))
        hull = min(bench_hulls(mod, gens)[0] for _ in range(args.repeat))
        rows.append((name, canon, hull))
    base = {name: (canon, hull) for name, canon, hull in rows}
    print(f"{'backend':<10}{'canonicalize':>14}{'hulls':>12}{'speedup':>10}")
    for name, canon, hull in rows:
        ratio = base["python"][0] / canon if canon else float("inf")
        print(f"{name:<10}{canon:>12.3f}s{hull:>11.3f}s{ratio:>9.2f}x")

    # cross-check outputs once
    if "cython" in impls:
        cy = impls["cython"]
        for fs in systems[:500]:
            assert _geom_py.vrep_from_hrep(fs) == cy.vrep_from_hrep(fs)
        print("parity check on 500 systems: ok")

    print("\nend-to-end kernel ops (fresh interpreter per backend):")
    t_pure = bench_kernel_ops(pure=True, n=400)
    print(f"{'python':<10}{t_pure:>12.3f}s")
    if "cython" in impls:
        t_cy = bench_kernel_ops(pure=False, n=400)
        print(f"{'cython':<10}{t_cy:>12.3f}s{'':>11}{t_pure / t_cy:>9.2f}x")


if __name__ == "__main__":
    main()
