"""Timing comparison of the compiled and pure-numpy search kernels.

Runs the full multi-start Newton workload (default seeding: C(24,3)
ordered feet triples x 9 interior points) on one hyperbolic and one
spherical near-circle, once per backend, and checks that both backends
converge to the same orbit set.

Usage: python benchmarks/bench_kernels.py [--starts N]
"""

import argparse
import time

import numpy as np

from tripods import kernels
from tripods.curves import disk_radial_curve, sphere_radial_curve
from tripods.morse import _seed_states, _orbit_dedup, default_epsilon, offset_curve


def run(curve, name, starts):
    eps = default_epsilon(curve)
    gamma_eps = offset_curve(curve, eps)
    table = kernels.table_from_curve(gamma_eps)
    seeds = _seed_states(curve, gamma_eps, starts)

    rows = []
    orbit_sets = {}
    for backend, force_py in (("compiled", False), ("python", True)):
        if backend == "compiled" and kernels.backend_name() != "compiled":
            continue
        t0 = time.perf_counter()
        states, norms = kernels.newton_refine(table, seeds, force_python=force_py)
        dt = time.perf_counter() - t0
        orbits = _orbit_dedup(states, norms, curve.period, curve.diameter())
        rows.append((backend, dt, seeds.shape[0], states.shape[0], len(orbits)))
        orbit_sets[backend] = sorted(tuple(np.round(o["feet"], 5)) for o in orbits)

    print(f"\n{name}  (seeds: {seeds.shape[0]}, eps: {eps:.4f})")
    print(f"  {'backend':10s} {'time':>9s} {'converged':>10s} {'orbits':>7s}")
    for backend, dt, n_seed, n_conv, n_orb in rows:
        note = "" if backend == "compiled" else "  (duplicates consolidated in flight)"
        print(f"  {backend:10s} {dt:8.2f}s {n_conv:10d} {n_orb:7d}{note}")
    if len(rows) == 2:
        print(f"  speedup: {rows[1][1] / rows[0][1]:.1f}x")
    if len(orbit_sets) == 2 and orbit_sets["compiled"] == orbit_sets["python"]:
        print("  orbit sets agree")
    elif len(orbit_sets) == 2:
        print("  WARNING: orbit sets differ")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--starts", type=int, default=24)
    args = ap.parse_args()
    print(f"active backend: {kernels.backend_name()}")
    run(disk_radial_curve(0.5, [0.0, 0.02]), "hyperbolic r = 0.5 + 0.02 cos(2t)", args.starts)
    run(sphere_radial_curve(0.5, [0.0, 0.0, 0.02]), "spherical r = 0.5 + 0.02 cos(3t)", args.starts)


if __name__ == "__main__":
    main()
