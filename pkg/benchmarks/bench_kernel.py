"""Time the compiled replication kernel against the pure-Python fallback.

    python3 benchmarks/bench_kernel.py [--reps N] [--python-reps M]

Both backends consume the same pre-drawn random streams, so the script also
confirms their trajectories are identical before reporting timings.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from ntpsim import kernel
from ntpsim.exploration import PolicyConfig, PolicyKind
from ntpsim.runner import ScenarioSpec, simulate_raw


def time_backend(spec: ScenarioSpec, backend: str, reps: int) -> float:
    t0 = time.perf_counter()
    for r in range(reps):
        simulate_raw(spec, r, backend)
    return (time.perf_counter() - t0) / reps


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=50, help="replications for the compiled kernel")
    ap.add_argument("--python-reps", type=int, default=3)
    args = ap.parse_args()

    if "cython" not in kernel.BACKENDS:
        raise SystemExit("compiled kernel not built; reinstall with Cython available")

    print(f"{'policy':<10} {'cython ms':>10} {'python ms':>10} {'speedup':>8}  identical")
    for kind in PolicyKind:
        spec = ScenarioSpec(policy=PolicyConfig(kind), gamma=0.9, n_runs=1)
        a = simulate_raw(spec, 0, "cython")
        b = simulate_raw(spec, 0, "python")
        same = all(np.array_equal(x, y) for x, y in zip(a, b))
        fast = time_backend(spec, "cython", args.reps)
        slow = time_backend(spec, "python", args.python_reps)
        print(f"{kind.name.lower():<10} {fast * 1e3:10.2f} {slow * 1e3:10.1f} "
              f"{slow / fast:8.1f}  {same}")


if __name__ == "__main__":
    main()
