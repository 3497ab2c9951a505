"""Time the compiled and numpy kernel backends on the workloads the package runs.

    python benchmarks/bench_kernels.py [--repeat 5]

expm is timed on sector blocks exp(-iHt) of the reference model;
rk4_linear on the 2x2 coefficient system over 4000 steps (the ODE oracle).
scipy.linalg.expm is listed for scale only.
"""

import argparse
import timeit

import numpy as np
from scipy.linalg import expm as scipy_expm

from chiralcav import ModelParams, kernels
from chiralcav.propagator import _coefficient_generators, sector_hamiltonian

PARAMS = ModelParams(1.0, 0.09, 0.04)


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def run(repeat):
    rows = []
    for N in (1, 3, 6, 8):
        A = -1j * 13.0 * sector_hamiltonian(PARAMS, N)
        row = [f"expm sector N={N} ({N + 1}x{N + 1})"]
        for name in kernels.available_backends():
            kernels.use_backend(name)
            row.append(best_of(lambda: kernels.expm(A), repeat, 2000))
        row.append(best_of(lambda: scipy_expm(A), repeat, 2000))
        rows.append(row)

    G, _ = _coefficient_generators(PARAMS)
    row = ["rk4 2x2, 4000 steps"]
    for name in kernels.available_backends():
        kernels.use_backend(name)
        row.append(best_of(lambda: kernels.rk4_linear(G, np.eye(2), [2.5], [4000]), repeat, 5))
    row.append(float("nan"))
    rows.append(row)
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    previous = kernels.backend()
    try:
        rows = run(args.repeat)
    finally:
        kernels.use_backend(previous)
    names = list(kernels.available_backends()) + ["scipy"]
    print(f"{'workload':32s}" + "".join(f"{n + ' (us)':>14s}" for n in names))
    for label, *times in rows:
        print(f"{label:32s}" + "".join(f"{t * 1e6:14.1f}" for t in times))


if __name__ == "__main__":
    main()
