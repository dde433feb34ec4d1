"""Time the compiled and pure-numpy kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--n 20000]
"""

import argparse
import timeit

import numpy as np

from capbody import kernels
from capbody.audits import THETA_EIGHT_THREE, THETA_FOUR_TWO
from capbody.caps import CapBody, Packing
from capbody.generate import central_s2
from capbody.sampling import random_unit


def cases(n: int):
    rng = np.random.default_rng(0)
    packing: Packing = central_s2(20, seed=0).packing
    V = CapBody.from_packing(packing).vertices
    X = random_unit(rng, 3, n)
    B = X * kernels.python_backend.radial_function(X, V)[:, None]
    U = random_unit(rng, 3, 6)
    eps = np.array([1e-3, 1e-5, 1e-7])
    return {
        "radial_function": lambda k: k.radial_function(X, V),
        "membership_margin": lambda k: k.membership_margin(2 * X, V),
        "illumination_scan": lambda k: k.illumination_scan(B[: n // 10], U, eps, V, 1e-9),
        "scan_four_two_tangent": lambda k: k.scan_four_two_tangent(2e-3, THETA_FOUR_TWO),
        "scan_eight_three_tangent": lambda k: k.scan_eight_three_tangent(1e-3, THETA_EIGHT_THREE),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=20_000)
    args = ap.parse_args()
    backends = {"python": kernels.python_backend}
    if kernels.compiled_backend is not None:
        backends["cython"] = kernels.compiled_backend
    print(f"{'kernel':<24}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn in cases(args.n).items():
        t = {b: min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) for b, k in backends.items()}
        row = f"{name:<24}" + "".join(f"{t[b] * 1e3:>10.1f}ms" for b in backends)
        if "cython" in t:
            row += f"{t['python'] / t['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
