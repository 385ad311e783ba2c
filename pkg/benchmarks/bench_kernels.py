"""Compare the compiled kernels with the NumPy fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat N]

Prints the best-of-N wall time per call for each kernel and the speed-up,
then checks that both backends return the same values.
"""
from __future__ import annotations

import argparse
import math
import timeit

from casimir_plasma import _fallback

try:
    from casimir_plasma import _kernels
except ImportError:  # extension not built
    _kernels = None

# Al at L = 1 um: p = 4 pi L / lambda_P; Matsubara step at 300 K
P_AL = 4 * math.pi * 1e-6 / 107e-9
STEP_300K = 4 * math.pi * 1e-6 / 7.6330e-6

CASES = {
    "loop_f (scalar)": lambda k: k.loop_f(1.3, 0.4, P_AL),
    "kappa_integral": lambda k: k.kappa_integral(0.4, P_AL),
    "matsubara_sum 300 K": lambda k: k.matsubara_sum(STEP_300K, P_AL),
    "matsubara_sum 30 K": lambda k: k.matsubara_sum(STEP_300K / 10, P_AL),
    "xi_integral": lambda k: k.xi_integral(P_AL),
}


def best_time(fn, repeat: int) -> float:
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if _kernels is None:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
        return 1

    print(f"{'kernel':<22}{'cython':>12}{'python':>12}{'speed-up':>10}")
    for name, case in CASES.items():
        fast = best_time(lambda: case(_kernels), args.repeat)
        slow = best_time(lambda: case(_fallback), args.repeat)
        print(f"{name:<22}{fast * 1e6:>10.1f}us{slow * 1e6:>10.1f}us{slow / fast:>9.1f}x")

    worst = 0.0
    for name, case in CASES.items():
        a, b = case(_kernels), case(_fallback)
        a0 = a[0] if isinstance(a, tuple) else a
        b0 = b[0] if isinstance(b, tuple) else b
        worst = max(worst, abs(a0 - b0) / abs(b0))
    print(f"max relative difference between backends: {worst:.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
