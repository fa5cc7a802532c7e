"""Time the numba kernels against their pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best-of-``repeat`` wall time for both backends, the
speedup and the max absolute disagreement. The first numba call is excluded
(compilation).
"""
import argparse
import timeit

import numpy as np

from hermitex import kernels
from hermitex._accel import HAS_NUMBA


def cases(rng):
    x = rng.uniform(-12, 12, 20_000)
    c = rng.standard_normal(257)
    amp = rng.standard_normal((64, 256)) + 1j * rng.standard_normal((64, 256))
    y = np.sort(rng.uniform(-10, 10, 256))
    xi = np.linspace(-6, 6, 128)
    return [
        ("hermite_table N=128, 20k pts", kernels.hermite_table_numba, kernels.hermite_table_numpy,
         (128, x)),
        ("clenshaw N=256, 20k pts", kernels.clenshaw_numba, kernels.clenshaw_numpy, (c, x)),
        ("phase_sum 64x256 -> 128", kernels.phase_sum_numba, kernels.phase_sum_numpy, (amp, y, xi)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=lambda t: int(t, 0), default=0x5EED)
    args = ap.parse_args(argv)
    if not HAS_NUMBA:
        print("numba is not installed; only the numpy path is available")
    print(f"{'kernel':32s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s} {'max diff':>10s}")
    for name, fast, slow, call_args in cases(np.random.default_rng(args.seed)):
        ref = slow(*call_args)
        t_slow = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat))
        if HAS_NUMBA:
            out = fast(*call_args)  # compile
            t_fast = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat))
            diff = float(np.max(np.abs(out - ref)))
            print(f"{name:32s} {1e3 * t_fast:11.3f} {1e3 * t_slow:11.3f} {t_slow / t_fast:8.2f} {diff:10.2e}")
        else:
            print(f"{name:32s} {'-':>11s} {1e3 * t_slow:11.3f} {'-':>8s} {'-':>10s}")


if __name__ == "__main__":
    main()
