"""Time the numpy and numba kernel backends side by side.

    python3 benchmarks/bench_kernels.py [--sizes 10 14 18 20] [--repeat 5]

Both backends are imported regardless of HYPERSTATE_DISABLE_NUMBA; numba
kernels are called once before timing so compilation is excluded.
"""

import argparse
import timeit

import numpy as np

from hyperstate._kernels import NUMBA_KERNELS, NUMPY_KERNELS


def cases(n: int, rng):
    size = 1 << n
    amps = (rng.normal(size=size) + 1j * rng.normal(size=size))
    amps /= np.linalg.norm(amps)
    ints = rng.integers(-3, 4, size=size).astype(np.int64)
    reals = rng.uniform(-1, 1, size=size)
    bools = rng.integers(0, 2, size=size).astype(np.uint8)
    h = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    l = (n + 1) // 2
    mask = (1 << n) - 1 ^ 0b101
    return {
        "zeta[int64]": lambda k: k["zeta"](ints.copy(), n),
        "zeta[float]": lambda k: k["zeta"](reals.copy(), n),
        "mobius[float]": lambda k: k["mobius"](reals.copy(), n),
        "mobius_xor": lambda k: k["mobius_xor"](bools.copy(), n),
        "apply_phase_mask": lambda k: k["apply_phase_mask"](amps.copy(), mask, 1j),
        "reduced_single": lambda k: k["reduced_single"](amps, n, l),
        "apply_single": lambda k: k["apply_single"](amps, n, l, h),
        "chi_bool": lambda k: k["chi_bool"](bools, n, l),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[10, 14, 18, 20])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if not NUMBA_KERNELS:
        print("numba is not installed; only the numpy backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<18}{'n':>4}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for n in args.sizes:
        for name, fn in cases(n, rng).items():
            t_np = min(timeit.repeat(lambda: fn(NUMPY_KERNELS), number=1, repeat=args.repeat))
            if NUMBA_KERNELS:
                fn(NUMBA_KERNELS)
                t_nb = min(timeit.repeat(lambda: fn(NUMBA_KERNELS), number=1, repeat=args.repeat))
                print(f"{name:<18}{n:>4}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>10.2f}")
            else:
                print(f"{name:<18}{n:>4}{t_np * 1e3:>12.3f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
