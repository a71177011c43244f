"""Time the compiled and numpy kernels on random polynomials.

    python benchmarks/bench_kernels.py --degrees 50 200 1000 --repeat 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from lacunary.kernels import BACKENDS, aberth_roots, winding_count


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--degrees", type=int, nargs="+", default=[50, 200, 500, 1000])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    names = sorted(BACKENDS)
    print(f"{'kernel':<8} {'degree':>6}  " + "  ".join(f"{n:>10}" for n in names) + "  speedup")
    rng = np.random.default_rng(args.seed)
    for deg in args.degrees:
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        for label, fn in (("aberth", lambda b: aberth_roots(c, backend=b)),
                          ("winding", lambda b: winding_count(c, 0.5, backend=b))):
            t = {b: best_of(lambda: fn(b), args.repeat) for b in names}
            ratio = f"{t['python'] / t['cython']:7.1f}x" if "cython" in t else "      -"
            print(f"{label:<8} {deg:>6}  " + "  ".join(f"{t[b]:>9.4f}s" for b in names) + f"  {ratio}")


if __name__ == "__main__":
    main()
