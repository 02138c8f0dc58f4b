"""Compare the numba and numpy Laplacian kernels, and a full energy run under each.

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --sizes 64 128 256 512 --repeat 50
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from mpfc_sav import _kernels
from mpfc_sav._accel import HAVE_NUMBA

END_TO_END = """
import time
from mpfc_sav.experiments import energy_config, run_simulation
from mpfc_sav.stepper import TimeSpec
from dataclasses import replace
cfg = replace(energy_config({n}), time=TimeSpec(0.05, {t_final}))
run_simulation(replace(cfg, time=TimeSpec(0.05, 0.1)))  # warm-up / JIT compile
t0 = time.perf_counter()
run_simulation(cfg)
print(time.perf_counter() - t0)
"""


def bench_kernel(fn, f, repeat):
    fn(f, 1.0, 1.0)  # compile
    return min(timeit.repeat(lambda: fn(f, 1.0, 1.0), number=repeat, repeat=5)) / repeat


def end_to_end(n, t_final, jit):
    env = dict(os.environ, MPFC_SAV_NUMBA="1" if jit else "0")
    out = subprocess.run(
        [sys.executable, "-c", END_TO_END.format(n=n, t_final=t_final)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return float(out.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512])
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--end-to-end", type=int, default=128, help="grid size of the energy run (0 to skip)")
    args = parser.parse_args()

    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy kernels can be timed")
    rng = np.random.default_rng(0)
    print(f"{'bc':>9} {'n':>5} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}")
    for bc in ("neumann", "periodic"):
        for n in args.sizes:
            f = rng.standard_normal((n, n))
            t_np = bench_kernel(_kernels.NUMPY_KERNELS[bc], f, args.repeat)
            if HAVE_NUMBA:
                t_nb = bench_kernel(_kernels.NUMBA_KERNELS[bc], f, args.repeat)
                assert np.allclose(_kernels.NUMPY_KERNELS[bc](f, 1.0, 1.0), _kernels.NUMBA_KERNELS[bc](f, 1.0, 1.0))
                print(f"{bc:>9} {n:>5} {1e3 * t_np:11.3f} {1e3 * t_nb:11.3f} {t_np / t_nb:8.2f}")
            else:
                print(f"{bc:>9} {n:>5} {1e3 * t_np:11.3f} {'-':>11} {'-':>8}")

    if args.end_to_end:
        n = args.end_to_end
        t_np = end_to_end(n, 5.0, jit=False)
        line = f"energy run {n}x{n}, 100 CN steps with diagnostics: numpy {t_np:.2f} s"
        if HAVE_NUMBA:
            t_nb = end_to_end(n, 5.0, jit=True)
            line += f", numba {t_nb:.2f} s ({t_np / t_nb:.2f}x)"
        print(line)


if __name__ == "__main__":
    main()
