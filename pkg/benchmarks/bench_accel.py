"""Compare the numba kernels in mopcd._accel against the numpy versions.

    python3 benchmarks/bench_accel.py            # micro benchmarks, both paths
    python3 benchmarks/bench_accel.py --e2e      # also time density_compare twice,
                                                 # once with MOPCD_DISABLE_NUMBA=1

Each row prints best-of-N wall time for both paths and the max abs
difference between their outputs.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from mopcd import _accel


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def row(name, fast, slow, repeat):
    a, b = fast(), slow()  # also warms up the jit
    diff = float(np.max(np.abs(np.asarray(a, float) - np.asarray(b, float))))
    tf, ts = best_of(fast, repeat), best_of(slow, repeat)
    print(f"{name:<14} {_accel.backend():>6} {tf * 1e3:9.3f} ms   numpy {ts * 1e3:9.3f} ms"
          f"   speedup {ts / tf:6.2f}   maxdiff {diff:.2e}")


def micro(repeat):
    rng = np.random.default_rng(0)
    coeffs = rng.standard_normal((12, 13))
    x = rng.uniform(-5, 5, 200_000)
    row("horner_stack", lambda: _accel.horner_stack(coeffs, x),
        lambda: _accel.horner_stack_reference(coeffs, x), repeat)
    vals = rng.standard_normal(1_200_000) * 2
    row("bin_counts", lambda: _accel.bin_counts(vals, -4.5, 4.5, 40),
        lambda: _accel.bin_counts_reference(vals, -4.5, 4.5, 40), repeat)


E2E = ("import time; from mopcd.rmt import SourceModel, density_compare; "
       "t = time.perf_counter(); r = density_compare(SourceModel((1, -1), (3, 3)), {samples}); "
       "print(repr(r.max_rel_dev), time.perf_counter() - t)")


def end_to_end(samples):
    code = E2E.format(samples=samples)
    for flag in ("0", "1"):
        env = dict(os.environ, MOPCD_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        label = "numpy" if flag == "1" else "numba"
        print(f"density_compare {label:>6}: {float(out[1]):7.2f} s   max_rel_dev {out[0]}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--e2e", action="store_true")
    ap.add_argument("--samples", type=int, default=200_000)
    args = ap.parse_args()
    print(f"backend: {_accel.backend()}")
    micro(args.repeat)
    if args.e2e:
        end_to_end(args.samples)


if __name__ == "__main__":
    main()
