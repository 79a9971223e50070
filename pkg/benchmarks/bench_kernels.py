#!/usr/bin/env python3
"""Time the compiled grid kernel against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--threads T]
"""
import argparse
import math
import timeit

import numpy as np

from ybesim import _fallback
from ybesim.experiment import ProbeSet, angle_grid

try:
    from ybesim import _kernels
except ImportError:
    _kernels = None

CASES = {
    "sweep 0.01 deg (1 x 18000)": (np.array([56 * math.pi / 180]), angle_grid(0.01)),
    "scan 0.25 deg (720 x 720)": (angle_grid(0.25), angle_grid(0.25)),
    "scan 0.1 deg (1800 x 1800)": (angle_grid(0.1), angle_grid(0.1)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=0, help="0 lets OpenMP decide")
    args = ap.parse_args()
    probes = ProbeSet.default().as_array()
    theta3 = 23 * math.pi / 180
    print(f"{'case':<30} {'numpy [s]':>10} {'cython [s]':>11} {'speedup':>8} {'max |diff|':>11}")
    for name, (t1, t2) in CASES.items():
        py = min(timeit.repeat(lambda: _fallback.fidelity_grid(t1, t2, theta3, probes),
                               number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:<30} {py:>10.4f} {'n/a':>11}")
            continue
        cy = min(timeit.repeat(lambda: _kernels.fidelity_grid(t1, t2, theta3, probes, args.threads),
                               number=1, repeat=args.repeat))
        diff = np.max(np.abs(_kernels.fidelity_grid(t1, t2, theta3, probes, args.threads)
                             - _fallback.fidelity_grid(t1, t2, theta3, probes)))
        print(f"{name:<30} {py:>10.4f} {cy:>11.4f} {py / cy:>7.1f}x {diff:>11.2e}")


if __name__ == "__main__":
    main()
