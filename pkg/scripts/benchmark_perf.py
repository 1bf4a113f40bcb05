#!/usr/bin/env python3
"""Timing checks for the exponential-but-practical problem sizes.

Measures the loop Torontonian on a 14-mode physical state, the
Bristolian at m + n = 20, and (when more than one core is available) the
parallel loop Torontonian speedup.
"""

import argparse
import math
import os
import sys
import time

import numpy as np

from clickstats import fock, gaussian, linalg, matfunc


def physical_state(M: int, seed: int) -> gaussian.GaussianState:
    rng = np.random.default_rng(seed)
    state = gaussian.vacuum_state(M)
    for k in range(M):
        state = gaussian.two_mode_squeezed(
            state, k, (k + 1) % M, 0.15 + 0.1 * rng.random())
    for k in range(M):
        state = gaussian.displace(state, k, 0.2 * (rng.normal() + 1j * rng.normal()))
    return gaussian.apply_channel(state, math.sqrt(0.8) * np.eye(M))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--modes", type=int, default=14, help="ltor mode count (default 14)")
    ap.add_argument("--threads", type=int, default=0,
                    help="worker count for the parallel run (default: cpu count)")
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()

    M = args.modes
    rf = gaussian.reduce(physical_state(M, args.seed))
    gamma = rf.gamma
    start = time.perf_counter()
    value = matfunc.ltor(rf.O, gamma)
    t_serial = time.perf_counter() - start
    print(f"ltor m={M} (2^{M} = {2**M} subsets): {t_serial:.2f} s, value {value:.6e}")

    threads = args.threads or os.cpu_count() or 1
    if threads > 1:
        start = time.perf_counter()
        value_par = matfunc.ltor_parallel(rf.O, gamma, thread_hint=threads)
        t_par = time.perf_counter() - start
        print(f"ltor parallel x{threads}: {t_par:.2f} s "
              f"(speedup {t_serial / t_par:.2f}x), |diff| = {abs(value - value_par):.2e}")
    else:
        print("single core available, skipping the parallel run")

    rng = np.random.default_rng(args.seed)
    U = linalg.haar_random_unitary(10, rng)
    exp = fock.FockExperiment(math.sqrt(0.7) * U, (1,) * 10)
    start = time.perf_counter()
    p = fock.threshold_prob_fock(exp, (1,) * 10)
    t_brs = time.perf_counter() - start
    print(f"brs m=10 n=10 (m+n=20): {t_brs:.2f} s, p = {p:.6e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
