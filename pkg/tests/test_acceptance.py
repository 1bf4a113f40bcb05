"""Acceptance gate: every top-level release criterion as one test.

Each criterion is a single test function, so a verbose pytest run prints
exactly one pass/fail line per criterion.  Tolerances, instance counts, and
runtime budgets are stated inline; seeds are fixed so the run is
reproducible.  The one deliberate xfail documents a printed reference value
that three independent evaluation routes contradict; the companion test pins
the verified numbers.
"""

import math
import os
import time

import numpy as np
import pytest

from conftest import (
    complex_normal,
    lossy_channel,
    random_fock_experiment,
    random_gaussian_state,
    random_occupation,
    random_physical_O,
)
from clickstats import oracles
from clickstats.cli import _csv_text, _TVD_FIELDS, run_golden_suite, run_tvd_experiment
from clickstats.fock import FockExperiment, fock_distribution, threshold_prob_fock
from clickstats.gaussian import (
    gaussian_distribution,
    scattershot_O,
    threshold_prob_gaussian,
)
from clickstats.linalg import (
    block_swap,
    haar_random_unitary,
    permanent,
    select_mode_pairs,
)
from clickstats.matfunc import lhaf, ltor, ltor_parallel, tor, ubrs
from test_linalg import HOM_BS, fourier_matrix


def lossy_fourier3(eta: float, n) -> FockExperiment:
    return FockExperiment(np.sqrt(eta) * fourier_matrix(3), n)


# ---------------------------------------------------------------------------
# golden values


class TestGoldenSuite:
    def test_hom_probabilities(self):
        exp = FockExperiment(HOM_BS, (1, 1))
        assert abs(threshold_prob_fock(exp, (1, 1)) - 0.0) < 1e-12
        assert abs(threshold_prob_fock(exp, (1, 0)) - 0.5) < 1e-12
        assert abs(threshold_prob_fock(exp, (0, 1)) - 0.5) < 1e-12

    def test_fourier3_suppression_and_coincidence(self):
        exp = FockExperiment(fourier_matrix(3), (1, 1, 1))
        assert abs(threshold_prob_fock(exp, (1, 1, 0))) < 1e-12
        assert abs(threshold_prob_fock(exp, (1, 1, 1)) - 1.0 / 3.0) < 1e-12

    def test_lossy_hom_grid(self):
        for eta in np.arange(0.1, 1.05, 0.1):
            exp = FockExperiment(np.sqrt(eta) * HOM_BS, (1, 1))
            assert abs(threshold_prob_fock(exp, (1, 1))) < 1e-12

    def test_lossy_fourier_suppressed_pattern(self):
        for eta in (0.2, 0.4, 0.6, 0.8, 0.95):
            got = threshold_prob_fock(lossy_fourier3(eta, (1, 1, 1)), (1, 1, 0))
            want = eta**2 * (1.0 - eta) / 3.0
            assert abs(got - want) <= 1e-10 * want

    @pytest.mark.xfail(
        strict=True,
        reason=(
            "the printed reference values 0.189 / 0.069444 for n=(1,2,0), "
            "d=(0,1,1) are not reproducible: direct evaluation, brute-force "
            "enumeration, and the per-photon loss expansion all give 0.198 "
            "and 1/12 (see the companion test below); the printed numbers "
            "correspond to halving the weight of the two degenerate "
            "single-photon-loss branches"
        ),
    )
    def test_two_photon_lossy_reference_values(self):
        got = {
            eta: threshold_prob_fock(lossy_fourier3(eta, (1, 2, 0)), (0, 1, 1))
            for eta in (1.0, 0.9, 0.5)
        }
        assert abs(got[1.0] - 2.0 / 9.0) < 1e-10
        assert abs(got[0.9] - 0.189) < 5e-4
        assert abs(got[0.5] - 5.0 / 72.0) < 1e-10 * (5.0 / 72.0)

    def test_two_photon_lossy_verified_values(self):
        # p(eta) = (2/9) eta^3 + (4/9) eta^2 (1 - eta): each of the three
        # photons lost with the surviving pair still able to produce the
        # (0,1,1) coincidence contributes one branch.
        for eta in (1.0, 0.9, 0.5):
            got = threshold_prob_fock(lossy_fourier3(eta, (1, 2, 0)), (0, 1, 1))
            want = (2.0 / 9.0) * eta**3 + (4.0 / 9.0) * eta**2 * (1.0 - eta)
            assert abs(got - want) <= 1e-10 * want
        assert threshold_prob_fock(lossy_fourier3(0.9, (1, 2, 0)), (0, 1, 1)) == pytest.approx(
            0.198, rel=1e-12
        )
        assert threshold_prob_fock(lossy_fourier3(0.5, (1, 2, 0)), (0, 1, 1)) == pytest.approx(
            1.0 / 12.0, rel=1e-10
        )

    def test_builtin_suite_passes_within_one_second(self):
        start = time.perf_counter()
        checks = run_golden_suite()
        elapsed = time.perf_counter() - start
        assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]
        assert len(checks) == 8
        assert elapsed < 1.0, f"golden suite took {elapsed:.2f}s"


# ---------------------------------------------------------------------------
# oracle equivalence


class TestOracleEquivalence:
    def test_brs_against_fock_enumeration(self):
        start = time.perf_counter()
        worst = 0.0
        for i in range(50):
            rng = np.random.default_rng(9000 + i)
            M = int(rng.integers(2, 5))
            N = int(rng.integers(1, 5))
            eta = float(rng.uniform(0.4, 0.95))
            exp = FockExperiment(lossy_channel(M, eta, 9100 + i), random_occupation(M, N, rng))
            d = tuple(int(b) for b in rng.integers(0, 2, size=M))
            fast = threshold_prob_fock(exp, d)
            slow = oracles.threshold_enum_fock(exp, d)
            worst = max(worst, abs(fast - slow))
        elapsed = time.perf_counter() - start
        assert worst < 1e-9, f"worst abs deviation {worst:.3e}"
        assert elapsed < 120.0, f"took {elapsed:.1f}s"

    def test_ltor_against_gaussian_inclusion_exclusion(self):
        worst = 0.0
        for i in range(50):
            rng = np.random.default_rng(9200 + i)
            M = int(rng.integers(2, 5))
            state = random_gaussian_state(M, seed=9300 + i, eta=float(rng.uniform(0.5, 1.0)))
            d = tuple(int(b) for b in rng.integers(0, 2, size=M))
            fast = threshold_prob_gaussian(state, d)
            slow = oracles.threshold_incexc_gaussian(state, d)
            worst = max(worst, abs(fast - slow))
        assert worst < 1e-9, f"worst abs deviation {worst:.3e}"

    def test_lhaf_against_matching_enumeration(self):
        worst = 0.0
        for i in range(50):
            rng = np.random.default_rng(9400 + i)
            n = 2 * int(rng.integers(1, 5))
            A = complex_normal(rng, (n, n))
            A = A + A.T
            gamma = complex_normal(rng, n)
            fast = lhaf(A, gamma)
            slow = oracles.lhaf_reference(A, gamma)
            worst = max(worst, abs(fast - slow) / max(1.0, abs(slow)))
        assert worst < 1e-9, f"worst relative deviation {worst:.3e}"

    def test_ubrs_against_permanent_squared(self):
        worst = 0.0
        for i in range(50):
            rng = np.random.default_rng(9500 + i)
            m = int(rng.integers(1, 7))
            A = complex_normal(rng, (m, m)) / math.sqrt(m)
            want = abs(permanent(A)) ** 2
            got = ubrs(A)
            worst = max(worst, abs(got - want) / max(1.0, want))
        assert worst < 1e-10, f"worst relative deviation {worst:.3e}"

    def test_ltor_series_coefficient_against_lhaf(self):
        # Weak instances: the fixed interpolation nodes leave a truncation
        # tail proportional to the excitation strength.
        worst = 0.0
        for i in range(50):
            m = 1 + i % 3
            O, gamma, _ = random_physical_O(m, seed=9600 + i, strength=5e-4)
            want = lhaf(block_swap(m) @ O, gamma)
            got = oracles.lhaf_from_ltor_series(O, gamma, m)
            worst = max(worst, abs(got - want) / abs(want))
        assert worst < 1e-6, f"worst relative deviation {worst:.3e}"

    def test_scattershot_limit_reaches_bristolian(self):
        # The truncation error is a clean eps^2 series, but the scaling
        # factor (eps^-2 - 1)^N amplifies double-precision cancellation
        # noise as eps shrinks (about 2e-3 relative at eps = 0.0125 for
        # N = 3), so the Richardson nodes sit at the upper end of the
        # convergent window rather than as small as possible.
        done = 0
        worst = 0.0
        i = 0
        while done < 10:
            rng = np.random.default_rng(9700 + i)
            i += 1
            M = int(rng.integers(2, 4))
            eta = float(rng.uniform(0.5, 0.95))
            T = lossy_channel(M, eta, 9800 + i)
            n = tuple(int(b) for b in rng.integers(0, 2, size=M))
            d = tuple(int(b) for b in rng.integers(0, 2, size=M))
            if sum(n) == 0:
                continue
            exp = FockExperiment(T, n)
            target = threshold_prob_fock(exp, d)
            if target < 1e-6:
                continue  # relative error against ~0 is meaningless
            clicked = [j for j, bit in enumerate(d) if bit] + [
                M + j for j, nj in enumerate(n) if nj
            ]
            N = sum(n)
            values = []
            for eps in (0.2, 0.1, 0.05):
                O = scattershot_O(T, eps)
                scaled = (eps**-2 - 1.0) ** N * tor(select_mode_pairs(O, clicked, 2 * M))
                values.append(scaled)
            errors = [abs(v - target) for v in values]
            assert errors[0] > errors[1] > errors[2]
            r1 = (4.0 * values[1] - values[0]) / 3.0
            r2 = (4.0 * values[2] - values[1]) / 3.0
            limit = (16.0 * r2 - r1) / 15.0
            worst = max(worst, abs(limit - target) / target)
            done += 1
        assert worst < 1e-4, f"worst relative deviation {worst:.3e}"


# ---------------------------------------------------------------------------
# normalization


class TestNormalization:
    def test_fock_distributions_sum_to_one(self):
        worst = 0.0
        for i in range(20):
            rng = np.random.default_rng(9900 + i)
            M = int(rng.integers(2, 7))
            N = int(rng.integers(1, 5))
            eta = float(rng.uniform(0.4, 1.0))
            exp = random_fock_experiment(M, N, seed=10000 + i, eta=eta)
            worst = max(worst, abs(sum(fock_distribution(exp).values()) - 1.0))
        assert worst < 1e-9, f"worst deviation from 1: {worst:.3e}"

    def test_gaussian_distributions_sum_to_one(self):
        worst = 0.0
        for i in range(20):
            rng = np.random.default_rng(10100 + i)
            M = int(rng.integers(2, 7))
            state = random_gaussian_state(M, seed=10200 + i, eta=float(rng.uniform(0.5, 1.0)))
            worst = max(worst, abs(sum(gaussian_distribution(state).values()) - 1.0))
        assert worst < 1e-9, f"worst deviation from 1: {worst:.3e}"


# ---------------------------------------------------------------------------
# distribution-distance experiment


class TestTvdExperiment:
    def test_medians_in_band_and_deterministic(self):
        start = time.perf_counter()
        modes = [4, 5, 6, 7, 8]
        rows, summary = run_tvd_experiment(modes, 20, 0.6, 4, 2024)
        elapsed = time.perf_counter() - start
        for M in modes:
            median = summary[M]["tvd_normalized"]["median"]
            assert 0.03 <= median <= 0.15, f"M={M} median {median:.4f} outside [0.03, 0.15]"
        assert elapsed < 900.0, f"took {elapsed:.0f}s single-threaded"

        # Determinism: rerunning a block reproduces its CSV bytes exactly.
        again, _ = run_tvd_experiment([4], 20, 0.6, 4, 2024)
        first_block = [r for r in rows if r["M"] == 4]
        assert _csv_text(_TVD_FIELDS, again) == _csv_text(_TVD_FIELDS, first_block)


# ---------------------------------------------------------------------------
# performance


class TestPerformance:
    def test_ltor_fourteen_modes_single_thread(self):
        O, gamma, _ = random_physical_O(14, seed=10300, strength=0.2)
        start = time.perf_counter()
        value = ltor(O, gamma)
        elapsed = time.perf_counter() - start
        assert np.isfinite(value)
        assert elapsed < 60.0, f"m=14 ltor took {elapsed:.1f}s"

    @pytest.mark.skipif(os.cpu_count() < 4, reason="needs at least 4 cores")
    def test_ltor_parallel_speedup(self):
        O, gamma, _ = random_physical_O(14, seed=10300, strength=0.2)
        start = time.perf_counter()
        serial = ltor(O, gamma)
        t_serial = time.perf_counter() - start
        start = time.perf_counter()
        parallel = ltor_parallel(O, gamma, 4)
        t_parallel = time.perf_counter() - start
        assert parallel == pytest.approx(serial, rel=1e-12)
        assert t_parallel < 0.5 * t_serial, (
            f"parallel {t_parallel:.1f}s vs serial {t_serial:.1f}s"
        )

    def test_brs_twenty_index_budget(self):
        # m clicked rows + n photons with m + n = 20.
        M, N = 10, 10
        U = haar_random_unitary(M, 10400)
        T = np.sqrt(0.7) * U
        exp = FockExperiment(T, (1,) * N)
        start = time.perf_counter()
        p = threshold_prob_fock(exp, (1,) * M)
        elapsed = time.perf_counter() - start
        assert 0.0 <= p <= 1.0
        assert elapsed < 30.0, f"m+n=20 brs took {elapsed:.1f}s"
