"""Tests of the brute-force oracles: their own closed forms, their caps, and
agreement with the fast paths they exist to validate."""

import math

import numpy as np
import pytest

from conftest import (
    random_fock_experiment,
    random_gaussian_state,
    random_matrix,
    random_physical_O,
    random_symmetric,
)
from clickstats import oracles
from clickstats.errors import CapExceeded, InvalidInput
from clickstats.fock import FockExperiment, fock_distribution, threshold_prob_fock
from clickstats.gaussian import gaussian_distribution
from clickstats.linalg import block_swap, permanent, unitary_dilation
from clickstats.matfunc import lhaf
from test_linalg import fourier_matrix


class TestPermanentNaive:
    def test_identity(self):
        assert oracles.permanent_naive(np.eye(4)) == pytest.approx(1.0)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_all_ones(self, n):
        got = oracles.permanent_naive(np.ones((n, n)))
        assert got == pytest.approx(math.factorial(n))

    def test_cross_check_fast_path(self):
        A = random_matrix(5, 5, seed=60)
        want = oracles.permanent_naive(A)
        assert abs(permanent(A) - want) < 1e-10 * abs(want)

    def test_size_cap(self):
        with pytest.raises(CapExceeded):
            oracles.permanent_naive(np.eye(10))


class TestLhafReference:
    def test_single_edge(self):
        a = 2.0 + 1.0j
        assert oracles.lhaf_reference(np.array([[0, a], [a, 0]])) == pytest.approx(a)

    def test_single_loop_pair(self):
        g = np.array([1.5, -0.5j])
        got = oracles.lhaf_reference(np.zeros((2, 2)), g)
        assert got == pytest.approx(g[0] * g[1])

    def test_three_matchings(self):
        A = random_symmetric(4, seed=61)
        want = A[0, 1] * A[2, 3] + A[0, 2] * A[1, 3] + A[0, 3] * A[1, 2]
        assert oracles.lhaf_reference(A) == pytest.approx(want)

    def test_size_cap(self):
        with pytest.raises(CapExceeded):
            oracles.lhaf_reference(np.zeros((10, 10)))


class TestThresholdEnumFock:
    def test_lossless_hom(self):
        bs = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
        exp = FockExperiment(bs, (1, 1))
        assert oracles.threshold_enum_fock(exp, (1, 1)) == pytest.approx(0.0, abs=1e-12)
        assert oracles.threshold_enum_fock(exp, (1, 0)) == pytest.approx(0.5, rel=1e-10)

    @pytest.mark.parametrize("seed", range(4))
    def test_agrees_with_fast_path(self, seed):
        exp = random_fock_experiment(4, 3, seed=1400 + seed, eta=0.7)
        for d, p in fock_distribution(exp).items():
            assert p == pytest.approx(oracles.threshold_enum_fock(exp, d), abs=1e-9)

    def test_dilation_completion_invariance(self):
        # Any unitary completion of T must give the same statistics; mixing
        # the environment modes of the standard dilation builds another one.
        exp = random_fock_experiment(3, 2, seed=62, eta=0.6)
        base = unitary_dilation(exp.T)
        k = base.shape[0]
        env = k - exp.modes_out
        from clickstats.linalg import haar_random_unitary

        W = np.eye(k, dtype=np.complex128)
        W[exp.modes_out :, exp.modes_out :] = haar_random_unitary(env, 63)
        alt = W @ base
        d = (1, 0, 1)
        want = oracles.threshold_enum_fock(exp, d)
        got = oracles.threshold_enum_fock(exp, d, dilation=alt)
        assert got == pytest.approx(want, abs=1e-10)

    def test_photon_cap(self):
        exp = FockExperiment(np.eye(2), (3, 3))
        with pytest.raises(CapExceeded):
            oracles.threshold_enum_fock(exp, (1, 1))

    def test_mode_cap(self):
        exp = random_fock_experiment(7, 1, seed=64)
        with pytest.raises(CapExceeded):
            oracles.threshold_enum_fock(exp, (1,) + (0,) * 6)


class TestThresholdIncexcGaussian:
    @pytest.mark.parametrize("seed", range(4))
    def test_agrees_with_fast_path(self, seed):
        state = random_gaussian_state(3, seed=1500 + seed, eta=0.8)
        for d, p in gaussian_distribution(state).items():
            assert p == pytest.approx(oracles.threshold_incexc_gaussian(state, d), abs=1e-9)

    def test_mode_cap(self):
        state = random_gaussian_state(9, seed=65, strength=0.1)
        with pytest.raises(CapExceeded):
            oracles.threshold_incexc_gaussian(state, (1,) * 9)


class TestLhafFromLtorSeries:
    # Weak instances: the default interpolation nodes resolve the series
    # coefficient exactly only in the limit, and the truncation tail scales
    # with the excitation strength.
    STRENGTH = 5e-4

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_matches_trace_formula(self, m):
        O, gamma, _ = random_physical_O(m, seed=1600 + m, strength=self.STRENGTH)
        X = block_swap(m)
        want = lhaf(X @ O, gamma)
        got = oracles.lhaf_from_ltor_series(O, gamma, m)
        assert abs(got - want) < 1e-6 * max(1e-30, abs(want))

    def test_order_must_match_mode_count(self):
        O, gamma, _ = random_physical_O(2, seed=66, strength=0.01)
        with pytest.raises(InvalidInput):
            oracles.lhaf_from_ltor_series(O, gamma, 1)

    def test_clustered_nodes_rejected(self):
        O, gamma, _ = random_physical_O(2, seed=67, strength=0.01)
        nodes = [0.02, 0.02 + 1e-13, 0.02 + 2e-13]
        with pytest.raises(InvalidInput, match="ill-conditioned"):
            oracles.lhaf_from_ltor_series(O, gamma, 2, nodes=nodes)

    def test_order_cap(self):
        O, gamma, _ = random_physical_O(4, seed=68, strength=0.01)
        with pytest.raises(CapExceeded):
            oracles.lhaf_from_ltor_series(O, gamma, 4)


class TestApproxModelDistribution:
    def test_lossless_hom_has_no_collision_free_mass(self):
        bs = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
        exp = FockExperiment(bs, (1, 1))
        approx = oracles.approx_model_distribution(exp)
        assert sum(approx.values()) == pytest.approx(0.0, abs=1e-12)

    def test_mass_is_the_collision_free_sector(self):
        # The model keeps only 0/1-occupation outputs, so its total mass is
        # the probability that no detector sees two photons.
        exp = random_fock_experiment(4, 2, seed=69, eta=0.6)
        approx = oracles.approx_model_distribution(exp)
        total = sum(approx.values())
        assert 0.0 < total < 1.0

    def test_on_collision_free_patterns_it_lower_bounds_exact(self):
        exp = random_fock_experiment(4, 2, seed=70, eta=0.6)
        approx = oracles.approx_model_distribution(exp)
        for d, p in approx.items():
            if sum(d) == exp.photons:
                assert p <= threshold_prob_fock(exp, d) + 1e-12

    def test_mode_cap(self):
        exp = random_fock_experiment(11, 1, seed=71)
        with pytest.raises(CapExceeded):
            oracles.approx_model_distribution(exp)


class TestFourierLandmarks:
    def test_enum_reproduces_suppression(self):
        exp = FockExperiment(fourier_matrix(3), (1, 1, 1))
        assert oracles.threshold_enum_fock(exp, (1, 1, 0)) < 1e-12
        assert oracles.threshold_enum_fock(exp, (1, 1, 1)) == pytest.approx(1 / 3, rel=1e-9)

    def test_enum_reproduces_lossy_closed_form(self):
        eta = 0.8
        exp = FockExperiment(np.sqrt(eta) * fourier_matrix(3), (1, 1, 1))
        want = eta**2 * (1 - eta) / 3
        assert oracles.threshold_enum_fock(exp, (1, 1, 0)) == pytest.approx(want, rel=1e-9)
