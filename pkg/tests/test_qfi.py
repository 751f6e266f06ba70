"""Closed-form QFI, pairing combinatorics, permutation averages, crossover."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scattermet import fock, networks, qfi
from scattermet.errors import DomainError, OddModeCount, TooLarge
from scattermet.occupations import OccupationVector


def occ(text: str) -> OccupationVector:
    return OccupationVector.from_dense(int(ch) for ch in text)


TABLE_INPUTS = ["1100", "1010", "1001", "0110", "0101", "0011"]
TABLE_SEP = [4, 2, 2, 2, 2, 4]
TABLE_UNI = [3, 2, 3, 3, 2, 3]


class TestClosedForms:
    @pytest.mark.parametrize("text,want", list(zip(TABLE_INPUTS, TABLE_SEP)))
    def test_separable_table(self, text, want):
        assert qfi.qfi_separable(occ(text)) == pytest.approx(want, abs=1e-12)

    @pytest.mark.parametrize("text,want", list(zip(TABLE_INPUTS, TABLE_UNI)))
    def test_uniform_table(self, text, want):
        assert qfi.qfi_uniform(occ(text)) == pytest.approx(want, abs=1e-12)

    @pytest.mark.parametrize("text", TABLE_INPUTS)
    def test_symmetric_table(self, text):
        assert qfi.qfi_symmetric(occ(text)) == pytest.approx(8 / 3, abs=1e-12)

    def test_separable_two_modes_multiphoton(self):
        # 3 + 2 + 2*6 = 17, cross-checked against the Fock-space oracle
        value = qfi.qfi_separable(occ("32"))
        assert value == 17.0
        oracle = fock.qfi_oracle(networks.generator("mzi", 2), occ("32"))
        assert value == pytest.approx(oracle.full, abs=1e-9)

    def test_uniform_photons_on_matching_parity(self):
        assert qfi.qfi_uniform(occ("10100000")) == 2.0
        assert qfi.qfi_uniform(occ("0101")) == 2.0

    def test_symmetric_bunched(self):
        # 3 + 4/7, cross-checked against the Fock-space oracle
        value = qfi.qfi_symmetric(occ("21000000"))
        assert value == pytest.approx(3 + 4 / 7, abs=1e-12)
        oracle = fock.qfi_oracle(networks.generator("sym", 8), occ("21000000"))
        assert value == pytest.approx(oracle.full, abs=1e-9)

    def test_symmetric_single_mode_hits_shot_noise(self):
        assert qfi.qfi_symmetric(OccupationVector(8, {3: 5})) == 5.0

    def test_odd_mode_count_rejected(self):
        with pytest.raises(OddModeCount):
            qfi.qfi_separable(OccupationVector(3, {0: 1}))
        with pytest.raises(OddModeCount):
            qfi.qfi_uniform(OccupationVector(5, {0: 1}))


def brute_force_pair_probability(m: int, n: int, x: int) -> Fraction:
    """Enumerate every single-photon placement and count pair multiplicities."""
    hits = 0
    total = 0
    for positions in itertools.combinations(range(m), n):
        pairs = sum(1 for p in positions if p % 2 == 0 and p + 1 in positions)
        total += 1
        if pairs == x:
            hits += 1
    return Fraction(hits, total)


class TestPairing:
    @pytest.mark.parametrize("m,n,x", [(4, 2, 0), (4, 2, 1), (8, 3, 0), (8, 3, 1),
                                       (8, 4, 2), (12, 5, 2)])
    def test_against_enumeration(self, m, n, x):
        want = brute_force_pair_probability(m, n, x)
        assert qfi.pair_probability_exact(m, n, x) == want

    def test_four_modes_two_photons(self):
        assert qfi.pair_probability(4, 2, 1) == pytest.approx(1 / 3, abs=1e-15)
        assert qfi.pair_probability(4, 2, 0) == pytest.approx(2 / 3, abs=1e-15)

    def test_probabilities_sum_to_one(self):
        total = sum(qfi.pair_probability_exact(12, 5, x) for x in range(3))
        assert total == 1

    def test_counting_identity_exact(self):
        for m in range(2, 41, 2):
            for n in range(0, min(m, 10) + 1):
                weights = sum(qfi.pair_count_weight(m, n, x) for x in range(n // 2 + 1))
                assert weights == math.comb(m, n)

    def test_range_errors(self):
        with pytest.raises(DomainError):
            qfi.pair_probability(4, 5, 0)
        with pytest.raises(DomainError):
            qfi.pair_probability(4, 2, 2)


class TestAverageSinglePhotons:
    def test_four_modes_two_photons(self):
        assert qfi.avg_qfi_separable_single_photons(4, 2) == pytest.approx(8 / 3, abs=1e-15)

    @pytest.mark.parametrize("m", [2, 6, 20])
    def test_single_photon_is_shot_noise(self, m):
        assert qfi.avg_qfi_separable_single_photons(m, 1) == 1.0

    def test_sixteen_modes_four_photons(self):
        # oracle: direct average of the separable QFI over all placements
        total = 0.0
        count = 0
        for positions in itertools.combinations(range(16), 4):
            total += qfi.qfi_separable(OccupationVector(16, {p: 1 for p in positions}))
            count += 1
        assert qfi.avg_qfi_separable_single_photons(16, 4) == pytest.approx(
            total / count, abs=1e-12)
        assert qfi.avg_qfi_separable_single_photons(16, 4) == pytest.approx(4.8, abs=1e-12)

    @pytest.mark.parametrize("m,n", [(4, 2), (6, 3), (8, 4), (16, 4), (30, 7)])
    def test_closed_formula(self, m, n):
        want = n + n * (n - 1) / (m - 1)
        assert qfi.avg_qfi_separable_single_photons(m, n) == pytest.approx(want, abs=1e-12)

    def test_overfull_rejected(self):
        with pytest.raises(DomainError):
            qfi.avg_qfi_separable_single_photons(4, 5)


class TestPermutationAverage:
    @pytest.mark.parametrize("kind", ["sep", "uni"])
    def test_two_photon_class(self, kind):
        assert qfi.average_qfi_exact(kind, occ("1100")) == pytest.approx(8 / 3, abs=1e-12)

    def test_multiphoton_class_matches_symmetric(self):
        state = occ("211000")
        want = qfi.qfi_symmetric(state)
        assert qfi.average_qfi_exact("sep", state) == pytest.approx(want, abs=1e-12)
        assert qfi.average_qfi_exact("uni", state) == pytest.approx(want, abs=1e-12)

    @pytest.mark.parametrize("dense", [
        [1, 1, 0, 0], [1, 1, 1, 1, 0, 0, 0, 0], [2, 2, 0, 0, 0, 0],
        [3, 1, 0, 0], [2, 1, 1, 0, 0, 0, 0, 0],
    ])
    def test_average_equality_sweep(self, dense):
        state = OccupationVector.from_dense(dense)
        want = qfi.qfi_symmetric(state)
        for kind in ("sep", "uni"):
            assert qfi.average_qfi_exact(kind, state) == pytest.approx(want, abs=1e-12)

    def test_size_guard(self):
        big = OccupationVector(12, {0: 2, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1})
        with pytest.raises(TooLarge):
            qfi.average_qfi_exact("sep", big)


class TestCosecant:
    def test_four_modes(self):
        assert qfi.cosecant_sum(4, 1) == pytest.approx(4.0, abs=1e-12)

    def test_two_modes(self):
        assert qfi.cosecant_sum(2, 1) == pytest.approx(1.0, abs=1e-12)

    def test_large(self):
        assert qfi.cosecant_sum(256, 7) == pytest.approx(16384.0, abs=1e-6)

    @pytest.mark.parametrize("m", [4, 8, 32, 128, 256])
    def test_independent_of_j(self, m):
        values = [qfi.cosecant_sum(m, j) for j in range(1, m // 2 + 1)]
        assert max(abs(v - m * m / 4) for v in values) < 1e-6 * m * m


class TestCrossover:
    def test_small_case_from_pairing(self):
        # oracle: the no-pair probability computed by enumeration
        q = float(brute_force_pair_probability(4, 2, 0))
        assert qfi.kadv(4, 2) == pytest.approx(math.log(0.5) / math.log(q), abs=1e-12)
        assert qfi.kadv(4, 2) == pytest.approx(1.7095, abs=1e-4)

    def test_monotone_in_modes(self):
        assert qfi.kadv(2**17, 40) > qfi.kadv(2**16, 40)

    def test_decreasing_in_photons(self):
        assert qfi.kadv(2**16, 50) < qfi.kadv(2**16, 40)

    def test_large_scale_finite(self):
        value = qfi.kadv(2**16, 40)
        assert math.isfinite(value) and value > 0

    def test_log_binomial_exact_vs_lgamma(self):
        # oracle: log of the exact integer binomial; the lgamma route carries
        # ~1e-11 absolute rounding from the large lgamma cancellation
        for m, n in [(40, 10), (2**16, 40), (2**18, 30), (100, 3)]:
            want = math.log(math.comb(m, n))
            assert qfi.log_binomial(m, n) == pytest.approx(want, abs=1e-8)


class TestRegionBound:
    def test_reference_points(self):
        assert qfi.region_bound(2**16, 40) == pytest.approx(131070 / 1560, abs=1e-12)
        assert math.floor(qfi.region_bound(2**16, 40)) == 84
        assert qfi.region_bound(2**18, 30) == pytest.approx(524286 / 870, abs=1e-9)
        assert qfi.region_bound(4, 2) == 3.0

    def test_too_few_photons(self):
        with pytest.raises(DomainError):
            qfi.region_bound(16, 1)


class TestUniformCoefficientRange:
    @pytest.mark.parametrize("m", [8, 16, 32, 64])
    def test_coefficients_bounded(self, m):
        coeffs = []
        for j in range(1, m // 2 + 1):
            for k in range(1, m // 2 + 1):
                coeffs.append(8 / (m**2 * math.sin(math.pi * (2 * k - 2 * j + 1) / m) ** 2))
        assert min(coeffs) > 8 / m**2 - 1e-15
        # slack covers sin(pi/m) < pi/m at moderate m
        assert max(coeffs) < (8 / math.pi**2) * 1.06


occupations = st.integers(2, 4).flatmap(
    lambda half: st.lists(st.integers(0, 3), min_size=2 * half, max_size=2 * half))


class TestProperties:
    @given(occupations)
    @settings(max_examples=200, deadline=None)
    def test_shot_noise_floor(self, dense):
        state = OccupationVector.from_dense(dense)
        n = state.total
        assert qfi.qfi_separable(state) >= n - 1e-12
        assert qfi.qfi_uniform(state) >= n - 1e-12
        assert qfi.qfi_symmetric(state) >= n - 1e-12

    @given(occupations)
    @settings(max_examples=100, deadline=None)
    def test_equality_conditions(self, dense):
        state = OccupationVector.from_dense(dense)
        n = state.total
        pairs_filled = any(
            state.count(2 * j) and state.count(2 * j + 1)
            for j in range(state.modes // 2))
        assert (qfi.qfi_separable(state) == n) == (not pairs_filled)
        occupied = state.occupied()
        one_mode = len(occupied) <= 1
        assert (abs(qfi.qfi_symmetric(state) - n) < 1e-12) == one_mode
        parities = {mode % 2 for mode in occupied}
        assert (abs(qfi.qfi_uniform(state) - n) < 1e-12) == (len(parities) <= 1)

    @given(occupations, st.randoms(use_true_random=False))
    @settings(max_examples=100, deadline=None)
    def test_symmetric_permutation_invariance(self, dense, rnd):
        state = OccupationVector.from_dense(dense)
        perm = list(range(state.modes))
        rnd.shuffle(perm)
        assert qfi.qfi_symmetric(state.permuted(perm)) == qfi.qfi_symmetric(state)
