"""Walker ensembles: per-sample differences, determinism, analytic overlays."""

import math

import numpy as np
import pytest

from scattermet import qfi, walkers
from scattermet.errors import DomainError, TooLarge
from scattermet.occupations import OccupationVector


def occ(text: str) -> OccupationVector:
    return OccupationVector.from_dense(int(ch) for ch in text)


class TestDeltaF:
    def test_paired_input(self):
        assert walkers.delta_f(occ("1100"), "sep_vs_sym") == pytest.approx(4 / 3)

    def test_split_input(self):
        assert walkers.delta_f(occ("1010"), "sep_vs_sym") == pytest.approx(-2 / 3)

    def test_uniform_pair(self):
        assert walkers.delta_f(occ("1001"), "uni_vs_sym") == pytest.approx(1 / 3)

    def test_matches_full_qfi_difference(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            dense = rng.integers(0, 3, size=8)
            state = OccupationVector.from_dense(dense.tolist())
            want = qfi.qfi_separable(state) - qfi.qfi_symmetric(state)
            assert walkers.delta_f(state, "sep_vs_sym") == pytest.approx(want, abs=1e-9)
            want = qfi.qfi_uniform(state) - qfi.qfi_symmetric(state)
            assert walkers.delta_f(state, "uni_vs_sym") == pytest.approx(want, abs=1e-9)

    def test_unknown_pair(self):
        with pytest.raises(DomainError):
            walkers.delta_f(occ("1100"), "sep_vs_uni")


class TestAnalyticAdvantage:
    def test_zero_samples(self):
        assert walkers.advantage_probability_analytic(4, 2, 0) == 0.0

    def test_one_sample_small_case(self):
        assert walkers.advantage_probability_analytic(4, 2, 1) == pytest.approx(1 / 3)

    def test_half_at_kadv(self):
        for m, n in [(4, 2), (2**12, 12), (2**16, 40)]:
            k = qfi.kadv(m, n)
            assert walkers.advantage_probability_analytic(m, n, k) == pytest.approx(
                0.5, abs=1e-12)

    def test_vectorised(self):
        ks = np.arange(0, 5)
        values = walkers.advantage_probability_analytic(4, 2, ks)
        assert values.shape == (5,)
        assert np.all(np.diff(values) > 0)


class TestRegions:
    def test_reference_edges(self):
        assert walkers.region_label(2**16, 40, 84) == 1
        assert walkers.region_label(2**16, 40, 85) == 2
        assert walkers.region_label(4, 2, 1) == 1
        assert walkers.first_region_edge(2**16, 40) == 84
        assert walkers.first_region_edge(2**18, 30) == 603

    def test_large_system_strict_formula(self):
        # the real bound is 602.63, so by the strict floor formula k = 603
        # already needs two enhanced events; the reported integer edge rounds
        assert walkers.region_label(2**18, 30, 602) == 1
        assert walkers.region_label(2**18, 30, 603) == 2

    def test_monotone_in_k(self):
        labels = [walkers.region_label(64, 4, k) for k in range(0, 60)]
        assert labels == sorted(labels)

    def test_needs_two_photons(self):
        with pytest.raises(DomainError):
            walkers.region_label(16, 1, 3)


def desk_config(**overrides):
    base = dict(modes=64, chi=0.15, walkers=60, samples_per_walker=40,
                master_seed=42)
    base.update(overrides)
    return walkers.WalkerConfig(**base)


class TestEnsemble:
    def test_vacuum_source_never_advances(self):
        summary = walkers.run_ensemble(desk_config(chi=0.0, walkers=20))
        assert np.all(summary.p_advantage == 0.0)
        assert summary.mean_delta_f == 0.0

    def test_determinism_byte_for_byte(self):
        a = walkers.run_ensemble(desk_config()).summary_csv()
        b = walkers.run_ensemble(desk_config()).summary_csv()
        assert a == b

    def test_parallel_merge_matches_serial(self):
        serial = walkers.run_ensemble(desk_config(), workers=1)
        parallel = walkers.run_ensemble(desk_config(), workers=3)
        assert serial.summary_csv() == parallel.summary_csv()

    def test_traces_partial_sums(self):
        summary = walkers.run_ensemble(desk_config(walkers=10, keep_traces=True))
        for rec in summary.traces:
            assert np.array_equal(np.cumsum(rec.increments), rec.totals)
        text = summary.traces_csv()
        assert text.startswith("# schema=scattermet.walk_traces.v1\n")
        # header + walkers * kmax rows
        assert len(text.strip().splitlines()) == 2 + 10 * 40

    def test_summary_shape_and_quantile_order(self):
        summary = walkers.run_ensemble(desk_config())
        assert summary.ks[-1] == 40
        q = summary.quantiles
        stacked = np.stack([q[5], q[25], q[50], q[75], q[95]])
        assert np.all(np.diff(stacked, axis=0) >= 0)

    def test_zero_mean_drift(self):
        # permutation-average equality makes the per-sample difference mean-free
        summary = walkers.run_ensemble(desk_config(
            modes=64, chi=0.2, walkers=150, samples_per_walker=150))
        assert abs(summary.mean_delta_f) < 5 * summary.se_delta_f

    def test_resource_guard(self):
        with pytest.raises(TooLarge):
            walkers.run_ensemble(desk_config(walkers=10**6, samples_per_walker=10**3))

    def test_postselected_crossing_tracks_analytic(self):
        m, navg = 1024, 12
        config = walkers.WalkerConfig(
            modes=m, n_avg=navg, walkers=500,
            samples_per_walker=30, master_seed=11, postselect_single=True)
        summary = walkers.run_ensemble(config)
        assert summary.analytic_kadv == pytest.approx(qfi.kadv(m, navg))
        assert summary.empirical_kadv is not None
        # photon-number fluctuations bias the crossing a little low; a quarter
        # is generous at this small scale
        assert abs(summary.empirical_kadv - summary.analytic_kadv) < 0.25 * summary.analytic_kadv
        from scattermet.sources import single_photon_acceptance
        assert summary.acceptance_rate == pytest.approx(
            single_photon_acceptance(config.source()), abs=0.03)

    def test_uni_pair_runs(self):
        config = walkers.WalkerConfig(modes=32, chi=0.2, pair="uni_vs_sym",
                                      walkers=30, samples_per_walker=20, master_seed=5)
        summary = walkers.run_ensemble(config)
        assert summary.analytic_p is None
        assert summary.p_advantage.shape == (20,)

    def test_summary_csv_schema(self):
        text = walkers.run_ensemble(desk_config(walkers=10)).summary_csv()
        lines = text.strip().splitlines()
        assert lines[0] == "# schema=scattermet.walk_summary.v1"
        assert lines[1] == "k,p_advantage,q05,q25,q50,q75,q95,analytic_p,region"
        assert len(lines) == 2 + 40


class TestConfigValidation:
    def test_missing_strength(self):
        with pytest.raises(DomainError):
            walkers.WalkerConfig(modes=16, walkers=5, samples_per_walker=5)

    def test_bad_pair(self):
        with pytest.raises(DomainError):
            walkers.WalkerConfig(modes=16, chi=0.1, pair="sym_vs_sym")

    def test_symmetric_size_constraint(self):
        with pytest.raises(Exception):
            walkers.WalkerConfig(modes=12, chi=0.1)

    def test_chi_navg_resolution(self):
        config = walkers.WalkerConfig(modes=64, n_avg=4, walkers=1, samples_per_walker=1)
        assert config.resolved_chi == pytest.approx(math.sqrt(4 / 68))
        config = walkers.WalkerConfig(modes=64, chi=0.2, walkers=1, samples_per_walker=1)
        assert config.resolved_n_avg == pytest.approx(64 * 0.04 / 0.96)


class TestHelpers:
    def test_empirical_crossing_interpolates(self):
        ks = np.arange(1, 6)
        p = np.array([0.1, 0.3, 0.45, 0.55, 0.9])
        assert walkers.empirical_crossing(ks, p) == pytest.approx(3.5)

    def test_empirical_crossing_none(self):
        assert walkers.empirical_crossing(np.arange(1, 4), np.array([0.1, 0.2, 0.3])) is None

    def test_total_variation(self):
        assert walkers.total_variation([0.0, 0.5, 0.25]) == pytest.approx(0.75)
