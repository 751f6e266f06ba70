"""Monte Carlo walker ensembles comparing interferometer families sample by sample.

Each walker draws scattershot emissions and accumulates the Fisher-information
difference between two families; the ensemble summary tracks, per sample count
k, the probability that the comparator family has pulled ahead, together with
quantile bands of the running totals.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, TooLarge
from .networks import NetworkKind, validate_modes
from .occupations import OccupationVector
from .qfi import (
    kadv,
    log_no_pair_probability,
    region_bound,
    separable_excess,
    symmetric_excess,
    uniform_excess,
)
from .sources import (
    SampleStats,
    SqueezerSource,
    chi_for_mean_photons,
    derive_walker_rng,
    sample,
    sample_postselected_single,
)

PAIRS = ("sep_vs_sym", "uni_vs_sym")
QUANTILE_LEVELS = (5, 25, 50, 75, 95)
MAX_TOTAL_STEPS = 5 * 10**7


def delta_f(occ: OccupationVector, pair: str = "sep_vs_sym") -> float:
    """Per-sample QFI difference; the shot-noise term n cancels exactly."""
    if pair == "sep_vs_sym":
        return separable_excess(occ) - symmetric_excess(occ)
    if pair == "uni_vs_sym":
        return uniform_excess(occ) - symmetric_excess(occ)
    raise DomainError(f"unknown pair {pair!r}; expected one of {PAIRS}")


def advantage_probability_analytic(m: int, n_avg: int, k: int | np.ndarray):
    """1 - [C(m/2,n) 2^n / C(m,n)]^k: chance that at least one sample paired up.

    Models every sample as carrying exactly n_avg single photons; equals 0.5
    at k = kadv(m, n_avg) by construction.
    """
    log_q = log_no_pair_probability(m, n_avg)
    return 1.0 - np.exp(np.asarray(k, dtype=float) * log_q)


def region_label(m: int, n_avg: int, k: int) -> int:
    """Minimal pair surplus x that puts the separable total ahead after k samples:
    floor[k n(n-1) / (2(m-1))] + 1."""
    if n_avg < 2:
        raise DomainError(f"region label needs n_avg >= 2, got {n_avg}")
    if k < 0:
        raise DomainError(f"sample count must be nonnegative, got {k}")
    return int(k * n_avg * (n_avg - 1) // (2 * (m - 1))) + 1


def first_region_edge(m: int, n_avg: int) -> int:
    """Integer edge of the one-pair region as reported in summaries: the real
    bound 2(m-1)/(n(n-1)) rounded to the nearest sample count."""
    return round(region_bound(m, n_avg))


@dataclass(frozen=True)
class WalkerConfig:
    """Ensemble parameters; give either chi or n_avg (n_avg wins calibration)."""

    modes: int
    pair: str = "sep_vs_sym"
    chi: float | None = None
    n_avg: float | None = None
    walkers: int = 2000
    samples_per_walker: int = 100
    master_seed: int = 0
    postselect_single: bool = False
    keep_traces: bool = False

    def __post_init__(self):
        if self.pair not in PAIRS:
            raise DomainError(f"unknown pair {self.pair!r}")
        validate_modes(NetworkKind.SYMMETRIC, self.modes)
        if self.pair == "sep_vs_sym":
            validate_modes(NetworkKind.SEPARABLE, self.modes)
        else:
            validate_modes(NetworkKind.UNIFORM, self.modes)
        if self.chi is None and self.n_avg is None:
            raise DomainError("need chi or n_avg")
        if self.walkers < 1 or self.samples_per_walker < 1:
            raise DomainError("walkers and samples_per_walker must be >= 1")

    @property
    def resolved_chi(self) -> float:
        if self.n_avg is not None:
            return chi_for_mean_photons(self.modes, self.n_avg)
        return float(self.chi)

    @property
    def resolved_n_avg(self) -> float:
        if self.n_avg is not None:
            return float(self.n_avg)
        chi2 = float(self.chi) ** 2
        return self.modes * chi2 / (1.0 - chi2)

    def source(self) -> SqueezerSource:
        return SqueezerSource(self.modes, self.resolved_chi,
                              postselect_single=self.postselect_single)


@dataclass
class WalkerRecord:
    """Full trace of a single walker."""

    walker_id: int
    increments: np.ndarray
    totals: np.ndarray


@dataclass
class EnsembleSummary:
    """Per-k statistics over the walker ensemble."""

    config: WalkerConfig
    ks: np.ndarray
    p_advantage: np.ndarray
    quantiles: dict[int, np.ndarray]
    photon_stats: SampleStats
    mean_delta_f: float
    se_delta_f: float
    acceptance_rate: float | None = None
    analytic_p: np.ndarray | None = None
    analytic_kadv: float | None = None
    empirical_kadv: float | None = None
    region_labels: np.ndarray | None = None
    traces: list[WalkerRecord] | None = field(default=None, repr=False)

    SCHEMA_SUMMARY = "scattermet.walk_summary.v1"
    SCHEMA_TRACES = "scattermet.walk_traces.v1"

    def summary_csv(self) -> str:
        lines = [
            f"# schema={self.SCHEMA_SUMMARY}",
            "k,p_advantage,q05,q25,q50,q75,q95,analytic_p,region",
        ]
        for i, k in enumerate(self.ks):
            qs = ",".join(f"{self.quantiles[q][i]:.17g}" for q in QUANTILE_LEVELS)
            ana = "" if self.analytic_p is None else f"{self.analytic_p[i]:.17g}"
            reg = "" if self.region_labels is None else str(int(self.region_labels[i]))
            lines.append(f"{int(k)},{self.p_advantage[i]:.17g},{qs},{ana},{reg}")
        return "\n".join(lines) + "\n"

    def traces_csv(self) -> str:
        if self.traces is None:
            raise DomainError("ensemble was run without keep_traces")
        lines = [f"# schema={self.SCHEMA_TRACES}", "walker_id,k,delta_f,delta_f_tot"]
        for rec in self.traces:
            for i, k in enumerate(self.ks):
                lines.append(
                    f"{rec.walker_id},{int(k)},{rec.increments[i]:.17g},{rec.totals[i]:.17g}"
                )
        return "\n".join(lines) + "\n"


def _walker_block(config: WalkerConfig, start: int, stop: int):
    """Run walkers [start, stop); returns their increment matrix and photon totals."""
    kmax = config.samples_per_walker
    source = config.source()
    increments = np.empty((stop - start, kmax))
    photon_counts: dict[int, int] = {}
    attempts = 0
    for row, w in enumerate(range(start, stop)):
        rng = derive_walker_rng(config.master_seed, w)
        for step in range(kmax):
            if config.postselect_single:
                counter: dict = {}
                occ = sample_postselected_single(source, rng, counter=counter)
                attempts += counter["attempts"]
            else:
                occ = sample(source, rng)
            increments[row, step] = delta_f(occ, config.pair)
            photon_counts[occ.total] = photon_counts.get(occ.total, 0) + 1
    return increments, photon_counts, attempts


def _merge_counts(parts: list[dict[int, int]]) -> dict[int, int]:
    merged: dict[int, int] = {}
    for part in parts:
        for n, c in part.items():
            merged[n] = merged.get(n, 0) + c
    return dict(sorted(merged.items()))


def worker_count() -> int:
    """Honour the SCATTERSHOT_THREADS cap; default is single-threaded."""
    raw = os.environ.get("SCATTERSHOT_THREADS", "1")
    try:
        return max(1, min(int(raw), os.cpu_count() or 1))
    except ValueError:
        return 1


def run_ensemble(config: WalkerConfig, workers: int | None = None) -> EnsembleSummary:
    """Run the full ensemble deterministically.

    Walker w always uses the stream derived from (master_seed, w), so the
    result is identical for any worker count; blocks merge in walker order.
    """
    total_steps = config.walkers * config.samples_per_walker
    if total_steps > MAX_TOTAL_STEPS:
        raise TooLarge(
            f"walkers * samples_per_walker = {total_steps} exceeds {MAX_TOTAL_STEPS}; "
            "shrink the ensemble or raise the guard explicitly"
        )
    if workers is None:
        workers = worker_count()
    workers = max(1, min(workers, config.walkers))

    if workers == 1:
        blocks = [_walker_block(config, 0, config.walkers)]
    else:
        bounds = np.linspace(0, config.walkers, workers + 1, dtype=int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_walker_block, config, int(a), int(b))
                for a, b in zip(bounds[:-1], bounds[1:])
                if b > a
            ]
            blocks = [f.result() for f in futures]

    increments = np.vstack([b[0] for b in blocks])
    photon_hist = _merge_counts([b[1] for b in blocks])
    attempts = sum(b[2] for b in blocks)

    totals = np.cumsum(increments, axis=1)
    ks = np.arange(1, config.samples_per_walker + 1)
    p_adv = (totals > 0).mean(axis=0)
    qs = np.percentile(totals, QUANTILE_LEVELS, axis=0, method="linear")
    quantiles = {lvl: qs[i] for i, lvl in enumerate(QUANTILE_LEVELS)}

    stats = SampleStats(histogram=photon_hist, samples=total_steps)
    mean_df = float(increments.mean())
    se_df = float(increments.std(ddof=1) / math.sqrt(increments.size))

    summary = EnsembleSummary(
        config=config,
        ks=ks,
        p_advantage=p_adv,
        quantiles=quantiles,
        photon_stats=stats,
        mean_delta_f=mean_df,
        se_delta_f=se_df,
    )
    if config.postselect_single:
        summary.acceptance_rate = total_steps / attempts if attempts else None

    n_round = round(config.resolved_n_avg)
    if config.pair == "sep_vs_sym" and n_round >= 2:
        summary.analytic_p = np.asarray(advantage_probability_analytic(
            config.modes, n_round, ks))
        summary.analytic_kadv = kadv(config.modes, n_round)
        summary.region_labels = np.array(
            [region_label(config.modes, n_round, int(k)) for k in ks])
    summary.empirical_kadv = empirical_crossing(ks, p_adv)

    if config.keep_traces:
        summary.traces = [
            WalkerRecord(w, increments[w].copy(), totals[w].copy())
            for w in range(config.walkers)
        ]
    return summary


def empirical_crossing(ks: np.ndarray, p: np.ndarray) -> float | None:
    """First upward 0.5-crossing of the advantage curve, linearly interpolated."""
    for i, value in enumerate(p):
        if value >= 0.5:
            if i == 0:
                return float(ks[0])
            k0, k1 = float(ks[i - 1]), float(ks[i])
            p0, p1 = float(p[i - 1]), float(p[i])
            if p1 == p0:
                return k1
            return k0 + (k1 - k0) * (0.5 - p0) / (p1 - p0)
    return None


def total_variation(p: np.ndarray) -> float:
    """Sum of |p(k+1) - p(k)|; measures how strongly a curve oscillates."""
    p = np.asarray(p, dtype=float)
    return float(np.abs(np.diff(p)).sum())


def rerun_config(config: WalkerConfig, **overrides) -> WalkerConfig:
    return replace(config, **overrides)
