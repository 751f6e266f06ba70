"""Scattershot source: an array of heralded two-mode squeezers.

Each mode emits n photons with probability (1 - chi^2) chi^(2n), independently.
Sampling is done sparsely (occupied-mode count first, then per-mode surplus),
which is distribution-identical to the dense per-mode draw but stays cheap at
2^18 modes.

Randomness: NumPy PCG64 generators seeded through SeedSequence. Walker streams
derive from SeedSequence((master_seed, walker_index)), so parallel ensembles
never share state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import AcceptanceTooLow, DomainError
from .occupations import OccupationVector

# Below this mode count the dense per-mode draw is just as fast.
SPARSE_THRESHOLD = 1024
POSTSELECT_ATTEMPT_CAP = 10**6


@dataclass(frozen=True)
class SqueezerSource:
    """m identical squeezers with strength chi; optionally single-photon postselected."""

    modes: int
    chi: float
    postselect_single: bool = False

    def __post_init__(self):
        if not 0.0 <= self.chi < 1.0:
            raise DomainError(f"squeezing must satisfy 0 <= chi < 1, got {self.chi}")
        if self.modes < 1:
            raise DomainError(f"mode count must be positive, got {self.modes}")

    @property
    def mean_photons_per_mode(self) -> float:
        return self.chi**2 / (1.0 - self.chi**2)

    @property
    def mean_total_photons(self) -> float:
        return self.modes * self.mean_photons_per_mode


def chi_for_mean_photons(m: int, n_avg: float) -> float:
    """Squeezing that makes the m-mode source emit n_avg photons on average.

    Inverts m chi^2/(1 - chi^2) = n_avg, i.e. chi = sqrt(n_avg/(m + n_avg)).
    """
    if n_avg < 0:
        raise DomainError(f"mean photon number must be nonnegative, got {n_avg}")
    return math.sqrt(n_avg / (m + n_avg))


def _rng_of(seed_or_rng) -> np.random.Generator:
    return np.random.default_rng(seed_or_rng)


def derive_walker_rng(master_seed: int, walker_index: int) -> np.random.Generator:
    """Independent per-walker stream: PCG64 over SeedSequence((master, index))."""
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence((master_seed, walker_index))))


def _distinct_indices(rng: np.random.Generator, m: int, k: int) -> np.ndarray:
    """k distinct uniform mode indices, sorted; rejection redraw keeps it O(k)."""
    if k == 0:
        return np.empty(0, dtype=np.int64)
    if 2 * k >= m:
        return np.sort(rng.choice(m, size=k, replace=False))
    picked = rng.integers(0, m, size=k)
    seen = set()
    out = []
    for idx in picked:
        while idx in seen:
            idx = int(rng.integers(0, m))
        seen.add(int(idx))
        out.append(int(idx))
    return np.sort(np.asarray(out, dtype=np.int64))


def sample(source: SqueezerSource, rng_seed, method: str = "auto") -> OccupationVector:
    """One scattershot emission.

    Sparse path: K ~ Binomial(m, chi^2) occupied modes, K distinct indices
    uniformly, each occupied mode 1 + geometric surplus. Identical in law to
    drawing every mode from the squeezer distribution directly.
    """
    rng = _rng_of(rng_seed)
    m, chi2 = source.modes, source.chi**2
    if chi2 == 0.0:
        return OccupationVector(m, {})
    if method == "auto":
        method = "sparse" if m > SPARSE_THRESHOLD else "dense"
    if method == "dense":
        counts = rng.geometric(1.0 - chi2, size=m) - 1
        return OccupationVector(m, {int(i): int(c) for i, c in enumerate(counts) if c})
    if method != "sparse":
        raise DomainError(f"unknown sampling method {method!r}")
    k = int(rng.binomial(m, chi2))
    if k == 0:
        return OccupationVector(m, {})
    modes = _distinct_indices(rng, m, k)
    counts = rng.geometric(1.0 - chi2, size=k)
    return OccupationVector(m, {int(i): int(c) for i, c in zip(modes, counts)})


def sample_postselected_single(source: SqueezerSource, rng_seed,
                               method: str = "auto",
                               max_attempts: int = POSTSELECT_ATTEMPT_CAP,
                               counter: dict | None = None) -> OccupationVector:
    """Rejection-sample until every mode holds at most one photon.

    Raises AcceptanceTooLow once max_attempts emissions were all rejected;
    pass a counter dict to accumulate attempts/accepted statistics.
    """
    rng = _rng_of(rng_seed)
    for attempt in range(1, max_attempts + 1):
        occ = sample(source, rng, method=method)
        if all(c <= 1 for c in occ.counts.values()):
            if counter is not None:
                counter["attempts"] = counter.get("attempts", 0) + attempt
                counter["accepted"] = counter.get("accepted", 0) + 1
            return occ
    raise AcceptanceTooLow(
        f"no single-photon sample in {max_attempts} attempts at chi = {source.chi}"
    )


def single_photon_acceptance(source: SqueezerSource) -> float:
    """Exact probability that an emission has every mode count <= 1:
    [(1 - chi^2)(1 + chi^2)]^m."""
    chi2 = source.chi**2
    return ((1.0 - chi2) * (1.0 + chi2)) ** source.modes


def total_photon_pmf(m: int, chi: float, n: int) -> float:
    """P(total photons = n): negative binomial C(n+m-1, n) chi^(2n) (1-chi^2)^m."""
    if n < 0:
        return 0.0
    if chi == 0.0:
        return 1.0 if n == 0 else 0.0
    log_p = (
        math.lgamma(n + m) - math.lgamma(n + 1) - math.lgamma(m)
        + 2 * n * math.log(chi) + m * math.log1p(-chi**2)
    )
    return math.exp(log_p)


def total_photon_pmf_exact(m: int, chi: Fraction, n: int) -> Fraction:
    """Rational-arithmetic pmf for small cross-checks."""
    chi2 = chi * chi
    return math.comb(n + m - 1, n) * chi2**n * (1 - chi2) ** m


@dataclass
class SampleStats:
    """Histogram of total photon number over an ensemble of emissions."""

    histogram: dict[int, int]
    samples: int

    @classmethod
    def collect(cls, totals: Iterable[int]) -> "SampleStats":
        hist: dict[int, int] = {}
        count = 0
        for n in totals:
            hist[n] = hist.get(n, 0) + 1
            count += 1
        return cls(histogram=dict(sorted(hist.items())), samples=count)

    @property
    def mean_n(self) -> float:
        if not self.samples:
            return 0.0
        return sum(n * c for n, c in self.histogram.items()) / self.samples

    SCHEMA = "scattermet.photon_hist.v1"

    def to_csv(self, m: int, chi: float) -> str:
        lines = [f"# schema={self.SCHEMA}", "n,count,pmf_analytic"]
        for n, c in self.histogram.items():
            lines.append(f"{n},{c},{total_photon_pmf(m, chi, n):.17g}")
        return "\n".join(lines) + "\n"
