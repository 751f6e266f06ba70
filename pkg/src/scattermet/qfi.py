"""Closed-form quantum Fisher information for the three interferometer families,
with the scattershot pairing combinatorics and the sample-size crossover."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import DomainError, OddModeCount, TooLarge
from .networks import NetworkKind, parse_kind
from .occupations import OccupationVector

# Enumeration guards for the exact permutation average.
MAX_FACTORIAL_MODES = 10
MAX_CONFIGURATIONS = 10**6


def separable_excess(occ: OccupationVector) -> float:
    """2 sum_j n_{2j-1} n_{2j}: nonzero only when an MZI pair is doubly fed."""
    if occ.modes % 2:
        raise OddModeCount(f"separable stack needs an even mode count, got {occ.modes}")
    counts = occ._counts  # read-only fast path
    excess = 0
    for mode, c in counts.items():
        if mode % 2 == 0:
            excess += 2 * c * counts.get(mode + 1, 0)
    return float(excess)


def uniform_excess(occ: OccupationVector) -> float:
    """(8/m^2) sum over odd-even port pairs of n_o n_e / sin^2(pi (e-o)/m)."""
    m = occ.modes
    if m % 2:
        raise OddModeCount(f"uniform interferometer needs an even mode count, got {m}")
    odd_ports = [(j, c) for j, c in occ.items() if j % 2 == 0]   # 0-based even = odd port
    even_ports = [(k, c) for k, c in occ.items() if k % 2 == 1]
    excess = 0.0
    for j, cj in odd_ports:
        for k, ck in even_ports:
            excess += cj * ck / math.sin(math.pi * (k - j) / m) ** 2
    return (8.0 / m**2) * excess


def symmetric_excess(occ: OccupationVector) -> float:
    """[n^2 - sum n_j^2]/(m-1); permutation invariant by construction."""
    if occ.modes < 2:
        raise DomainError("symmetric QFI needs at least two modes")
    n = occ.total
    sq = sum(c * c for c in occ._counts.values())
    return (n * n - sq) / (occ.modes - 1)


def qfi_separable(occ: OccupationVector) -> float:
    """Separable-stack QFI n + 2 sum_j n_{2j-1} n_{2j}."""
    return occ.total + separable_excess(occ)


def qfi_uniform(occ: OccupationVector) -> float:
    """QFT-interferometer QFI; excess needs photons in both port parities."""
    return occ.total + uniform_excess(occ)


def qfi_symmetric(occ: OccupationVector) -> float:
    """Symmetric-network QFI n + [n^2 - sum n_j^2]/(m-1)."""
    return occ.total + symmetric_excess(occ)


def family_qfi(kind: NetworkKind | str, occ: OccupationVector) -> float:
    kind = parse_kind(kind)
    if kind in (NetworkKind.MZI, NetworkKind.SEPARABLE):
        return qfi_separable(occ)
    if kind is NetworkKind.UNIFORM:
        return qfi_uniform(occ)
    return qfi_symmetric(occ)


# ---------------------------------------------------------------------------
# Single-photon pairing combinatorics
# ---------------------------------------------------------------------------

def pair_count_weight(m: int, n: int, x: int) -> int:
    """Number of n-photon single-photon placements with exactly x filled MZI pairs."""
    if m % 2:
        raise OddModeCount(f"pairing combinatorics need an even mode count, got {m}")
    if not (0 <= n <= m) or not (0 <= 2 * x <= n):
        raise DomainError(f"invalid (m={m}, n={n}, x={x})")
    half = m // 2
    if x > half or n - 2 * x > half - x:
        return 0
    return math.comb(half, x) * math.comb(half - x, n - 2 * x) * 2 ** (n - 2 * x)


def pair_probability(m: int, n: int, x: int) -> float:
    """Probability that x of n uniformly placed single photons land as MZI pairs."""
    weight = pair_count_weight(m, n, x)
    return float(Fraction(weight, math.comb(m, n)))


def pair_probability_exact(m: int, n: int, x: int) -> Fraction:
    return Fraction(pair_count_weight(m, n, x), math.comb(m, n))


def avg_qfi_separable_single_photons(m: int, n: int) -> float:
    """Expected separable QFI over uniform single-photon placements.

    Computed as sum_x (n + 2x) P(x) in exact rationals; equals n + n(n-1)/(m-1).
    """
    if n > m:
        raise DomainError(f"cannot place {n} single photons in {m} modes")
    total = Fraction(0)
    for x in range(n // 2 + 1):
        total += (n + 2 * x) * pair_probability_exact(m, n, x)
    return float(total)


# ---------------------------------------------------------------------------
# Exact permutation averages
# ---------------------------------------------------------------------------

def _multiset_permutations(values: list[int]) -> Iterator[tuple[int, ...]]:
    """Distinct permutations of a multiset in lexicographic order (Knuth 7.2.1.2 L)."""
    seq = sorted(values)
    n = len(seq)
    while True:
        yield tuple(seq)
        j = n - 2
        while j >= 0 and seq[j] >= seq[j + 1]:
            j -= 1
        if j < 0:
            return
        k = n - 1
        while seq[j] >= seq[k]:
            k -= 1
        seq[j], seq[k] = seq[k], seq[j]
        seq[j + 1:] = reversed(seq[j + 1:])


def average_qfi_exact(kind: NetworkKind | str, occ: OccupationVector) -> float:
    """Mean closed-form QFI over all distinct mode arrangements of the multiset.

    Every arrangement corresponds to the same number of the m! raw permutations,
    so the uniform average over distinct arrangements equals the full average.
    """
    kind = parse_kind(kind)
    m = occ.modes
    if occ.is_single_photon():
        n = occ.total
        if math.comb(m, n) > MAX_CONFIGURATIONS:
            raise TooLarge(
                f"C({m},{n}) single-photon placements exceed {MAX_CONFIGURATIONS}"
            )
        total = 0.0
        count = 0
        for positions in itertools.combinations(range(m), n):
            arrangement = OccupationVector(m, {p: 1 for p in positions})
            total += family_qfi(kind, arrangement)
            count += 1
        return total / count
    if m > MAX_FACTORIAL_MODES:
        raise TooLarge(
            f"factorial enumeration capped at {MAX_FACTORIAL_MODES} modes, got {m}"
        )
    dense = [occ.count(i) for i in range(m)]
    total = 0.0
    count = 0
    for arrangement in _multiset_permutations(dense):
        total += family_qfi(kind, OccupationVector.from_dense(arrangement))
        count += 1
    return total / count


# ---------------------------------------------------------------------------
# Cosecant identity and crossover formulas
# ---------------------------------------------------------------------------

def cosecant_sum(m: int, j: int) -> float:
    """sum_{k=1..m/2} csc^2(pi (2k - 2j + 1)/m); equals m^2/4 for every j."""
    if m % 2:
        raise OddModeCount(f"cosecant sum defined for even m, got {m}")
    if not 1 <= j <= m // 2:
        raise DomainError(f"j must lie in [1, {m // 2}], got {j}")
    k = np.arange(1, m // 2 + 1)
    return float(np.sum(1.0 / np.sin(np.pi * (2 * k - 2 * j + 1) / m) ** 2))


def log_binomial(m: int, n: int) -> float:
    """log C(m, n): exact integer arithmetic below 1e15, log-gamma beyond."""
    if not 0 <= n <= m:
        raise DomainError(f"binomial C({m},{n}) undefined")
    if min(n, m - n) <= 64:
        value = math.comb(m, n)
        if value < 10**15:
            return math.log(value)
    return math.lgamma(m + 1) - math.lgamma(n + 1) - math.lgamma(m - n + 1)


def log_no_pair_probability(m: int, n_avg: int) -> float:
    """log P(x=0) for one sample of n_avg single photons: log[C(m/2,n) 2^n / C(m,n)]."""
    if m % 2:
        raise OddModeCount(f"even mode count required, got {m}")
    if not 0 <= n_avg <= m // 2:
        raise DomainError(f"n_avg must lie in [0, m/2], got {n_avg}")
    return n_avg * math.log(2) + log_binomial(m // 2, n_avg) - log_binomial(m, n_avg)


def kadv(m: int, n_avg: int) -> float:
    """Sample count where the symmetric network's head start is coin-flip likely
    to survive: log(0.5) / log[2^n C(m/2,n) / C(m,n)]."""
    log_q = log_no_pair_probability(m, n_avg)
    if log_q >= 0.0:
        raise DomainError(f"degenerate no-pair probability at (m={m}, n={n_avg})")
    return math.log(0.5) / log_q


def region_bound(m: int, n_avg: int) -> float:
    """Real upper edge 2(m-1)/(n(n-1)) of the one-pair-suffices sample range."""
    if n_avg < 2:
        raise DomainError(f"region bound needs n_avg >= 2, got {n_avg}")
    return 2.0 * (m - 1) / (n_avg * (n_avg - 1))
