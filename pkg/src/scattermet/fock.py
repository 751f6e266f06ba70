"""Full Fock-space verification engine.

Everything here is deliberately independent of the closed forms in qfi.py:
outcome amplitudes go through matrix permanents, and the Fisher-information
oracle builds the second-quantized generator on an explicit number basis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, LimitPoint, NumericalError, TooLarge
from .networks import (
    NetworkKind,
    family_unitary,
    generator,
    parse_kind,
    symmetric_sign_pattern,
)
from .occupations import OccupationVector
from .qfi import family_qfi

MAX_PERMANENT_DIM = 24
MAX_TRANSITION_PHOTONS = 12
MAX_BASIS_STATES = 10**6

# Finite-difference protocol for Fisher curves: central step with one
# Richardson level, and a two-point quadratic pull to phi = 0 (the curves
# are even in phi, so two samples pin the parabola).
FD_STEP = 1e-4
LIMIT_PHIS = (1e-2, 5e-3)


# ---------------------------------------------------------------------------
# Permanents
# ---------------------------------------------------------------------------

def permanent(A: np.ndarray) -> complex:
    """Matrix permanent by Ryser's formula with Gray-code subset updates.

    O(2^n n); capped at n = 24 columns. The empty matrix has permanent 1.
    """
    A = np.asarray(A)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise DomainError(f"permanent needs a square matrix, got shape {A.shape}")
    if n > MAX_PERMANENT_DIM:
        raise TooLarge(f"permanent capped at {MAX_PERMANENT_DIM} columns, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    cols = A.T.astype(complex, copy=False)
    rowsum = np.zeros(n, dtype=complex)
    total = 0.0 + 0.0j
    gray = 0
    for k in range(1, 1 << n):
        new_gray = k ^ (k >> 1)
        j = (new_gray ^ gray).bit_length() - 1
        if new_gray & (1 << j):
            rowsum += cols[j]
        else:
            rowsum -= cols[j]
        gray = new_gray
        sign = -1.0 if (gray.bit_count() & 1) else 1.0
        total += sign * np.prod(rowsum)
    if n & 1:
        total = -total
    return complex(total)


def permanent_naive(A: np.ndarray) -> complex:
    """Permutation-sum permanent; brute-force oracle for small matrices."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if n > 9:
        raise TooLarge(f"naive permanent capped at 9 columns, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    rows = range(n)
    return complex(sum(
        math.prod(A[i, sigma[i]] for i in rows)
        for sigma in itertools.permutations(range(n))
    ))


# ---------------------------------------------------------------------------
# Fock basis
# ---------------------------------------------------------------------------

def _compositions(total: int, parts: int) -> int:
    """Number of ways to split `total` photons over `parts` ordered modes."""
    if parts == 0:
        return 1 if total == 0 else 0
    return math.comb(total + parts - 1, parts - 1)


class FockBasis:
    """All m-mode occupation tuples with fixed photon number, lexicographic.

    Ranking and unranking run in O(m + n) by counting compositions, so index
    lookup never scans the state list.
    """

    def __init__(self, modes: int, total: int):
        if modes < 1 or total < 0:
            raise DomainError(f"invalid Fock basis ({modes} modes, {total} photons)")
        size = _compositions(total, modes)
        if size > MAX_BASIS_STATES:
            raise TooLarge(f"Fock basis of {size} states exceeds {MAX_BASIS_STATES}")
        self.modes = modes
        self.total = total
        self.size = size

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        return (self.state(i) for i in range(self.size))

    def index(self, occ: OccupationVector | Sequence[int]) -> int:
        if isinstance(occ, OccupationVector):
            counts = tuple(occ.count(i) for i in range(occ.modes))
        else:
            counts = tuple(occ)
        if len(counts) != self.modes or sum(counts) != self.total:
            raise DomainError("occupation does not belong to this basis")
        rank = 0
        rem = self.total
        for pos, c in enumerate(counts):
            parts_after = self.modes - pos - 1
            for lower in range(c):
                rank += _compositions(rem - lower, parts_after)
            rem -= c
        return rank

    def state(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise DomainError(f"index {index} outside basis of {self.size} states")
        out = []
        rem = self.total
        for pos in range(self.modes):
            parts_after = self.modes - pos - 1
            for c in range(rem + 1):
                block = _compositions(rem - c, parts_after)
                if index < block:
                    out.append(c)
                    rem -= c
                    break
                index -= block
        return tuple(out)

    def occupation(self, index: int) -> OccupationVector:
        return OccupationVector.from_dense(self.state(index))


# ---------------------------------------------------------------------------
# Transition amplitudes and outcome distributions
# ---------------------------------------------------------------------------

def _repeat_indices(occ: OccupationVector) -> list[int]:
    out: list[int] = []
    for mode, c in occ.items():
        out.extend([mode] * c)
    return out


def transition_amplitude(U: np.ndarray, occ_in: OccupationVector,
                         occ_out: OccupationVector) -> complex:
    """<out| network |in> = Per(U_sub) / sqrt(prod n_j! prod m_k!).

    U_sub repeats column j of U n_j[in] times and row k m_k[out] times. For
    0/1 occupations with out = in this reduces to the permanent of the
    occupied-index submatrix.
    """
    if occ_in.total != occ_out.total:
        raise DomainError("photon number mismatch between input and output")
    n = occ_in.total
    if n > MAX_TRANSITION_PHOTONS:
        raise TooLarge(f"transition amplitudes capped at {MAX_TRANSITION_PHOTONS} photons")
    if n == 0:
        return 1.0 + 0.0j
    rows = _repeat_indices(occ_out)
    cols = _repeat_indices(occ_in)
    sub = np.asarray(U)[np.ix_(rows, cols)]
    norm = 1.0
    for c in itertools.chain(occ_in.counts.values(), occ_out.counts.values()):
        norm *= math.factorial(c)
    return permanent(sub) / math.sqrt(norm)


def outcome_distribution(U: np.ndarray, occ_in: OccupationVector) -> dict[OccupationVector, float]:
    """Probabilities |amplitude|^2 over the full fixed-n output basis."""
    basis = FockBasis(occ_in.modes, occ_in.total)
    dist: dict[OccupationVector, float] = {}
    for state in basis:
        occ_out = OccupationVector.from_dense(state)
        amp = transition_amplitude(U, occ_in, occ_out)
        dist[occ_out] = abs(amp) ** 2
    return dist


# ---------------------------------------------------------------------------
# QFI oracle
# ---------------------------------------------------------------------------

def build_number_operator(h: np.ndarray, basis: FockBasis) -> sp.csr_matrix:
    """Second-quantized one-body operator sum h_jk a_j^dag a_k on the basis."""
    m = basis.modes
    if h.shape != (m, m):
        raise DomainError(f"generator shape {h.shape} does not match {m} modes")
    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []
    nz = [(j, k) for j in range(m) for k in range(m) if h[j, k] != 0]
    for idx in range(len(basis)):
        v = basis.state(idx)
        for j, k in nz:
            if j == k:
                if v[j]:
                    rows.append(idx)
                    cols.append(idx)
                    vals.append(h[j, j] * v[j])
                continue
            if v[k] == 0:
                continue
            w = list(v)
            w[k] -= 1
            w[j] += 1
            amp = h[j, k] * math.sqrt(v[k] * (v[j] + 1))
            rows.append(basis.index(w))
            cols.append(idx)
            vals.append(amp)
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(len(basis), len(basis)), dtype=complex)
    return mat.tocsr()


@dataclass(frozen=True)
class OracleQfi:
    """QFI by two independent routes that must agree."""

    full: float
    analytic: float

    @property
    def spread(self) -> float:
        return abs(self.full - self.analytic)


def qfi_oracle(h: np.ndarray, occ: OccupationVector) -> OracleQfi:
    """4 (<H^2> - <H>^2) on a product Fock input.

    Full route: sparse second-quantized operator applied to the basis vector.
    Analytic route: the same variance reduced mode-by-mode, which for a Fock
    input collapses to 4 sum_{j != k} |h_jk|^2 n_j (n_k + 1); the diagonal
    part of h contributes no variance on a number eigenstate.
    """
    basis = FockBasis(occ.modes, occ.total)
    H = build_number_operator(np.asarray(h, dtype=complex), basis)
    e = np.zeros(len(basis), dtype=complex)
    idx = basis.index(occ)
    e[idx] = 1.0
    w = H @ e
    mean = w[idx].real
    mean_sq = float(np.vdot(w, w).real)
    full = 4.0 * (mean_sq - mean**2)

    analytic = 0.0
    m = occ.modes
    for j, nj in occ.items():
        for k in range(m):
            if k != j:
                analytic += abs(h[j, k]) ** 2 * nj * (occ.count(k) + 1)
    analytic *= 4.0
    return OracleQfi(full=full, analytic=analytic)


def permutation_qfi_invariance(occ: OccupationVector) -> float:
    """Spread of oracle QFI across all 4! input relabelings of a 4-mode state."""
    if occ.modes != 4:
        raise DomainError("permutation sweep is defined on the four-mode network")
    h = generator(NetworkKind.SYMMETRIC, 4)
    values = []
    for perm in itertools.permutations(range(4)):
        values.append(qfi_oracle(h, occ.permuted(perm)).full)
    return max(values) - min(values)


# ---------------------------------------------------------------------------
# Measurement procedure: outcome "input equals output"
# ---------------------------------------------------------------------------

UnitaryFamily = Callable[[float], np.ndarray]


def family_of(kind: NetworkKind | str, m: int) -> UnitaryFamily:
    kind = parse_kind(kind)
    return lambda phi: family_unitary(kind, m, phi)


def equal_outcome_amplitude(U_family: UnitaryFamily, occ: OccupationVector,
                            phi: float) -> float:
    amp = transition_amplitude(U_family(phi), occ, occ)
    if abs(amp.imag) > 1e-12:
        raise DomainError(
            "input=output amplitude is not real; binary Fisher analysis needs a "
            "real-valued family (symmetric or separable)"
        )
    return amp.real


def _richardson_derivative(f: Callable[[float], float], x: float, step: float) -> float:
    coarse = (f(x + step) - f(x - step)) / (2 * step)
    fine = (f(x + step / 2) - f(x - step / 2)) / step
    return (4 * fine - coarse) / 3


def binary_measurement_fisher(U_family: UnitaryFamily, occ: OccupationVector,
                              phi: float, step: float = FD_STEP) -> float:
    """Fisher information 4 p'^2 / (1 - p^2) of the two-outcome measurement
    that only asks whether the output repeats the input."""
    p = equal_outcome_amplitude(U_family, occ, phi)
    if 1.0 - p * p < 1e-14:
        raise LimitPoint(f"p_= = {p:+.3f} at phi = {phi}; evaluate at small nonzero phi")
    dp = _richardson_derivative(lambda x: equal_outcome_amplitude(U_family, occ, x),
                                phi, step)
    return 4.0 * dp**2 / (1.0 - p * p)


def phi_zero_limit_fisher(U_family: UnitaryFamily, occ: OccupationVector,
                          phis: tuple[float, float] = LIMIT_PHIS,
                          step: float = FD_STEP) -> float:
    """Quadratic pull of the binary Fisher information to phi = 0.

    The curve is even in phi, so F(phi) ~ F0 + a phi^2 and two evaluation
    points determine F0.
    """
    a, b = phis
    if a == b:
        raise DomainError("need two distinct phi values for the extrapolation")
    fa = binary_measurement_fisher(U_family, occ, a, step)
    fb = binary_measurement_fisher(U_family, occ, b, step)
    return (a * a * fb - b * b * fa) / (a * a - b * b)


def distribution_fisher(U_family: UnitaryFamily, occ: OccupationVector,
                        phi: float, step: float = FD_STEP) -> float:
    """Classical Fisher information of the full photon-counting distribution."""
    lo = outcome_distribution(U_family(phi - step), occ)
    hi = outcome_distribution(U_family(phi + step), occ)
    mid = outcome_distribution(U_family(phi), occ)
    fisher = 0.0
    for occ_out, p in mid.items():
        if p < 1e-12:
            continue
        dp = (hi[occ_out] - lo[occ_out]) / (2 * step)
        fisher += dp * dp / p
    return fisher


@dataclass
class MeasurementCurve:
    """Sampled phase response of the input=output measurement."""

    phis: list[float]
    p_equal: list[float]
    fisher_binary: list[float]
    fisher_full: list[float]
    qfi: float

    SCHEMA = "scattermet.measurement.v1"

    def to_csv(self) -> str:
        lines = [f"# schema={self.SCHEMA}", "phi,p_equal,fisher_binary,fisher_full,qfi"]
        for phi, p, fb, ff in zip(self.phis, self.p_equal, self.fisher_binary,
                                  self.fisher_full):
            lines.append(f"{phi:.17g},{p:.17g},{fb:.17g},{ff:.17g},{self.qfi:.17g}")
        return "\n".join(lines) + "\n"


def measurement_curve(kind: NetworkKind | str, occ: OccupationVector,
                      phis: Sequence[float], step: float = FD_STEP) -> MeasurementCurve:
    kind = parse_kind(kind)
    if kind is NetworkKind.UNIFORM:
        raise DomainError("uniform family is excluded here: the two-outcome "
                          "analysis is specified for the real-valued networks")
    fam = family_of(kind, occ.modes)
    closed = family_qfi(kind, occ)
    ps, fbin, ffull = [], [], []
    for phi in phis:
        ps.append(equal_outcome_amplitude(fam, occ, phi) ** 2)
        fbin.append(binary_measurement_fisher(fam, occ, phi, step))
        ffull.append(distribution_fisher(fam, occ, phi, step))
    return MeasurementCurve(list(phis), ps, fbin, ffull, closed)


# ---------------------------------------------------------------------------
# Amplitude expansion in powers of cos and sin
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AmplitudeExpansion:
    """Coefficients a_j of p_=(phi) = sum_j a_j c^{n-2j} s^{2j}."""

    photons: int
    coefficients: tuple[float, ...]


def amplitude_expansion(occ: OccupationVector, n_samples: int = 0) -> AmplitudeExpansion:
    """Fit the input=output amplitude of the symmetric family to its c/s polynomial.

    The leading coefficient is 1 and the next is -C(n,2) regardless of which
    modes carry the photons; higher terms depend on the realised sign pattern.
    """
    if not occ.is_single_photon():
        raise DomainError("amplitude expansion is defined for single-photon inputs")
    n = occ.total
    if n > 8:
        raise DomainError(f"expansion fit capped at 8 photons, got {n}")
    m = occ.modes
    fam = family_of(NetworkKind.SYMMETRIC, m)
    terms = n // 2 + 1
    if n_samples <= 0:
        n_samples = max(8, 4 * terms)
    phis = np.linspace(0.15, 2.8, n_samples)
    c = np.cos(phis / 2)
    s = np.sin(phis / 2) / math.sqrt(m - 1)
    design = np.stack([c ** (n - 2 * j) * s ** (2 * j) for j in range(terms)], axis=1)
    target = np.array([equal_outcome_amplitude(fam, occ, phi) for phi in phis])
    scale = np.linalg.norm(design, axis=0)
    if np.any(scale == 0.0):
        raise NumericalError("degenerate design matrix in amplitude expansion fit")
    coeffs, _, rank, _ = np.linalg.lstsq(design / scale, target, rcond=None)
    if rank < terms:
        raise NumericalError("amplitude expansion fit is rank deficient")
    return AmplitudeExpansion(n, tuple(coeffs / scale))


def odd_skew_permanent_check(d: int, trials: int, m: int = 16, phi: float = 0.9,
                             seed: int = 7) -> float:
    """Max |Per| of the off-diagonal skew part of random d-mode submatrices of
    the symmetric network; identically zero for odd d."""
    if d % 2 == 0:
        raise DomainError(f"check applies to odd submatrix sizes, got {d}")
    if d > 11:
        raise TooLarge(f"odd-skew check capped at d = 11, got {d}")
    if d > m:
        raise DomainError(f"need d <= m, got d={d}, m={m}")
    s = math.sin(phi / 2) / math.sqrt(m - 1)
    signs = symmetric_sign_pattern(m)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        subset = rng.choice(m, size=d, replace=False)
        block = s * signs[np.ix_(subset, subset)]
        worst = max(worst, abs(permanent(block)))
    return worst
