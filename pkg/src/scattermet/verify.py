"""Named invariant suites behind the `verify` CLI subcommand.

Each check returns (passed, detail). Checks accept overrides where mutation
testing wants to feed a corrupted matrix through the same reporting path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import stats as sps

from . import fock, networks, qfi, sources
from .occupations import OccupationVector
from .walkers import first_region_edge

PHI_SET = (0.0, 0.1, 1.0, math.pi, 3.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "detail": self.detail}


def _result(name: str, worst: float, tol: float, extra: str = "") -> CheckResult:
    detail = f"max deviation {worst:.3e} (tol {tol:.1e})" + (f"; {extra}" if extra else "")
    return CheckResult(name, worst < tol, detail)


# ---------------------------------------------------------------------------
# netbuild suite
# ---------------------------------------------------------------------------

def check_unitarity(max_modes: int = 64) -> CheckResult:
    worst = 0.0
    m = 4
    while m <= max_modes:
        for phi in PHI_SET:
            for kind in ("sep", "uni", "sym"):
                worst = max(worst, networks.unitarity_defect(
                    networks.family_unitary(kind, m, phi)))
        m *= 2
    return _result("unitarity of all families, m <= %d" % max_modes, worst,
                   networks.TOL_UNITARY)


def check_closed_vs_product(max_modes: int = 32) -> CheckResult:
    worst = 0.0
    m = 4
    while m <= max_modes:
        for phi in (0.1, 0.7, 2.0):
            worst = max(worst, float(np.abs(
                networks.uniform_unitary(m, phi)
                - networks.uniform_unitary_product(m, phi)).max()))
            worst = max(worst, float(np.abs(
                networks.symmetric_unitary(m, phi)
                - networks.symmetric_unitary_product(m, phi)).max()))
        m *= 2
    return _result("closed forms equal conjugation products", worst, 1e-12)


def check_symmetrizer_orthogonality(m: int = 16, matrix: np.ndarray | None = None) -> CheckResult:
    T = networks.symmetrizer(m) if matrix is None else matrix
    worst = networks.orthogonality_defect(T)
    return _result(f"symmetriser T_{m} orthogonal", worst, networks.TOL_UNITARY)


def check_symmetric_structure(max_modes: int = 32, phi: float = 1.1) -> CheckResult:
    worst = 0.0
    m = 4
    while m <= max_modes:
        Y = networks.symmetric_unitary(m, phi)
        c = math.cos(phi / 2)
        s = math.sin(phi / 2) / math.sqrt(m - 1)
        worst = max(worst, float(np.abs(np.diagonal(Y) - c).max()))
        off = Y - np.diag(np.diagonal(Y))
        worst = max(worst, float(np.abs(np.abs(off[off != 0.0]) - s).max()))
        worst = max(worst, float(np.abs(off + off.T).max()))
        worst = max(worst, float(np.abs(
            Y.T - networks.symmetric_unitary(m, -phi)).max()))
        m *= 2
    return _result("symmetric scattering structure (diag, skew, transpose)", worst, 1e-12)


def check_generator_consistency(max_modes: int = 16) -> CheckResult:
    worst = 0.0
    for kind, sizes in (("mzi", (2,)), ("sep", (2, 4, 8, 16)),
                        ("uni", (2, 4, 8, 16)), ("sym", (2, 4, 8, 16))):
        for m in sizes:
            h = networks.generator(kind, m)
            worst = max(worst, networks.hermiticity_defect(h))
            for phi in (0.1, 0.7, 2.0):
                worst = max(worst, float(np.abs(
                    networks.expm_phase(h, phi)
                    - networks.family_unitary(kind, m, phi)).max()))
    return _result("exp(-i phi h) reproduces each family", worst, networks.TOL_EXP)


def check_skew_hadamard(max_n: int = 128) -> CheckResult:
    worst = 0.0
    n = 2
    while n <= max_n:
        H = networks.skew_hadamard(n)
        worst = max(worst, networks.orthogonality_defect(H))
        worst = max(worst, float(np.abs(H + H.T).max()))
        mask = ~np.eye(n, dtype=bool)
        worst = max(worst, float(np.abs(np.abs(H[mask]) - 1 / math.sqrt(n - 1)).max()))
        n *= 2
    return _result("skew-Hadamard helpers orthogonal/skew/equal-magnitude", worst, 1e-12)


def check_m4_similarities() -> CheckResult:
    worst = 0.0
    for variant in ("M4", "M41", "M42"):
        for phi in (0.0, 0.8, 1.3, 2.9):
            worst = max(worst, networks.permutation_similarity_check(variant, phi))
    return _result("four-mode signed-permutation similarities", worst, 1e-12)


def check_hadamard_vs_separable(m: int = 8, phi: float = 0.9) -> CheckResult:
    X = networks.hadamard_sylvester(m)
    Y = X @ networks.phase_layer(m, phi) @ X.conj().T
    P = networks.separable_mode_permutation(m)
    D = networks.separable_phase_dressing(m)
    want = D @ networks.separable_unitary(m, phi).astype(complex) @ D.conj().T
    worst = float(np.abs(P.T.astype(complex) @ Y @ P - want).max())
    return _result("Sylvester conjugation is the separable stack, modes permuted "
                   "(up to single-mode phases)", worst, 1e-12)


# ---------------------------------------------------------------------------
# qfi suite
# ---------------------------------------------------------------------------

def check_qfi_table() -> CheckResult:
    expected = {
        "1100": (4, 3), "1010": (2, 2), "1001": (2, 3),
        "0110": (2, 3), "0101": (2, 2), "0011": (4, 3),
    }
    worst = 0.0
    for text, (sep_val, uni_val) in expected.items():
        occ = OccupationVector.from_dense(int(ch) for ch in text)
        worst = max(worst, abs(qfi.qfi_separable(occ) - sep_val))
        worst = max(worst, abs(qfi.qfi_uniform(occ) - uni_val))
        worst = max(worst, abs(qfi.qfi_symmetric(occ) - 8 / 3))
    for kind in ("sep", "uni"):
        occ = OccupationVector.from_dense([1, 1, 0, 0])
        worst = max(worst, abs(qfi.average_qfi_exact(kind, occ) - 8 / 3))
    return _result("two-photon four-mode QFI table", worst, 1e-12)


def check_pairing_identity(max_m: int = 40, max_n: int = 10) -> CheckResult:
    for m in range(2, max_m + 1, 2):
        for n in range(0, min(m, max_n) + 1):
            total = sum(qfi.pair_count_weight(m, n, x) for x in range(n // 2 + 1))
            if total != math.comb(m, n):
                return CheckResult("pairing weights sum to C(m,n)", False,
                                   f"mismatch at m={m}, n={n}")
    return CheckResult("pairing weights sum to C(m,n)", True,
                       f"exact for m <= {max_m}, n <= {max_n}")


def check_average_formula(max_m: int = 16) -> CheckResult:
    worst = 0.0
    for m in range(2, max_m + 1, 2):
        for n in range(1, m + 1):
            got = qfi.avg_qfi_separable_single_photons(m, n)
            want = n + n * (n - 1) / (m - 1)
            worst = max(worst, abs(got - want))
    return _result("sum_x F(x) P(x) equals n + n(n-1)/(m-1)", worst, 1e-12)


def check_permutation_averages() -> CheckResult:
    worst = 0.0
    cases = [(4, [1, 1, 0, 0]), (6, [2, 1, 1, 0, 0, 0]), (8, [1, 1, 1, 1, 0, 0, 0, 0]),
             (8, [2, 2, 0, 0, 0, 0, 0, 0])]
    for m, dense in cases:
        occ = OccupationVector.from_dense(dense)
        target = qfi.qfi_symmetric(occ)
        for kind in ("sep", "uni"):
            worst = max(worst, abs(qfi.average_qfi_exact(kind, occ) - target))
    return _result("permutation averages collapse onto the symmetric QFI", worst, 1e-12)


def check_cosecant(max_m: int = 256) -> CheckResult:
    worst = 0.0
    m = 4
    while m <= max_m:
        for j in range(1, m // 2 + 1, max(1, m // 16)):
            worst = max(worst, abs(qfi.cosecant_sum(m, j) - m * m / 4) / (m * m))
        m *= 2
    return _result("cosecant sum equals m^2/4 (relative)", worst, 1e-6)


def check_crossover_values() -> CheckResult:
    worst = max(
        abs(sources.chi_for_mean_photons(2**16, 40) - 0.0247) / 0.0247 * 1e-4,
        abs(sources.chi_for_mean_photons(2**18, 30) - 0.0107) / 0.0107 * 1e-4,
    )
    edge_ok = (first_region_edge(2**16, 40) == 84
               and first_region_edge(2**18, 30) == 603)
    mono = qfi.kadv(2**17, 40) > qfi.kadv(2**16, 40)
    passed = worst < 1e-4 and edge_ok and mono
    return CheckResult("calibration chi values, region edges, kadv monotonicity",
                       passed, f"chi deviation {worst:.2e}; edges {'ok' if edge_ok else 'BAD'}; "
                       f"monotone {'ok' if mono else 'BAD'}")


def check_shot_noise_floor(trials: int = 200, seed: int = 5) -> CheckResult:
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        m = int(rng.choice([2, 4, 8]))
        dense = rng.integers(0, 3, size=m)
        if dense.sum() == 0:
            continue
        occ = OccupationVector.from_dense(dense.tolist())
        n = occ.total
        for kind in ("sep", "uni", "sym"):
            if qfi.family_qfi(kind, occ) < n - 1e-12:
                return CheckResult("QFI never below the shot-noise floor", False,
                                   f"violated at m={m}, occ={dense}")
    return CheckResult("QFI never below the shot-noise floor", True,
                       f"{trials} random occupations")


# ---------------------------------------------------------------------------
# fock suite
# ---------------------------------------------------------------------------

def check_permanent_oracle(trials: int = 30, seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 8))
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        worst = max(worst, abs(fock.permanent(A) - fock.permanent_naive(A)))
    return _result("Ryser permanent equals brute-force permutation sum", worst, 1e-10)


def check_probability_conservation() -> CheckResult:
    worst = 0.0
    cases = [("sym", 4, [1, 1, 0, 0], 0.6), ("sep", 4, [1, 0, 2, 0], 1.1),
             ("uni", 4, [1, 1, 1, 0], 0.8), ("sym", 8, [1, 0, 1, 0, 0, 1, 0, 0], 0.4)]
    for kind, m, dense, phi in cases:
        occ = OccupationVector.from_dense(dense)
        dist = fock.outcome_distribution(networks.family_unitary(kind, m, phi), occ)
        worst = max(worst, abs(sum(dist.values()) - 1.0))
    return _result("outcome distributions sum to one", worst, 1e-9)


def check_amplitude_reality() -> CheckResult:
    worst = 0.0
    rng = np.random.default_rng(2)
    basis = fock.FockBasis(4, 2)
    for kind in ("sym", "sep"):
        U = networks.family_unitary(kind, 4, 0.9)
        for s_in in basis:
            for s_out in basis:
                amp = fock.transition_amplitude(
                    U, OccupationVector.from_dense(s_in), OccupationVector.from_dense(s_out))
                worst = max(worst, abs(amp.imag))
    _ = rng
    return _result("real families have real transition amplitudes", worst, 1e-12)


def check_oracle_agreement(trials: int = 40, seed: int = 23) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        kind = str(rng.choice(["sep", "uni", "sym"]))
        m = int(rng.choice([2, 4, 8]))
        dense = rng.multinomial(int(rng.integers(1, 5)), np.full(m, 1 / m))
        occ = OccupationVector.from_dense(dense.tolist())
        oracle = fock.qfi_oracle(networks.generator(kind, m), occ)
        worst = max(worst, oracle.spread)
        worst = max(worst, abs(oracle.full - qfi.family_qfi(kind, occ)))
    return _result("oracle routes agree and match closed forms", worst, 1e-9)


def check_odd_skew_permanents(trials: int = 100) -> CheckResult:
    worst = 0.0
    for d in (1, 3, 5, 7, 9):
        worst = max(worst, fock.odd_skew_permanent_check(d, trials))
    return _result("odd skew submatrix permanents vanish", worst, 1e-10)


def check_amplitude_expansion() -> CheckResult:
    worst = 0.0
    cases = [(4, (0, 1)), (8, (0, 2, 5)), (8, (1, 3, 4)), (16, (0, 3, 7, 11, 13))]
    for m, modes in cases:
        occ = OccupationVector(m, {i: 1 for i in modes})
        n = occ.total
        exp = fock.amplitude_expansion(occ)
        worst = max(worst, abs(exp.coefficients[0] - 1.0))
        worst = max(worst, abs(exp.coefficients[1] + math.comb(n, 2)))
    return _result("amplitude expansion leading terms 1 and -C(n,2)", worst, 1e-8)


def check_measurement_limit() -> CheckResult:
    worst = 0.0
    for m, modes in ((4, (0, 2)), (8, (1, 6))):
        occ = OccupationVector(m, {i: 1 for i in modes})
        n = occ.total
        fam = fock.family_of("sym", m)
        got = fock.phi_zero_limit_fisher(fam, occ)
        worst = max(worst, abs(got - (n + n * (n - 1) / (m - 1))))
    return _result("phi -> 0 binary Fisher limit equals n + n(n-1)/(m-1)", worst, 1e-3)


def check_permutation_invariance() -> CheckResult:
    worst = 0.0
    for dense in ([2, 1, 0, 0], [3, 0, 1, 0], [1, 1, 2, 0]):
        occ = OccupationVector.from_dense(dense)
        worst = max(worst, fock.permutation_qfi_invariance(occ))
    return _result("oracle QFI invariant under four-mode relabelings", worst, 1e-9)


# ---------------------------------------------------------------------------
# scattershot suite
# ---------------------------------------------------------------------------

def check_chi_calibration() -> CheckResult:
    worst = max(
        abs(sources.chi_for_mean_photons(2**16, 40) - 0.02469775821),
        abs(sources.chi_for_mean_photons(2**18, 30) - 0.01069709413),
    )
    return _result("chi calibration at the reference operating points", worst, 1e-9)


def check_pmf_normalisation(m: int = 6, chi: float = 0.3) -> CheckResult:
    chi_f = Fraction(3, 10)
    total = sum(sources.total_photon_pmf_exact(m, chi_f, n) for n in range(200))
    worst = abs(float(total) - 1.0)
    worst = max(worst, max(
        abs(sources.total_photon_pmf(m, chi, n)
            - float(sources.total_photon_pmf_exact(m, chi_f, n)))
        for n in range(40)
    ))
    return _result("total-photon pmf normalised and matches exact rationals", worst, 1e-9)


def check_sampler_frequencies(m: int = 64, chi: float = 0.125, draws: int = 200_000,
                              seed: int = 31) -> CheckResult:
    src = sources.SqueezerSource(m, chi)
    rng = np.random.default_rng(seed)
    zero = one = more = 0
    for _ in range(draws // 100):
        occ = sources.sample(src, rng, method="sparse")
        counts = occ.counts
        one += sum(1 for c in counts.values() if c == 1)
        more += sum(1 for c in counts.values() if c > 1)
        zero += m - len(counts)
    ratio = one / zero
    want = chi * chi
    sigma = math.sqrt(want / zero)
    dev = abs(ratio - want) / sigma
    return CheckResult("per-mode frequencies follow the squeezer law", dev < 5,
                       f"P(1)/P(0) = {ratio:.6f} vs chi^2 = {want:.6f} ({dev:.1f} sigma)")


def check_sparse_dense_equivalence(m: int = 64, chi: float = 0.2,
                                   draws: int = 20_000, seed: int = 17) -> CheckResult:
    src = sources.SqueezerSource(m, chi)
    hists = {}
    for tag, method in ((0, "sparse"), (1, "dense")):
        totals = []
        for i in range(draws):
            totals.append(sources.sample(src, (seed, tag, i), method=method).total)
        hists[method] = np.bincount(totals, minlength=30)
    top = max(len(hists["sparse"]), len(hists["dense"]))
    a = np.zeros(top)
    b = np.zeros(top)
    a[:len(hists["sparse"])] = hists["sparse"]
    b[:len(hists["dense"])] = hists["dense"]
    keep = (a + b) >= 10
    _, p, _, _ = sps.chi2_contingency(np.stack([a[keep], b[keep]]))
    return CheckResult("sparse and dense samplers are statistically identical",
                       p > 0.01, f"two-sample chi-square p = {p:.4f}")


def check_seed_determinism(m: int = 4096, chi: float = 0.05) -> CheckResult:
    src = sources.SqueezerSource(m, chi)
    a = [sources.sample(src, (9, i)).counts for i in range(50)]
    b = [sources.sample(src, (9, i)).counts for i in range(50)]
    return CheckResult("identical seeds give identical samples", a == b,
                       "50 draws compared")


def check_postselection(m: int = 4096, n_avg: int = 12, seed: int = 3) -> CheckResult:
    chi = sources.chi_for_mean_photons(m, n_avg)
    src = sources.SqueezerSource(m, chi, postselect_single=True)
    rng = np.random.default_rng(seed)
    counter: dict = {}
    ok = True
    for _ in range(500):
        occ = sources.sample_postselected_single(src, rng, counter=counter)
        ok &= all(c == 1 for c in occ.counts.values())
    rate = counter["accepted"] / counter["attempts"]
    expected = sources.single_photon_acceptance(src)
    return CheckResult("postselection accepts only 0/1 samples at the expected rate",
                       ok and abs(rate - expected) < 0.05,
                       f"acceptance {rate:.3f} vs analytic {expected:.3f}")


SUITES: dict[str, list[Callable[[], CheckResult]]] = {
    "netbuild": [
        check_unitarity,
        check_closed_vs_product,
        check_symmetrizer_orthogonality,
        check_symmetric_structure,
        check_generator_consistency,
        check_skew_hadamard,
        check_m4_similarities,
        check_hadamard_vs_separable,
    ],
    "qfi": [
        check_qfi_table,
        check_pairing_identity,
        check_average_formula,
        check_permutation_averages,
        check_cosecant,
        check_crossover_values,
        check_shot_noise_floor,
    ],
    "fock": [
        check_permanent_oracle,
        check_probability_conservation,
        check_amplitude_reality,
        check_oracle_agreement,
        check_odd_skew_permanents,
        check_amplitude_expansion,
        check_measurement_limit,
        check_permutation_invariance,
    ],
    "scattershot": [
        check_chi_calibration,
        check_pmf_normalisation,
        check_sampler_frequencies,
        check_sparse_dense_equivalence,
        check_seed_determinism,
        check_postselection,
    ],
}


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        results = []
        for suite in SUITES.values():
            results.extend(check() for check in suite)
        return results
    try:
        suite = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; choose from "
                       f"{sorted(SUITES) + ['all']}") from None
    return [check() for check in suite]
