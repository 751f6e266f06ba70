"""Interferometer construction: MZI stacks, QFT-based and symmetrised networks.

All three families share the same phase structure: an unknown phase phi applied
to half of the modes, conjugated by a fixed mixing network. Every constructor
returns a fresh ndarray; closed forms are used throughout, with the explicit
conjugation products exposed separately as cross-checks.

Convention: each family's Hermitian generator h satisfies exp(-i*phi*h) = Y(phi),
with the phase layer split symmetrically as diag(e^{+i phi/2} ..., e^{-i phi/2} ...).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import json

import numpy as np

from .errors import DomainError, OddModeCount, UnsupportedSize

TOL_UNITARY = 1e-10
TOL_EXP = 1e-10


class NetworkKind(str, Enum):
    MZI = "mzi"
    SEPARABLE = "sep"
    UNIFORM = "uni"
    SYMMETRIC = "sym"


_KIND_ALIASES = {
    "mzi": NetworkKind.MZI,
    "sep": NetworkKind.SEPARABLE,
    "separable": NetworkKind.SEPARABLE,
    "uni": NetworkKind.UNIFORM,
    "uniform": NetworkKind.UNIFORM,
    "sym": NetworkKind.SYMMETRIC,
    "symmetric": NetworkKind.SYMMETRIC,
}


def parse_kind(name: str | NetworkKind) -> NetworkKind:
    if isinstance(name, NetworkKind):
        return name
    try:
        return _KIND_ALIASES[name.lower()]
    except KeyError:
        raise DomainError(f"unknown interferometer kind {name!r}") from None


@dataclass(frozen=True)
class NetworkSpec:
    """Which interferometer family, at what size, probing what phase."""

    kind: NetworkKind
    modes: int
    phase: float = 0.0

    def __post_init__(self):
        validate_modes(self.kind, self.modes)

    def unitary(self) -> np.ndarray:
        return family_unitary(self.kind, self.modes, self.phase)

    def generator(self) -> np.ndarray:
        return generator(self.kind, self.modes)


def validate_modes(kind: NetworkKind | str, m: int) -> None:
    kind = parse_kind(kind)
    if m < 2:
        raise UnsupportedSize(f"need at least 2 modes, got {m}")
    if kind is NetworkKind.MZI:
        if m != 2:
            raise UnsupportedSize("mzi is strictly two-mode")
    elif kind in (NetworkKind.SEPARABLE, NetworkKind.UNIFORM):
        if m % 2:
            raise OddModeCount(f"{kind.value} needs an even mode count, got {m}")
    elif kind is NetworkKind.SYMMETRIC:
        if m != 2 and (m % 2 or not _is_power_of_two(m // 2)):
            raise UnsupportedSize(
                f"symmetric construction needs m = 2 or m/2 a power of two, got {m}"
            )


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


# ---------------------------------------------------------------------------
# Elementary constructions
# ---------------------------------------------------------------------------

def mzi_unitary(phi: float) -> np.ndarray:
    """Two-mode Mach-Zehnder scattering matrix [[c, s], [-s, c]], c = cos(phi/2)."""
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    return np.array([[c, s], [-s, c]])


def phase_layer(m: int, phi: float) -> np.ndarray:
    """Diagonal phase plate: e^{+i phi/2} on the first m/2 modes, e^{-i phi/2} after."""
    if m % 2:
        raise OddModeCount(f"phase layer needs an even mode count, got {m}")
    half = m // 2
    d = np.concatenate([
        np.full(half, np.exp(0.5j * phi)),
        np.full(half, np.exp(-0.5j * phi)),
    ])
    return np.diag(d)


def qft(m: int) -> np.ndarray:
    """Quantum Fourier transform matrix, entries e^{-2i pi jk/m}/sqrt(m)."""
    if m < 1:
        raise DomainError(f"mode count must be positive, got {m}")
    j = np.arange(m)
    return np.exp(-2j * np.pi * np.outer(j, j) / m) / np.sqrt(m)


def separable_unitary(m: int, phi: float) -> np.ndarray:
    """Block-diagonal stack of m/2 MZIs on mode pairs (2j-1, 2j)."""
    if m % 2:
        raise OddModeCount(f"separable stack needs an even mode count, got {m}")
    return np.kron(np.eye(m // 2), mzi_unitary(phi))


def uniform_unitary(m: int, phi: float) -> np.ndarray:
    """QFT-conjugated phase layer in closed form.

    Diagonal cos(phi/2); zero where the index offset is even and nonzero;
    4i sin(phi/2) / [m (1 - e^{2 i pi (k-j)/m})] where it is odd.
    """
    if m % 2:
        raise OddModeCount(f"uniform interferometer needs an even mode count, got {m}")
    d = np.arange(m)[None, :] - np.arange(m)[:, None]
    odd = (d % 2) != 0
    Y = np.zeros((m, m), dtype=complex)
    np.fill_diagonal(Y, np.cos(phi / 2))
    Y[odd] = 4j * np.sin(phi / 2) / (m * (1.0 - np.exp(2j * np.pi * d[odd] / m)))
    return Y


def uniform_unitary_product(m: int, phi: float) -> np.ndarray:
    """Explicit conjugation F Z(phi) F^dag; cross-check for the closed form."""
    F = qft(m)
    return F @ phase_layer(m, phi) @ F.conj().T


def hadamard_sylvester(m: int) -> np.ndarray:
    """Sylvester-Hadamard transform H/sqrt(m); m a power of two.

    Conjugating the phase layer by this instead of the QFT reproduces the
    separable stack up to a mode permutation; see separable_mode_permutation.
    """
    if not _is_power_of_two(m):
        raise UnsupportedSize(f"Sylvester construction needs a power-of-two size, got {m}")
    H = np.array([[1.0]])
    core = np.array([[1.0, 1.0], [1.0, -1.0]])
    while H.shape[0] < m:
        H = np.kron(core, H)
    return H / np.sqrt(m)


def separable_mode_permutation(m: int) -> np.ndarray:
    """Permutation P with P^T [X Z(phi) X^dag] P block-diagonal for Sylvester X.

    The Hadamard-conjugated interferometer couples mode j to mode j + m/2; the
    interleave (0, m/2, 1, m/2+1, ...) maps those pairs onto adjacent MZIs.
    The resulting blocks are the MZI dressed by inconsequential single-mode
    phases: P^T Y P = Phi (oplus Y2) Phi^dag with Phi = oplus diag(1, -i); see
    separable_phase_dressing.
    """
    half = m // 2
    order = np.empty(m, dtype=int)
    order[0::2] = np.arange(half)
    order[1::2] = np.arange(half) + half
    P = np.zeros((m, m))
    P[order, np.arange(m)] = 1.0
    return P


def separable_phase_dressing(m: int) -> np.ndarray:
    """Diagonal phase plates relating the permuted Sylvester network to oplus Y2."""
    return np.kron(np.eye(m // 2), np.diag([1.0, -1.0j]))


def skew_hadamard(n: int) -> np.ndarray:
    """Orthogonal skew-symmetric helper with zero diagonal, off-diagonals +-1/sqrt(n-1).

    Built by the doubling recursion from [[0, 1], [-1, 0]]; n must be a power
    of two >= 2.
    """
    if not _is_power_of_two(n) or n < 2:
        raise UnsupportedSize(f"skew-Hadamard helper needs a power-of-two size >= 2, got {n}")
    H = np.array([[0.0, 1.0], [-1.0, 0.0]])
    while H.shape[0] < n:
        k = H.shape[0]
        eye = np.eye(k) / np.sqrt(k - 1)
        H = (np.sqrt(k - 1) / np.sqrt(2 * k - 1)) * np.block([
            [H, H + eye],
            [H - eye, -H],
        ])
    return H


def _a2_block(m: int) -> np.ndarray:
    return np.array([
        [0.0, 1 / np.sqrt(2)],
        [(np.sqrt(m) - np.sqrt((m - 1) * (m - 2))) / np.sqrt(2 * m * (m - 1)),
         -np.sqrt((m - 2) / (2 * m * (m - 1)))],
    ])


def _b2_block(m: int) -> np.ndarray:
    return np.array([
        [1 / np.sqrt(2 * (m - 1)), np.sqrt(m / (2 * (m - 1) * (m - 2)))],
        [(np.sqrt(m * (m - 2)) + 2 * np.sqrt(m - 1)) / np.sqrt(2 * m * (m - 1) * (m - 2)),
         -np.sqrt((m - 2) / (2 * m * (m - 1)))],
    ])


def symmetrizer(m: int) -> np.ndarray:
    """Real orthogonal symmetrising transform built from 2x2 blocks.

    The diagonal carries A2(m); off-diagonal blocks are +-B2(m) with the sign
    taken from the matching entry of skew_hadamard(m/2), which is what makes
    the block products telescope to the identity.
    """
    if m < 4 or m % 2 or not _is_power_of_two(m // 2):
        raise UnsupportedSize(f"symmetriser needs m >= 4 with m/2 a power of two, got {m}")
    half = m // 2
    signs = np.sign(skew_hadamard(half))
    a, b = _a2_block(m), _b2_block(m)
    T = np.zeros((m, m))
    for J in range(half):
        for K in range(half):
            T[2 * J:2 * J + 2, 2 * K:2 * K + 2] = a if J == K else signs[J, K] * b
    return T


def symmetric_sign_pattern(m: int) -> np.ndarray:
    """Skew +-1 off-diagonal pattern S of the symmetric family, zero diagonal.

    Y_sym(phi) = cos(phi/2) I + [sin(phi/2)/sqrt(m-1)] S, and S S^T = (m-1) I.
    """
    if m == 2:
        return np.array([[0.0, 1.0], [-1.0, 0.0]])
    if m < 4 or m % 2 or not _is_power_of_two(m // 2):
        raise UnsupportedSize(f"symmetric family needs m = 2 or m/2 a power of two, got {m}")
    half = m // 2
    signs = np.sign(skew_hadamard(half))
    diag_block = np.array([[0.0, -1.0], [1.0, 0.0]])
    off_block = np.array([[1.0, 1.0], [1.0, -1.0]])
    S = np.zeros((m, m))
    for J in range(half):
        for K in range(half):
            S[2 * J:2 * J + 2, 2 * K:2 * K + 2] = (
                diag_block if J == K else signs[J, K] * off_block
            )
    return S


def symmetric_unitary(m: int, phi: float) -> np.ndarray:
    """Symmetrised interferometer: constant diagonal cos(phi/2), skew off-diagonals
    of uniform magnitude sin(phi/2)/sqrt(m-1)."""
    if m == 2:
        return mzi_unitary(phi)
    c = np.cos(phi / 2)
    s = np.sin(phi / 2) / np.sqrt(m - 1)
    return c * np.eye(m) + s * symmetric_sign_pattern(m)


def symmetric_unitary_product(m: int, phi: float) -> np.ndarray:
    """Explicit conjugation T (oplus Y2) T^T; cross-check for the closed form."""
    if m == 2:
        return mzi_unitary(phi)
    T = symmetrizer(m)
    return T @ separable_unitary(m, phi) @ T.T


def family_unitary(kind: NetworkKind | str, m: int, phi: float) -> np.ndarray:
    kind = parse_kind(kind)
    validate_modes(kind, m)
    if kind is NetworkKind.MZI:
        return mzi_unitary(phi)
    if kind is NetworkKind.SEPARABLE:
        return separable_unitary(m, phi)
    if kind is NetworkKind.UNIFORM:
        return uniform_unitary(m, phi)
    return symmetric_unitary(m, phi)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def generator(kind: NetworkKind | str, m: int) -> np.ndarray:
    """Hermitian single-particle generator h with exp(-i phi h) = Y_kind(phi).

    mzi/sep couple mode pairs with +-i/2; uni is the QFT conjugation of the
    half-and-half phase diagonal; sym is (i/2 sqrt(m-1)) times the skew sign
    pattern of the scattering matrix.
    """
    kind = parse_kind(kind)
    validate_modes(kind, m)
    if kind in (NetworkKind.MZI, NetworkKind.SEPARABLE):
        pair = np.array([[0.0, 0.5j], [-0.5j, 0.0]])
        return np.kron(np.eye(m // 2), pair)
    if kind is NetworkKind.UNIFORM:
        d = np.arange(m)[None, :] - np.arange(m)[:, None]
        odd = (d % 2) != 0
        h = np.zeros((m, m), dtype=complex)
        h[odd] = -2.0 / (m * (1.0 - np.exp(2j * np.pi * d[odd] / m)))
        return h
    if m == 2:
        return generator(NetworkKind.MZI, 2)
    return (0.5j / np.sqrt(m - 1)) * symmetric_sign_pattern(m).astype(complex)


def expm_phase(h: np.ndarray, phi: float) -> np.ndarray:
    """exp(-i phi h) for Hermitian h via eigendecomposition; exact at these sizes."""
    w, V = np.linalg.eigh(h)
    return (V * np.exp(-1j * phi * w)) @ V.conj().T


# ---------------------------------------------------------------------------
# Verification helpers
# ---------------------------------------------------------------------------

def unitarity_defect(U: np.ndarray) -> float:
    """max |U U^dag - I|."""
    n = U.shape[0]
    return float(np.abs(U @ U.conj().T - np.eye(n)).max())


def orthogonality_defect(T: np.ndarray) -> float:
    return float(np.abs(T @ T.T - np.eye(T.shape[0])).max())


def hermiticity_defect(h: np.ndarray) -> float:
    return float(np.abs(h - h.conj().T).max())


def _m4_variant(name: str) -> tuple[np.ndarray, bool]:
    """Signed mode permutations of the four-mode symmetric network.

    Returns (matrix, conjugate_flips_phase): M4 commutes with Y4, while the
    generating pair M41/M42 conjugate Y4(phi) onto Y4(-phi) = Y4(phi)^T.
    """
    variants = {
        "M4": (np.array([
            [0, 1, 0, 0],
            [0, 0, -1, 0],
            [1, 0, 0, 0],
            [0, 0, 0, -1],
        ], dtype=float), False),
        "M41": (np.array([
            [0, 1, 0, 0],
            [1, 0, 0, 0],
            [0, 0, -1, 0],
            [0, 0, 0, 1],
        ], dtype=float), True),
        "M42": (np.array([
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
            [-1, 0, 0, 0],
        ], dtype=float), True),
    }
    try:
        return variants[name]
    except KeyError:
        raise DomainError(f"unknown variant {name!r}; expected M4, M41 or M42") from None


def permutation_similarity_check(variant: str, phi: float) -> float:
    """Max entrywise deviation of the four-mode similarity identity.

    M4 is checked against Y4(phi) itself; M41/M42 against Y4(-phi).
    """
    M, flips = _m4_variant(variant)
    Y = symmetric_unitary(4, phi)
    target = symmetric_unitary(4, -phi) if flips else Y
    return float(np.abs(M.T @ Y @ M - target).max())


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def matrix_to_json(M: np.ndarray) -> str:
    """Row-major JSON with [re, im] entry pairs."""
    M = np.asarray(M, dtype=complex)
    entries = [[float(z.real), float(z.imag)] for z in M.ravel(order="C")]
    return json.dumps({"dim": int(M.shape[0]), "entries": entries})


def matrix_from_json(text: str) -> np.ndarray:
    data = json.loads(text)
    dim = int(data["dim"])
    flat = np.array([complex(re, im) for re, im in data["entries"]])
    M = flat.reshape(dim, dim)
    if np.abs(M.imag).max() == 0.0:
        return M.real.copy()
    return M


def matrix_to_text(M: np.ndarray, digits: int = 6) -> str:
    """Plain-text grid of a matrix for docs and CLI output."""
    M = np.asarray(M)
    rows = []
    for row in M:
        cells = []
        for z in row:
            z = complex(z)
            if abs(z.imag) < 1e-15:
                cells.append(f"{z.real:+.{digits}f}")
            else:
                cells.append(f"{z.real:+.{digits}f}{z.imag:+.{digits}f}j")
        rows.append(" ".join(cells))
    return "\n".join(rows)
