"""Decompose real orthogonal networks into two-mode rotations and sign flips.

The nulling order follows the rectangular mesh of Clements et al. (2016),
specialised to real matrices: every elementary block is a V2(eta) beam
splitter with reflectivity eta in [0, 1],

    V2(eta) = [[eta, -sqrt(1-eta^2)], [sqrt(1-eta^2), eta]],

and pi phase shifters appear as single-mode sign flips. Elements are listed in
application order: reconstruct() left-multiplies them one after another.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotOrthogonal, NumericalError

TOL_ORTHOGONAL = 1e-10
TOL_RECONSTRUCT = 1e-12


@dataclass(frozen=True)
class Rotation:
    """V2(eta) acting on adjacent modes (mode, mode+1), 0-based."""

    mode: int
    eta: float


@dataclass(frozen=True)
class SignFlip:
    """pi phase shifter: multiplies one mode by -1."""

    mode: int


Element = Rotation | SignFlip


def v2(eta: float) -> np.ndarray:
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"reflectivity must lie in [0, 1], got {eta}")
    sigma = math.sqrt(max(0.0, 1.0 - eta * eta))
    return np.array([[eta, -sigma], [sigma, eta]])


def _embed_rotation(block: np.ndarray, mode: int, m: int) -> np.ndarray:
    M = np.eye(m)
    M[mode:mode + 2, mode:mode + 2] = block
    return M


def reconstruct(elements: list[Element], m: int) -> np.ndarray:
    """Ordered product of the embedded elements (first element applied first)."""
    M = np.eye(m)
    for el in elements:
        if isinstance(el, Rotation):
            if not 0 <= el.mode < m - 1:
                raise DomainError(f"rotation on modes ({el.mode}, {el.mode + 1}) "
                                  f"outside a {m}-mode network")
            M = _embed_rotation(v2(el.eta), el.mode, m) @ M
        elif isinstance(el, SignFlip):
            if not 0 <= el.mode < m:
                raise DomainError(f"sign flip on mode {el.mode} outside {m} modes")
            M[el.mode, :] *= -1.0
        else:
            raise DomainError(f"unknown element {el!r}")
    return M


def _rotation_elements(mode: int, cos_t: float, sin_t: float) -> list[Element]:
    """Express the rotation [[c, -s], [s, c]] on (mode, mode+1) as V2 + flips."""
    out: list[Element] = []
    if cos_t < 0.0:
        # R(theta) = R(theta -+ pi) * (-I2); flips applied first
        out.extend([SignFlip(mode), SignFlip(mode + 1)])
        cos_t, sin_t = -cos_t, -sin_t
    if abs(sin_t) < 1e-15 and abs(cos_t - 1.0) < 1e-15:
        return out
    eta = min(1.0, max(0.0, cos_t))
    if sin_t >= 0.0:
        out.append(Rotation(mode, eta))
    else:
        # R(-theta) = D V2 D with D the flip of the pair's first mode
        out.extend([SignFlip(mode), Rotation(mode, eta), SignFlip(mode)])
    return out


def decompose_orthogonal(T: np.ndarray, tol: float = TOL_ORTHOGONAL) -> list[Element]:
    """Rectangular-order decomposition of a real orthogonal matrix.

    Nulls below-diagonal entries along antidiagonals, alternating column
    (right-multiplied) and row (left-multiplied) Givens rotations, then folds
    the residual diagonal of +-1 into sign flips. The returned list satisfies
    reconstruct(elements, m) = T to 1e-12.
    """
    T = np.asarray(T, dtype=float)
    m = T.shape[0]
    if T.ndim != 2 or T.shape[1] != m:
        raise NotOrthogonal(f"expected a square matrix, got shape {T.shape}")
    if np.abs(T @ T.T - np.eye(m)).max() > tol:
        raise NotOrthogonal("matrix is not orthogonal within tolerance")

    U = T.copy()
    left: list[tuple[int, float, float]] = []   # (row, cos, sin) of applied Givens
    right: list[tuple[int, float, float]] = []  # (col, cos, sin)

    for i in range(1, m):
        if i % 2 == 1:
            for j in range(i):
                r, c = m - j - 1, i - j - 1
                a, b = U[r, c], U[r, c + 1]
                norm = math.hypot(a, b)
                if abs(a) < 1e-14 or norm < 1e-14:
                    continue
                ch, sh = b / norm, a / norm
                G = np.array([[ch, sh], [-sh, ch]])   # [a, b] @ G = [0, norm]
                U[:, c:c + 2] = U[:, c:c + 2] @ G
                right.append((c, ch, sh))
        else:
            for j in range(1, i + 1):
                r, c = m + j - i - 1, j - 1
                a, b = U[r - 1, c], U[r, c]
                norm = math.hypot(a, b)
                if abs(b) < 1e-14 or norm < 1e-14:
                    continue
                ch, sh = a / norm, b / norm
                G = np.array([[ch, sh], [-sh, ch]])   # G @ [a, b]^T = [norm, 0]
                U[r - 1:r + 1, :] = G @ U[r - 1:r + 1, :]
                left.append((r - 1, ch, sh))

    diag = np.diagonal(U)
    if np.abs(U - np.diag(diag)).max() > 1e-10 or np.abs(np.abs(diag) - 1.0).max() > 1e-10:
        raise NumericalError("nulling sweep did not reduce the matrix to a sign diagonal")

    # T = l1^T ... lp^T . diag . rq^T ... r1^T, so in application order the
    # right transposes come first (r1^T onward), then the sign diagonal, then
    # the left transposes last-recorded-first.
    elements: list[Element] = []
    for c, ch, sh in right:
        # transpose of [[ch, sh], [-sh, ch]] is the rotation with sin = +sh
        elements.extend(_rotation_elements(c, ch, sh))
    for mode, d in enumerate(diag):
        if d < 0.0:
            elements.append(SignFlip(mode))
    for r, ch, sh in reversed(left):
        elements.extend(_rotation_elements(r, ch, sh))

    err = float(np.abs(reconstruct(elements, m) - T).max())
    if err > TOL_RECONSTRUCT:
        raise NumericalError(f"round-trip error {err:.3e} exceeds {TOL_RECONSTRUCT}")
    return elements


def reconstruction_error(elements: list[Element], T: np.ndarray) -> float:
    return float(np.abs(reconstruct(elements, T.shape[0]) - np.asarray(T)).max())


def rotation_count(elements: list[Element]) -> int:
    return sum(isinstance(el, Rotation) for el in elements)


def reflectivity_report(elements: list[Element], digits: int = 4) -> list[float]:
    """Sorted reflectivities of the nontrivial rotations, rounded for comparison."""
    etas = [float(el.eta) for el in elements
            if isinstance(el, Rotation) and el.eta < 1.0 - 1e-12]
    return sorted(round(eta, digits) for eta in etas)


def elements_to_json(elements: list[Element]) -> str:
    """JSON list; mode indices 1-based on the wire."""
    out = []
    for el in elements:
        if isinstance(el, Rotation):
            out.append({"type": "rotation", "modes": [el.mode + 1, el.mode + 2],
                        "eta": el.eta})
        else:
            out.append({"type": "sign", "mode": el.mode + 1})
    return json.dumps(out, indent=2)


def elements_from_json(text: str) -> list[Element]:
    elements: list[Element] = []
    for item in json.loads(text):
        if item["type"] == "rotation":
            lo, hi = item["modes"]
            if hi != lo + 1:
                raise DomainError(f"rotation modes must be adjacent, got {item['modes']}")
            elements.append(Rotation(int(lo) - 1, float(item["eta"])))
        elif item["type"] == "sign":
            elements.append(SignFlip(int(item["mode"]) - 1))
        else:
            raise DomainError(f"unknown element type {item['type']!r}")
    return elements


def circuit_listing(elements: list[Element]) -> str:
    """Human-readable one-line-per-element circuit description."""
    lines = []
    for i, el in enumerate(elements, 1):
        if isinstance(el, Rotation):
            lines.append(f"{i:3d}. V2(eta={el.eta:.6f}) on modes ({el.mode + 1}, {el.mode + 2})")
        else:
            lines.append(f"{i:3d}. pi flip on mode {el.mode + 1}")
    return "\n".join(lines)
