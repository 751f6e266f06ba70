"""Photon occupation vectors, dense for small systems and sparse up to 2**18 modes."""

from __future__ import annotations

import json
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import DomainError, TooLarge

# Above this mode count .dense() refuses to materialise a full vector.
DENSE_LIMIT = 1 << 16


class OccupationVector:
    """Immutable photon counts per mode, stored as a sparse mode -> count map.

    Mode indices are 0-based internally; the JSON wire format and CLI strings
    use 1-based indices.
    """

    __slots__ = ("modes", "_counts", "total")

    def __init__(self, modes: int, counts: Mapping[int, int] | Iterable[tuple[int, int]]):
        if modes < 1:
            raise DomainError(f"mode count must be positive, got {modes}")
        items = dict(counts)
        for mode, count in items.items():
            if not 0 <= mode < modes:
                raise DomainError(f"mode index {mode} outside [0, {modes})")
            if count < 0:
                raise DomainError(f"negative photon count {count} in mode {mode}")
        self.modes = modes
        self._counts = {mode: int(c) for mode, c in sorted(items.items()) if c > 0}
        self.total = sum(self._counts.values())

    @classmethod
    def from_dense(cls, counts: Iterable[int]) -> "OccupationVector":
        arr = list(counts)
        return cls(len(arr), {i: c for i, c in enumerate(arr) if c})

    @property
    def counts(self) -> dict[int, int]:
        return dict(self._counts)

    def count(self, mode: int) -> int:
        return self._counts.get(mode, 0)

    def occupied(self) -> list[int]:
        """Sorted indices of modes holding at least one photon."""
        return list(self._counts)

    def dense(self) -> np.ndarray:
        if self.modes > DENSE_LIMIT:
            raise TooLarge(f"refusing dense view of {self.modes} modes")
        arr = np.zeros(self.modes, dtype=np.int64)
        for mode, c in self._counts.items():
            arr[mode] = c
        return arr

    def is_single_photon(self) -> bool:
        return all(c == 1 for c in self._counts.values())

    def permuted(self, perm: Iterable[int]) -> "OccupationVector":
        """Relabel modes: photon count of mode j moves to position perm[j]."""
        p = list(perm)
        return OccupationVector(self.modes, {p[m]: c for m, c in self._counts.items()})

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(self._counts.items())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, OccupationVector)
            and other.modes == self.modes
            and other._counts == self._counts
        )

    def __hash__(self) -> int:
        return hash((self.modes, tuple(self._counts.items())))

    def __repr__(self) -> str:
        if self.modes <= 24:
            return f"OccupationVector({''.join(str(self.count(i)) for i in range(self.modes))})"
        return f"OccupationVector(modes={self.modes}, occ={self._counts})"

    def to_json(self) -> str:
        """Sparse JSON line: {"modes": m, "occ": [[index, count], ...]}, 1-based."""
        occ = [[mode + 1, c] for mode, c in self._counts.items()]
        return json.dumps({"modes": self.modes, "occ": occ})

    @classmethod
    def from_json(cls, line: str) -> "OccupationVector":
        data = json.loads(line)
        return cls(int(data["modes"]), {int(i) - 1: int(c) for i, c in data["occ"]})


def parse_occupation(text: str, modes: int) -> OccupationVector:
    """Parse a CLI occupation string.

    Digit-per-mode form ("1100") for modes <= 64; sparse "idx:count,idx:count"
    (1-based indices) at any size.
    """
    text = text.strip()
    if ":" in text:
        counts: dict[int, int] = {}
        for chunk in text.split(","):
            idx, _, val = chunk.partition(":")
            mode = int(idx) - 1
            if not 0 <= mode < modes:
                raise DomainError(f"mode index {idx} outside [1, {modes}]")
            counts[mode] = counts.get(mode, 0) + int(val)
        return OccupationVector(modes, counts)
    if modes > 64:
        raise DomainError("digit-per-mode strings only supported for m <= 64; use idx:count form")
    if len(text) != modes:
        raise DomainError(f"occupation string has {len(text)} digits, expected {modes}")
    if not text.isdigit():
        raise DomainError(f"occupation string must be digits, got {text!r}")
    return OccupationVector.from_dense(int(ch) for ch in text)
