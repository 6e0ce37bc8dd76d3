"""Binary code matrices, Boolean sums and test outcomes.

A bit string of length ``t`` is stored as a Python ``int`` whose bit ``j``
is row ``j`` (0-based).  Columns of a :class:`CodeMatrix` are kept in that
packed form; item indices exposed to callers are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class InputError(ValueError):
    """Malformed or out-of-range input."""


class ResourceCapError(RuntimeError):
    """An enumeration would exceed the configured desk-scale limit."""


class ConstructionError(RuntimeError):
    """A random construction did not yield a valid code."""


def _parse_bits(x) -> tuple[int, int]:
    """Return ``(mask, length)`` for a string of 0/1, a 0/1 sequence or array."""
    if isinstance(x, str):
        if any(ch not in "01" for ch in x):
            raise InputError(f"bit string may only contain 0 and 1: {x!r}")
        seq = [int(ch) for ch in x]
    else:
        seq = [int(v) for v in np.asarray(x).ravel()]
        if any(v not in (0, 1) for v in seq):
            raise InputError("bit vector entries must be 0 or 1")
    mask = 0
    for j, v in enumerate(seq):
        if v:
            mask |= 1 << j
    return mask, len(seq)


def _unpack(mask: int, length: int) -> tuple[int, ...]:
    return tuple((mask >> j) & 1 for j in range(length))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def boolean_sum(columns: Iterable, length: int | None = None) -> tuple[int, ...]:
    """Positionwise OR of equal-length bit vectors.

    The empty sum is the all-zero vector; ``length`` must then be given.
    """
    acc, size = 0, length
    for col in columns:
        mask, n = _parse_bits(col)
        if size is None:
            size = n
        elif n != size:
            raise InputError(f"length mismatch: {n} != {size}")
        acc |= mask
    if size is None:
        raise InputError("length is required for an empty Boolean sum")
    return _unpack(acc, size)


def covers(x, y) -> bool:
    """True iff ``x OR y == x``."""
    xm, xn = _parse_bits(x)
    ym, yn = _parse_bits(y)
    if xn != yn:
        raise InputError(f"length mismatch: {xn} != {yn}")
    return xm | ym == xm


def weight(x) -> int:
    """Number of ones."""
    return popcount(_parse_bits(x)[0])


@dataclass(frozen=True)
class Outcome:
    """Test results ``r`` of a ``t``-test design."""

    mask: int
    t: int

    def __post_init__(self):
        if self.t < 1 or self.mask < 0 or self.mask >> self.t:
            raise InputError("outcome does not fit in t bits")

    @classmethod
    def from_bits(cls, bits) -> "Outcome":
        mask, t = _parse_bits(bits)
        return cls(mask, t)

    @property
    def bits(self) -> tuple[int, ...]:
        return _unpack(self.mask, self.t)

    @property
    def weight(self) -> int:
        return popcount(self.mask)

    def to_text(self) -> str:
        return "".join(map(str, self.bits)) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Outcome":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if len(lines) != 1:
            raise InputError("outcome file must hold exactly one line of 0/1")
        return cls.from_bits(lines[0])


@dataclass(frozen=True)
class CodeMatrix:
    """A ``t x n`` binary test design stored column-major.

    ``masks[i]`` is column ``i + 1`` packed as an integer.
    """

    t: int
    masks: tuple[int, ...]
    weight_hint: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "masks", tuple(int(m) for m in self.masks))
        if self.t < 1:
            raise InputError("t must be positive")
        if len(self.masks) < 1:
            raise InputError("a code needs at least one column")
        if any(m < 0 or m >> self.t for m in self.masks):
            raise InputError("column does not fit in t bits")
        if self.weight_hint is not None and any(
            popcount(m) != self.weight_hint for m in self.masks
        ):
            raise InputError(f"not every column has weight {self.weight_hint}")

    @property
    def n(self) -> int:
        return len(self.masks)

    @property
    def shape(self) -> tuple[int, int]:
        return self.t, self.n

    # construction helpers

    @classmethod
    def from_columns(cls, columns: Sequence, weight_hint: int | None = None) -> "CodeMatrix":
        parsed = [_parse_bits(c) for c in columns]
        if not parsed:
            raise InputError("a code needs at least one column")
        lengths = {n for _, n in parsed}
        if len(lengths) != 1:
            raise InputError("columns have different lengths")
        return cls(lengths.pop(), tuple(m for m, _ in parsed), weight_hint)

    @classmethod
    def from_array(cls, array, weight_hint: int | None = None) -> "CodeMatrix":
        """Build from a ``t x n`` 0/1 array (rows are tests)."""
        arr = np.asarray(array)
        if arr.ndim != 2:
            raise InputError("expected a 2-D array")
        if not np.isin(arr, (0, 1)).all():
            raise InputError("array entries must be 0 or 1")
        return cls.from_columns([arr[:, i] for i in range(arr.shape[1])], weight_hint)

    @classmethod
    def identity(cls, n: int) -> "CodeMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.t, self.n), dtype=np.uint8)
        for i, m in enumerate(self.masks):
            out[:, i] = _unpack(m, self.t)
        return out

    def column(self, i: int) -> tuple[int, ...]:
        """Column ``i`` (1-based) as a bit tuple."""
        self._check_index(i)
        return _unpack(self.masks[i - 1], self.t)

    def weights(self) -> list[int]:
        return [popcount(m) for m in self.masks]

    def select(self, indices: Iterable[int]) -> "CodeMatrix":
        """Submatrix keeping the given 1-based columns, in the given order."""
        idx = list(indices)
        for i in idx:
            self._check_index(i)
        return CodeMatrix(self.t, tuple(self.masks[i - 1] for i in idx), self.weight_hint)

    def delete(self, i: int) -> "CodeMatrix":
        self._check_index(i)
        return self.select(j for j in range(1, self.n + 1) if j != i)

    def _check_index(self, i: int):
        if not 1 <= i <= self.n:
            raise InputError(f"item index {i} outside [1, {self.n}]")

    # text format: "t n" header, then t rows of n characters

    def to_text(self) -> str:
        arr = self.to_array()
        rows = ["".join(map(str, row)) for row in arr]
        return f"{self.t} {self.n}\n" + "\n".join(rows) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CodeMatrix":
        lines = text.splitlines()
        if not lines:
            raise InputError("empty matrix file")
        header = lines[0].split(" ")
        if len(header) != 2 or not all(h.isdigit() for h in header):
            raise InputError("first line must be 't n'")
        t, n = map(int, header)
        rows = lines[1:]
        if len(rows) != t:
            raise InputError(f"expected {t} rows, found {len(rows)}")
        for j, row in enumerate(rows):
            if len(row) != n or any(ch not in "01" for ch in row):
                raise InputError(f"row {j + 1} must be exactly {n} characters from {{0,1}}")
        if n < 1 or t < 1:
            raise InputError("t and n must be positive")
        masks = [0] * n
        for j, row in enumerate(rows):
            for i, ch in enumerate(row):
                if ch == "1":
                    masks[i] |= 1 << j
        return cls(t, tuple(masks))

    @classmethod
    def load(cls, path) -> "CodeMatrix":
        return cls.from_text(Path(path).read_text())

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())


def check_defective_set(C: CodeMatrix, D: Iterable[int]) -> tuple[int, ...]:
    """Validate a 1-based defective set and return it sorted."""
    items = tuple(sorted(int(i) for i in D))
    if len(set(items)) != len(items):
        raise InputError("defective indices must be unique")
    for i in items:
        C._check_index(i)
    return items


def sum_mask(C: CodeMatrix, D: Iterable[int]) -> int:
    """Packed Boolean sum of 0-based columns ``D``; no validation."""
    acc = 0
    masks = C.masks
    for i in D:
        acc |= masks[i]
    return acc


def outcome_for_set(C: CodeMatrix, D: Iterable[int]) -> Outcome:
    """Outcome ``r = OR of c_i for i in D``; the empty set gives all zeros."""
    items = check_defective_set(C, D)
    return Outcome(sum_mask(C, (i - 1 for i in items)), C.t)


def covered_columns(C: CodeMatrix, r: Outcome | int) -> list[int]:
    """0-based indices of the columns covered by ``r``."""
    rm = r.mask if isinstance(r, Outcome) else r
    return [i for i, m in enumerate(C.masks) if m | rm == rm]
