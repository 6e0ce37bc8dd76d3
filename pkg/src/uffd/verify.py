"""Exhaustive checkers for the code properties used in group testing.

Every checker returns a :class:`PropertyReport`; when the property fails the
report carries the first counterexample in the fixed enumeration order
(subsets by increasing size, then lexicographic).  Witness indices are
1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterator

from .core import CodeMatrix, InputError, ResourceCapError, covered_columns, sum_mask

PROPERTIES = (
    "disjunctive",
    "uf_eq",
    "uf_le",
    "ssm",
    "list_decoding",
    "cover_cap",
    "uffd_eq",
    "uffd_le",
)

# subsets enumerated by a single check before refusing
MAX_SUBSETS = 5_000_000


@dataclass(frozen=True)
class PropertyReport:
    property: str
    holds: bool
    d: int
    witness: dict | None = None

    def __post_init__(self):
        if self.holds == (self.witness is not None):
            raise ValueError("witness must be present exactly when the property fails")

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {"property": self.property, "d": self.d, "holds": self.holds, "witness": self.witness}


def integer_root(n: int, d: int) -> int:
    """Largest ``m`` with ``m**d <= n``."""
    if n < 0 or d < 1:
        raise InputError("integer_root needs n >= 0 and d >= 1")
    m = int(round(n ** (1.0 / d)))
    while m > 0 and m**d > n:
        m -= 1
    while (m + 1) ** d <= n:
        m += 1
    return m


def _sizes(d: int, mode: str) -> range:
    if mode == "eq":
        return range(d, d + 1)
    if mode == "le":
        return range(0, d + 1)
    raise InputError(f"mode must be 'eq' or 'le', got {mode!r}")


def subsets(n: int, sizes, limit: int = MAX_SUBSETS) -> Iterator[tuple[int, ...]]:
    """0-based subsets of ``range(n)`` by increasing size, then lexicographic."""
    sizes = list(sizes)
    total = sum(comb(n, s) for s in sizes)
    if total > limit:
        raise ResourceCapError(f"{total} subsets exceed the enumeration limit {limit}")
    for s in sizes:
        yield from combinations(range(n), s)


def _one_based(D) -> list[int]:
    return [i + 1 for i in D]


def _check_d(C: CodeMatrix, d: int, strict: bool):
    if d < 1:
        raise InputError("d must be at least 1")
    if strict and d >= C.n:
        raise InputError(f"d = {d} must be smaller than n = {C.n}")
    if not strict and d > C.n:
        raise InputError(f"d = {d} exceeds n = {C.n}")


def is_disjunctive(C: CodeMatrix, d: int) -> PropertyReport:
    """No Boolean sum of ``d`` columns covers a column outside the set."""
    _check_d(C, d, strict=True)
    for D in subsets(C.n, [d]):
        r = sum_mask(C, D)
        for j in covered_columns(C, r):
            if j not in D:
                return PropertyReport("disjunctive", False, d, {"set": _one_based(D), "covered": j + 1})
    return PropertyReport("disjunctive", True, d)


def is_union_free(C: CodeMatrix, d: int, mode: str = "eq") -> PropertyReport:
    """Distinct sets of size exactly ``d`` (``eq``) or at most ``d`` (``le``) give distinct sums.

    In ``le`` mode the empty set takes part with the all-zero outcome.
    """
    sizes = _sizes(d, mode)
    _check_d(C, d, strict=False)
    name = f"uf_{mode}"
    seen: dict[int, tuple[int, ...]] = {}
    for D in subsets(C.n, sizes):
        r = sum_mask(C, D)
        prev = seen.setdefault(r, D)
        if prev is not D:
            return PropertyReport(name, False, d, {"first": _one_based(prev), "second": _one_based(D)})
    return PropertyReport(name, True, d)


def is_ssm(C: CodeMatrix, d: int) -> PropertyReport:
    """Strong ``d``-separability.

    Every ``D'`` with the same sum as ``D0`` lies inside the covered set
    ``K`` of that sum, and if some such ``D'`` misses ``i`` then so does
    ``K - {i}`` (its sum is still ``r``).  So ``D0`` fails exactly when
    ``OR(K - {i}) == r`` for some ``i`` in ``D0``, and that set is the witness.
    """
    _check_d(C, d, strict=False)
    for D0 in subsets(C.n, [d]):
        r = sum_mask(C, D0)
        K = covered_columns(C, r)
        for i in D0:
            rest = [j for j in K if j != i]
            if sum_mask(C, rest) == r:
                return PropertyReport("ssm", False, d, {"set": _one_based(D0), "alternative": _one_based(rest)})
    return PropertyReport("ssm", True, d)


def is_list_decoding(C: CodeMatrix, d: int, L: int) -> PropertyReport:
    """Each sum of ``d`` columns covers at most ``L - 1`` columns outside the set."""
    _check_d(C, d, strict=True)
    if L < 1:
        raise InputError("list size L must be at least 1")
    for D in subsets(C.n, [d]):
        extra = [j for j in covered_columns(C, sum_mask(C, D)) if j not in D]
        if len(extra) > L - 1:
            return PropertyReport("list_decoding", False, d, {"set": _one_based(D), "covered": _one_based(extra)})
    return PropertyReport("list_decoding", True, d)


def cover_cap_ok(C: CodeMatrix, d: int, mode: str = "eq") -> PropertyReport:
    """Every achievable outcome covers at most ``floor(n ** (1/d))`` columns."""
    sizes = _sizes(d, mode)
    _check_d(C, d, strict=False)
    cap = integer_root(C.n, d)
    counts: dict[int, int] = {}
    for D in subsets(C.n, sizes):
        r = sum_mask(C, D)
        if r not in counts:
            counts[r] = len(covered_columns(C, r))
        if counts[r] > cap:
            return PropertyReport("cover_cap", False, d, {"set": _one_based(D), "count": counts[r], "cap": cap})
    return PropertyReport("cover_cap", True, d)


def is_uffd(C: CodeMatrix, d: int, mode: str = "eq") -> PropertyReport:
    """Union-free with fast decoding: union-free plus the cover cap."""
    for report in (is_union_free(C, d, mode), cover_cap_ok(C, d, mode)):
        if not report.holds:
            return PropertyReport(f"uffd_{mode}", False, d, {"failed": report.property, **report.witness})
    return PropertyReport(f"uffd_{mode}", True, d)


@dataclass
class StructureReport:
    d: int
    values: dict[str, bool] = field(default_factory=dict)
    assertions: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.assertions.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.assertions.items() if not v]


def check_structure_props(C: CodeMatrix, d: int) -> StructureReport:
    """Evaluate the implications and equivalences linking the code families.

    Requires ``2 <= d < n``.
    """
    if d < 2:
        raise InputError("structural checks need d >= 2")
    _check_d(C, d, strict=True)
    v = {
        "disjunctive_d": is_disjunctive(C, d).holds,
        "disjunctive_d-1": is_disjunctive(C, d - 1).holds,
        "ssm": is_ssm(C, d).holds,
        "uf_eq": is_union_free(C, d, "eq").holds,
        "uf_le": is_union_free(C, d, "le").holds,
        "uffd_eq": is_uffd(C, d, "eq").holds,
        "uffd_le": is_uffd(C, d, "le").holds,
    }

    def implies(a, b):
        return (not a) or b

    a = {
        "uf_le == uf_eq & disjunctive(d-1)": v["uf_le"] == (v["uf_eq"] and v["disjunctive_d-1"]),
        "uffd_le == uffd_eq & disjunctive(d-1)": v["uffd_le"] == (v["uffd_eq"] and v["disjunctive_d-1"]),
        "disjunctive => uffd_le": implies(v["disjunctive_d"], v["uffd_le"]),
        "uffd_le => uf_le": implies(v["uffd_le"], v["uf_le"]),
        "disjunctive => uffd_eq": implies(v["disjunctive_d"], v["uffd_eq"]),
        "uffd_eq => uf_eq": implies(v["uffd_eq"], v["uf_eq"]),
        "disjunctive => ssm": implies(v["disjunctive_d"], v["ssm"]),
        "ssm => uf_le": implies(v["ssm"], v["uf_le"]),
    }
    return StructureReport(d, v, a)
