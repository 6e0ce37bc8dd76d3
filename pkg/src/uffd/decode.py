"""Decoders for non-adaptive group testing.

``comp_decode`` and ``dd_decode`` are the classical one-pass decoders.
``uffd_decode`` is the two-step decoder for union-free codes with fast
decoding: COMP, then a search over subsets of the candidates only.
``brute_uf_decode`` searches all subsets of the items and is kept as the
reference for the two-step decoder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .core import CodeMatrix, InputError, Outcome, covered_columns, sum_mask
from .verify import _sizes, subsets


@dataclass(frozen=True)
class DecodeResult:
    status: str  # "exact", "candidates_only" or "failure"
    defectives: tuple[int, ...] | None
    candidates: tuple[int, ...]
    cover_tests: int = 0
    subset_evaluations: int = 0

    @property
    def operations_counted(self) -> int:
        return self.cover_tests + self.subset_evaluations

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "defectives": None if self.defectives is None else list(self.defectives),
            "candidates": list(self.candidates),
            "operations": self.operations_counted,
        }


def _check_outcome(C: CodeMatrix, r: Outcome):
    if r.t != C.t:
        raise InputError(f"outcome has {r.t} bits, code has {C.t} tests")


def comp_decode(C: CodeMatrix, r: Outcome) -> tuple[int, ...]:
    """1-based indices of all columns covered by ``r``."""
    _check_outcome(C, r)
    return tuple(i + 1 for i in covered_columns(C, r))


def dd_decode(C: CodeMatrix, r: Outcome) -> tuple[int, ...]:
    """COMP candidates that are the only candidate in some positive test."""
    cand = comp_decode(C, r)
    found = set()
    for j in range(C.t):
        if not (r.mask >> j) & 1:
            continue
        hits = [i for i in cand if (C.masks[i - 1] >> j) & 1]
        if len(hits) == 1:
            found.add(hits[0])
    return tuple(sorted(found))


def _search(C: CodeMatrix, r: Outcome, pool: list[int], d: int, mode: str):
    """First subset of ``pool`` (0-based) in size/lexicographic order whose sum is ``r``."""
    evaluations = 0
    for s in _sizes(d, mode):
        for D in combinations(pool, s):
            evaluations += 1
            if sum_mask(C, D) == r.mask:
                return tuple(i + 1 for i in D), evaluations
    return None, evaluations


def uffd_decode(C: CodeMatrix, r: Outcome, d: int, mode: str = "eq") -> DecodeResult:
    """Two-step decoding: COMP candidates, then the first matching candidate subset.

    On a code that is not union-free the first match in the fixed order is
    returned; it need not be the true set.
    """
    if d < 1:
        raise InputError("d must be at least 1")
    _check_outcome(C, r)
    pool = covered_columns(C, r)
    found, evals = _search(C, r, pool, d, mode)
    cand = tuple(i + 1 for i in pool)
    status = "exact" if found is not None else "failure"
    return DecodeResult(status, found, cand, cover_tests=C.n, subset_evaluations=evals)


@lru_cache(maxsize=16)
def _outcome_table(C: CodeMatrix, d: int, mode: str):
    """Sums of every subset of ``[n]`` in enumeration order, shared across outcomes."""
    subs = list(subsets(C.n, _sizes(d, mode)))
    return subs, [sum_mask(C, D) for D in subs]


def brute_uf_decode(C: CodeMatrix, r: Outcome, d: int, mode: str = "eq") -> DecodeResult:
    """Same contract as :func:`uffd_decode` but searching subsets of all items.

    The ordered table of subset sums is built once per ``(C, d, mode)``; the
    number of evaluations reported is the position of the first match.
    """
    if d < 1:
        raise InputError("d must be at least 1")
    _check_outcome(C, r)
    cand = tuple(i + 1 for i in covered_columns(C, r))
    subs, outs = _outcome_table(C, d, mode)
    try:
        k = outs.index(r.mask)
    except ValueError:
        return DecodeResult("failure", None, cand, cover_tests=C.n, subset_evaluations=len(outs))
    found = tuple(i + 1 for i in subs[k])
    return DecodeResult("exact", found, cand, cover_tests=C.n, subset_evaluations=k + 1)


def decode(C: CodeMatrix, r: Outcome, d: int, mode: str = "eq", algorithm: str = "uffd") -> DecodeResult:
    """Dispatch by algorithm name: ``uffd``, ``brute``, ``comp`` or ``dd``."""
    if algorithm == "uffd":
        return uffd_decode(C, r, d, mode)
    if algorithm == "brute":
        return brute_uf_decode(C, r, d, mode)
    cand = comp_decode(C, r)
    if algorithm == "comp":
        return DecodeResult("candidates_only", None, cand, cover_tests=C.n)
    if algorithm == "dd":
        # DD output is exact only when it explains every positive test
        dd = dd_decode(C, r)
        exact = sum_mask(C, (i - 1 for i in dd)) == r.mask
        return DecodeResult("exact" if exact else "candidates_only", dd, cand, cover_tests=C.n)
    raise InputError(f"unknown algorithm {algorithm!r}")


@dataclass
class TrialSummary:
    trials: int
    successes: int
    failures: int
    mismatches: int
    max_candidates: int
    max_operations: int
    max_subset_evaluations: int
    seed: int
    mode: str
    d: int
    sizes: dict[int, int] = field(default_factory=dict)

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    @property
    def authoritative(self) -> bool:
        """False when some decode matched the outcome with a wrong set."""
        return self.mismatches == 0

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "failures": self.failures,
            "mismatches": self.mismatches,
            "authoritative": self.authoritative,
            "max_candidates": self.max_candidates,
            "max_operations": self.max_operations,
            "max_subset_evaluations": self.max_subset_evaluations,
            "seed": self.seed,
            "mode": self.mode,
            "d": self.d,
        }


def random_defective_set(n: int, d: int, mode: str, rng: np.random.Generator) -> tuple[int, ...]:
    """Uniform over all sets of size ``d`` (eq) or of size at most ``d`` (le)."""
    sizes = list(_sizes(d, mode))
    weights = np.array([comb(n, s) for s in sizes], dtype=float)
    s = int(rng.choice(sizes, p=weights / weights.sum()))
    return tuple(sorted(int(i) + 1 for i in rng.choice(n, size=s, replace=False)))


def simulate_trials(C: CodeMatrix, d: int, mode: str = "eq", trials: int = 1000, seed: int = 0) -> TrialSummary:
    """Decode random defective sets with :func:`uffd_decode` and summarise.

    Trial ``k`` draws from its own generator seeded by ``(seed, k)``.
    """
    if trials < 1:
        raise InputError("trials must be positive")
    if d < 1 or d > C.n:
        raise InputError(f"d must lie in [1, n = {C.n}]")
    out = TrialSummary(trials, 0, 0, 0, 0, 0, 0, seed, mode, d)
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        D = random_defective_set(C.n, d, mode, rng)
        r = Outcome(sum_mask(C, (i - 1 for i in D)), C.t)
        res = uffd_decode(C, r, d, mode)
        if res.status != "exact":
            out.failures += 1
        elif res.defectives == D:
            out.successes += 1
        else:
            out.mismatches += 1
        out.sizes[len(D)] = out.sizes.get(len(D), 0) + 1
        out.max_candidates = max(out.max_candidates, len(res.candidates))
        out.max_operations = max(out.max_operations, res.operations_counted)
        out.max_subset_evaluations = max(out.max_subset_evaluations, res.subset_evaluations)
    return out
