"""Random code constructions with purification.

Two ensembles are provided: columns drawn uniformly among all columns of
weight ``floor(p t)``, and i.i.d. Bernoulli(p) entries followed by removal of
every column whose weight differs from ``floor(p t)``.  Purification deletes
columns until the target property holds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from math import floor

import numpy as np

from .core import CodeMatrix, ConstructionError, InputError, ResourceCapError, popcount
from .verify import cover_cap_ok, is_disjunctive, is_union_free, is_uffd

log = logging.getLogger(__name__)

KINDS = ("constant_weight", "bernoulli")
TARGETS = ("uffd_eq", "uffd_le", "disjunctive")

# refused for d >= 3 targets unless allow_large is set
MAX_T = 64
MAX_N = 128


def column_weight(p, t: int) -> int:
    """``floor(p t)`` in exact arithmetic (``p`` is read as its decimal form)."""
    frac = Fraction(str(p)) if isinstance(p, float) else Fraction(p)
    return floor(frac * t)


@dataclass(frozen=True)
class EnsembleSpec:
    t: int
    n_initial: int
    p: float
    d: int
    kind: str = "constant_weight"
    target: str = "uffd_eq"
    seed: int = 0
    max_retries: int = 10
    min_columns: int = 2
    allow_large: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"kind must be one of {KINDS}")
        if self.target not in TARGETS:
            raise InputError(f"target must be one of {TARGETS}")
        if not 0 < self.p < 1:
            raise InputError("p must lie in (0, 1)")
        if self.t < 1 or column_weight(self.p, self.t) < 1:
            raise InputError("floor(p t) must be at least 1")
        if self.n_initial < 2:
            raise InputError("n_initial must be at least 2")
        if self.d < 1 or self.max_retries < 0:
            raise InputError("d must be positive and max_retries non-negative")
        if self.d >= 3 and not self.allow_large and (self.t > MAX_T or self.n_initial > MAX_N):
            raise ResourceCapError(f"t > {MAX_T} or n > {MAX_N} with d >= 3 is beyond desk scale")

    @property
    def w(self) -> int:
        return column_weight(self.p, self.t)

    @property
    def mode(self) -> str:
        return "le" if self.target == "uffd_le" else "eq"


def random_matrix(spec: EnsembleSpec) -> CodeMatrix:
    rng = np.random.default_rng(spec.seed)
    t, n = spec.t, spec.n_initial
    if spec.kind == "constant_weight":
        masks = []
        for _ in range(n):
            rows = rng.choice(t, size=spec.w, replace=False)
            masks.append(sum(1 << int(j) for j in rows))
        return CodeMatrix(t, tuple(masks), spec.w)
    return CodeMatrix.from_array((rng.random((t, n)) < spec.p).astype(np.uint8))


def remove_bad_columns(C: CodeMatrix, p) -> CodeMatrix:
    """Keep only the columns of weight exactly ``floor(p t)``."""
    w = column_weight(p, C.t)
    keep = [i + 1 for i, m in enumerate(C.masks) if popcount(m) == w]
    if not keep:
        raise ConstructionError(f"no column of weight {w} survives")
    return CodeMatrix(C.t, tuple(C.masks[i - 1] for i in keep), w)


def _ensure_size(C: CodeMatrix, d: int, strict: bool = False):
    need = max(2, d + 1 if strict else d)
    if C.n < need:
        raise ConstructionError(f"only {C.n} columns survive purification")


def purify(C: CodeMatrix, d: int, mode: str = "eq", fast_decoding: bool = True) -> CodeMatrix:
    """Delete columns until ``C`` is union-free (and, by default, meets the cover cap).

    For a colliding pair the highest index of the symmetric difference goes;
    for an outcome over the cap, its highest covered index goes.
    """
    while True:
        _ensure_size(C, d)
        report = is_union_free(C, d, mode)
        if report.holds:
            break
        diff = set(report.witness["first"]) ^ set(report.witness["second"])
        C = C.delete(max(diff))
    if not fast_decoding:
        return C
    while True:
        _ensure_size(C, d)
        report = cover_cap_ok(C, d, mode)
        if report.holds:
            return C
        r = 0
        for i in report.witness["set"]:
            r |= C.masks[i - 1]
        covered = [i + 1 for i, m in enumerate(C.masks) if m | r == r]
        C = C.delete(max(covered))


def purify_disjunctive(C: CodeMatrix, d: int) -> CodeMatrix:
    """Delete covered columns until ``C`` is ``d``-disjunctive."""
    while True:
        _ensure_size(C, d, strict=True)
        report = is_disjunctive(C, d)
        if report.holds:
            return C
        C = C.delete(report.witness["covered"])


def check_target(C: CodeMatrix, spec: EnsembleSpec) -> bool:
    if spec.target == "disjunctive":
        return C.n > spec.d and is_disjunctive(C, spec.d).holds
    return C.n >= spec.d and is_uffd(C, spec.d, spec.mode).holds


def construct(spec: EnsembleSpec) -> CodeMatrix:
    """Sample, purify and verify; on failure retry with ``seed + 1`` up to ``max_retries`` times."""
    last_error = None
    for attempt in range(spec.max_retries + 1):
        trial = replace(spec, seed=spec.seed + attempt)
        try:
            C = random_matrix(trial)
            if spec.kind == "bernoulli":
                C = remove_bad_columns(C, spec.p)
            if spec.target == "disjunctive":
                C = purify_disjunctive(C, spec.d)
            else:
                C = purify(C, spec.d, spec.mode)
        except ConstructionError as exc:
            last_error = exc
            log.info("seed %d: %s", trial.seed, exc)
            continue
        if C.n < spec.min_columns:
            last_error = ConstructionError(f"seed {trial.seed}: {C.n} < {spec.min_columns} columns kept")
            log.info("%s", last_error)
            continue
        if not check_target(C, spec):
            # purification is supposed to make this unreachable
            last_error = ConstructionError(f"seed {trial.seed}: final verification failed")
            continue
        return C
    raise ConstructionError(f"no valid code after {spec.max_retries + 1} attempts: {last_error}")
