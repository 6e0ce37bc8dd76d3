"""Random-coding lower bounds on the rate of union-free and disjunctive codes.

All logarithms are base 2, so rates are in bits per test.  The bounds come
from the ensemble of ``t x n`` matrices whose columns are uniform among the
columns of weight ``p t``; ``p`` is then chosen to maximise the bound.

The inner problems are solved numerically: a dense lattice over the weight
fractions followed by coordinate-wise golden-section refinement, and the
same for the outer search over ``p``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .core import InputError

LN2 = math.log(2.0)
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
# strict-inequality guard for membership tests on computed rates
MEMBERSHIP_GUARD = 1e-6
# slack for lattice comparisons such as alpha1 + alpha0 - alpha >= 0
_EPS = 1e-12

FAMILIES = ("uffd_eq", "uf_eq", "disjunctive", "uffd_le", "uf_le")


# entropy and the union-weight exponent


def _h(x):
    """Binary entropy without range checks; 0 outside the open unit interval."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = (x > 0) & (x < 1)
    xm = x[m]
    out[m] = -xm * np.log2(xm) - (1 - xm) * np.log2(1 - xm)
    return out


def entropy(x):
    """Binary entropy ``h(x)``, with ``h(0) = h(1) = 0``."""
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any() or (arr < 0).any() or (arr > 1).any():
        raise InputError("entropy is defined on [0, 1]")
    out = _h(arr)
    return float(out) if out.ndim == 0 else out


def _xh(x, u):
    """``x * h(u / x)``, taken as 0 where ``x == 0``."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * _h(np.clip(u / safe, 0.0, 1.0)), 0.0)


def _q_of_y(s: int, Q: float, y):
    # Q * (1 - y**s) / (1 - y), written as a polynomial so y -> 1 is harmless
    acc = np.ones_like(y)
    for _ in range(s - 1):
        acc = acc * y + 1.0
    return Q * acc


def _invert_q(s: int, Q: float, q):
    q = np.asarray(q, dtype=float)
    lo = np.zeros_like(q)
    hi = np.ones_like(q)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        above = _q_of_y(s, Q, mid) > q
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return 0.5 * (lo + hi)


def invert_q(s: int, Q: float, q: float) -> float:
    """The ``y`` in (0, 1) with ``Q (1 - y**s) / (1 - y) = q``."""
    if s < 2:
        raise InputError("invert_q needs s >= 2")
    # the guard keeps decimal endpoints such as 3 * 0.2 out of the open interval
    if not (0 < Q < 1 and Q + 1e-12 < q < min(1.0, s * Q) - 1e-12):
        raise InputError(f"q = {q} outside ({Q}, {min(1.0, s * Q)})")
    y = float(_invert_q(s, Q, np.array(q)))
    if abs(float(_q_of_y(s, Q, np.array(y))) - q) > 1e-12:
        raise ArithmeticError("bisection did not converge")
    return y


def _A(s: int, Q: float, q):
    """Vectorised exponent; +inf outside the support."""
    q = np.asarray(q, dtype=float)
    if s == 0:
        return np.where(np.abs(q) <= _EPS, 0.0, np.inf)
    if s == 1:
        return np.where(np.abs(q - Q) <= 1e-9, 0.0, np.inf)
    ok = (q > Q) & (q < min(1.0, s * Q))
    qq = np.where(ok, q, 0.5 * (Q + min(1.0, s * Q)))
    # keep y off the endpoints, where the log terms are 0 * inf
    y = np.clip(_invert_q(s, Q, qq), 1e-300, np.nextafter(1.0, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        one_q = np.where(qq < 1, (1 - qq) * np.log2(np.where(qq < 1, 1 - qq, 1.0)), 0.0)
        val = (
            one_q
            + qq * math.log2(Q)
            + s * (qq - Q) * np.log2(y)
            + (s * Q - qq) * np.log2(1 - y)
            + s * float(_h(Q))
        )
    return np.where(ok, np.maximum(val, 0.0), np.inf)


def exponent_A(s: int, Q: float, q: float) -> float:
    """Exponent of ``P(|union of s weight-QN columns| = qN)`` as ``N`` grows.

    ``s = 1`` is a point mass at ``q = Q``; ``s = 0`` at ``q = 0``.
    """
    if s < 0 or not 0 < Q < 1:
        raise InputError("need s >= 0 and 0 < Q < 1")
    v = float(_A(s, Q, np.array(q, dtype=float)))
    if math.isinf(v):
        raise InputError(f"q = {q} is not an attainable union weight for s = {s}, Q = {Q}")
    return max(v, 0.0)


@dataclass(frozen=True)
class WeightDistTable:
    """Exact law of the weight of a union of ``s`` uniform weight-``w`` columns of length ``t``."""

    t: int
    s: int
    w: int
    probabilities: dict[int, Fraction]

    def neg_log2_rate(self, k: int) -> float:
        """``-log2 P(k) / t``."""
        pr = self.probabilities.get(k, Fraction(0))
        if pr == 0:
            return math.inf
        return -(math.log2(pr.numerator) - math.log2(pr.denominator)) / self.t


def weight_dist(t: int, s: int, w: int) -> WeightDistTable:
    """Add columns one at a time: from union weight ``m`` a new column brings
    ``i`` fresh ones in ``C(t-m, i) C(m, w-i)`` of its ``C(t, w)`` choices."""
    if not (1 <= w <= t and s >= 1):
        raise InputError("need 1 <= w <= t and s >= 1")
    counts = {w: math.comb(t, w)}
    for _ in range(s - 1):
        nxt: dict[int, int] = {}
        for m, c in counts.items():
            for i in range(max(0, w - m), min(w, t - m) + 1):
                ways = math.comb(t - m, i) * math.comb(m, w - i)
                if ways:
                    nxt[m + i] = nxt.get(m + i, 0) + c * ways
        counts = nxt
    total = math.comb(t, w) ** s
    return WeightDistTable(t, s, w, {k: Fraction(c, total) for k, c in sorted(counts.items())})


# the union-free exponent for a pair of d-sets sharing d0 columns


@dataclass(frozen=True)
class AlphaPoint:
    """Weight fractions of the two unions (alpha), of the shared part
    (alpha0) and of the two private parts (alpha1, alpha2)."""

    alpha: float
    alpha0: float
    alpha1: float
    alpha2: float

    def binomials_valid(self, tol: float = 1e-9) -> bool:
        a, a0 = self.alpha, self.alpha0
        if not (-tol <= a0 <= a + tol and a <= 1 + tol):
            return False
        return all(-tol <= ai + a0 - a <= a0 + tol and -tol <= ai <= 1 + tol for ai in (self.alpha1, self.alpha2))

    def is_feasible(self, d: int, d0: int, p: float, tol: float = 1e-9) -> bool:
        a = self.alpha
        if not (p - tol <= a <= min(d * p, 1.0) + tol) or not self.binomials_valid(tol):
            return False
        if d0 == 0:
            ok0 = abs(self.alpha0) <= tol
        elif d0 == 1:
            ok0 = abs(self.alpha0 - p) <= tol
        else:
            ok0 = p - tol <= self.alpha0 <= min(d0 * p, a, 1.0) + tol
        s = d - d0
        hi = min(s * p, a, 1.0)
        ok1 = all(p - tol <= ai <= hi + tol for ai in (self.alpha1, self.alpha2))
        if s == 1:
            ok1 = all(abs(ai - p) <= tol for ai in (self.alpha1, self.alpha2))
        return ok0 and ok1


def f_bin_h(p: float, point: AlphaPoint) -> float:
    """Exponent of the binomial-coefficient factor for a bad pair with the given weights."""
    if not 0 < p < 1:
        raise InputError("p must lie in (0, 1)")
    if not point.binomials_valid():
        raise InputError(f"infeasible weight fractions {point}")
    a, a0, a1, a2 = point.alpha, point.alpha0, point.alpha1, point.alpha2
    val = (
        _h(a)
        + _xh(a, a0)
        + _xh(a0, a1 + a0 - a)
        + _xh(a0, a2 + a0 - a)
        - _h(a0)
        - _h(a1)
        - _h(a2)
    )
    return float(val)


def _objective(d: int, d0: int, p: float, a: float, a0: float, a1: float) -> float:
    """Log-probability exponent of a bad pair with ``alpha2 = alpha1``; -inf if infeasible."""
    s = d - d0
    if not (p - _EPS <= a <= min(d * p, 1.0) + _EPS):
        return -math.inf
    frac = a1 + a0 - a
    if frac < -_EPS or frac > a0 + _EPS or a0 > a + _EPS:
        return -math.inf
    A0 = float(_A(d0, p, a0))
    A1 = float(_A(s, p, a1))
    if math.isinf(A0) or math.isinf(A1):
        return -math.inf
    v = _h(a) + _xh(a, a0) - _h(a0) - A0 + 2.0 * (_xh(a0, max(frac, 0.0)) - _h(a1) - A1)
    return float(v)


def _lattice(lo: float, hi: float, step: float) -> np.ndarray:
    """Points strictly inside (lo, hi) on the lattice lo + (k + 1/2) step."""
    if hi <= lo:
        return np.empty(0)
    k = int(math.floor((hi - lo) / step - 0.5 + 1e-9)) + 1
    if k <= 0:
        return np.array([0.5 * (lo + hi)])
    return lo + (np.arange(k) + 0.5) * step


def golden_max(f: Callable[[float], float], lo: float, hi: float, iters: int = 20) -> tuple[float, float]:
    """Golden-section search for the maximum of a unimodal ``f`` on ``[lo, hi]``."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _grid_max(d: int, d0: int, p: float, step: float):
    """Best lattice point ``(value, alpha, alpha0, alpha1)``."""
    s = d - d0
    alphas = _lattice(p, min(d * p, 1.0), step)
    if alphas.size == 0:
        return -math.inf, None
    if d0 == 0:
        vals = -_h(alphas) - 2.0 * _A(d, p, alphas)
        i = int(np.argmax(vals))
        return float(vals[i]), (alphas[i], 0.0, alphas[i])
    a0s = np.array([p]) if d0 == 1 else _lattice(p, min(d0 * p, 1.0), step)
    a1s = np.array([p]) if s == 1 else _lattice(p, min(s * p, 1.0), step)
    if a0s.size == 0 or a1s.size == 0:
        return -math.inf, None
    A0 = _A(d0, p, a0s) if d0 >= 2 else np.zeros(1)
    A1 = _A(s, p, a1s) if s >= 2 else np.zeros(1)
    h0, h1 = _h(a0s), _h(a1s)
    g1 = -h1 - A1
    chunk = max(1, 4_000_000 // (a0s.size * a1s.size))
    best, arg = -math.inf, None
    for start in range(0, alphas.size, chunk):
        a = alphas[start : start + chunk, None, None]
        A0g = a0s[None, :, None]
        A1g = a1s[None, None, :]
        frac = A1g + A0g - a
        ok = (frac >= -_EPS) & (A1g <= a + _EPS)
        g = np.where(ok, _xh(A0g, np.maximum(frac, 0.0)) + g1[None, None, :], -np.inf)
        jbest = np.argmax(g, axis=2)
        gmax = np.take_along_axis(g, jbest[..., None], axis=2)[..., 0]
        a2 = a[..., 0]
        base = _h(a2) + _xh(a2, a0s[None, :]) - h0[None, :] - A0[None, :]
        base = np.where(a0s[None, :] <= a2 + _EPS, base, -np.inf)
        tot = base + 2.0 * gmax
        if not np.isfinite(tot).any():
            continue
        ia, i0 = np.unravel_index(int(np.argmax(tot)), tot.shape)
        if tot[ia, i0] > best:
            best = float(tot[ia, i0])
            arg = (float(alphas[start + ia]), float(a0s[i0]), float(a1s[jbest[ia, i0]]))
    return best, arg


def _refine(d: int, d0: int, p: float, x, iters: int, sweeps: int = 4):
    """Coordinate-wise golden-section ascent from a lattice point."""
    s = d - d0
    a, a0, a1 = x
    if d0 == 0:
        fx = lambda v: _objective(d, 0, p, v, 0.0, v)
        lo, hi = p, min(d * p, 1.0)
        xa, fa = golden_max(fx, max(lo, a - 0.05), min(hi, a + 0.05), iters)
        cur = fx(a)
        return (xa, 0.0, xa, fa) if fa > cur else (a, 0.0, a, cur)
    best = _objective(d, d0, p, a, a0, a1)
    for _ in range(sweeps):
        start = best
        # alpha
        lo = max(p, a0, a1)
        hi = min(d * p, 1.0, a0 + a1)
        if hi - lo > 1e-12:
            v, fv = golden_max(lambda u: _objective(d, d0, p, u, a0, a1), lo, hi, iters)
            if fv > best:
                a, best = v, fv
        if d0 >= 2:
            lo = max(p, a - a1)
            hi = min(d0 * p, 1.0, a)
            if hi - lo > 1e-12:
                v, fv = golden_max(lambda u: _objective(d, d0, p, a, u, a1), lo, hi, iters)
                if fv > best:
                    a0, best = v, fv
        if s >= 2:
            lo = max(p, a - a0)
            hi = min(s * p, 1.0, a)
            if hi - lo > 1e-12:
                v, fv = golden_max(lambda u: _objective(d, d0, p, a, a0, u), lo, hi, iters)
                if fv > best:
                    a1, best = v, fv
        if best - start < 1e-13:
            break
    return a, a0, a1, best


@dataclass(frozen=True)
class R1Result:
    d0: int
    value: float
    argmax: AlphaPoint | None


@lru_cache(maxsize=100_000)
def _r1_cached(d: int, d0: int, p: float, step: float, iters: int) -> R1Result:
    M, arg = _grid_max(d, d0, p, step)
    if arg is None or not math.isfinite(M):
        return R1Result(d0, math.inf, None)
    if iters > 0:
        a, a0, a1, M2 = _refine(d, d0, p, arg, iters)
        if M2 > M:
            M, arg = M2, (a, a0, a1)
    a, a0, a1 = arg
    return R1Result(d0, -M / (2 * d - d0 - 1), AlphaPoint(a, a0, a1, a1))


@dataclass(frozen=True)
class Grid:
    """Resolution of the numerical optimisers."""

    p_step: float = 0.005
    p_lo: float = 0.01
    p_hi: float = 0.99
    alpha_step: float = 0.002
    scan_alpha_step: float = 0.01
    refine_iters: int = 20
    p_refine_iters: int = 20

    def doubled(self) -> "Grid":
        return Grid(
            self.p_step / 2,
            self.p_lo,
            self.p_hi,
            self.alpha_step / 2,
            self.scan_alpha_step / 2,
            self.refine_iters,
            self.p_refine_iters,
        )


DEFAULT_GRID = Grid()


def rate_r1(d: int, d0: int, p: float, grid: Grid = DEFAULT_GRID, *, fine: bool = True) -> R1Result:
    """Rate at which bad pairs sharing ``d0`` columns stay rare, for column weight ``p t``.

    Returns ``+inf`` when no weight fractions are feasible.
    """
    if d < 2 or not 0 <= d0 <= d - 1:
        raise InputError("need d >= 2 and 0 <= d0 <= d - 1")
    if not 0 < p < 1:
        raise InputError("p must lie in (0, 1)")
    if fine:
        return _r1_cached(d, d0, float(p), grid.alpha_step, grid.refine_iters)
    return _r1_cached(d, d0, float(p), grid.scan_alpha_step, 0)


def r1_profile(d: int, p: float, grid: Grid = DEFAULT_GRID, *, fine: bool = True) -> list[R1Result]:
    return [rate_r1(d, d0, p, grid, fine=fine) for d0 in range(d)]


def rate_r2(d: int, p: float) -> float:
    """Largest rate for which a typical outcome still covers few columns."""
    if d < 2 or not 0 < p < 1:
        raise InputError("need d >= 2 and 0 < p < 1")
    return float(_h(p) - d * p * _h(1.0 / d))


def beta(d: int, p: float, R: float) -> float:
    """Exponent ``beta`` with ``P(weight-p column covered by a dpt-set) = n ** beta`` at rate ``R``."""
    if R <= 0:
        raise InputError("R must be positive")
    return float((d * p * _h(1.0 / d) - _h(p)) / R)


def _cap(v: float) -> float:
    return min(v, 1.0)


def rate_eq_at(d: int, p: float, family: str = "uffd_eq", grid: Grid = DEFAULT_GRID, *, fine: bool = True) -> float:
    """Per-``p`` lower bound for ``(=d)`` codes (before maximising over ``p``)."""
    r1 = min(r.value for r in r1_profile(d, p, grid, fine=fine))
    if family == "uf_eq":
        return _cap(r1)
    if family == "uffd_eq":
        return _cap(min(r1, rate_r2(d, p)))
    raise InputError(f"family must be uf_eq or uffd_eq, got {family!r}")


# disjunctive codes from the same ensemble


def _rd_objective(d: int, p: float, a):
    return _A(d, p, a) + _h(p) - _xh(a, np.full_like(np.asarray(a, dtype=float), p))


@lru_cache(maxsize=100_000)
def _rd_cached(d: int, p: float, step: float, iters: int) -> tuple[float, float | None]:
    if d == 1:
        return float(_h(p)), p
    alphas = _lattice(p, min(d * p, 1.0), step)
    if alphas.size == 0:
        return math.inf, None
    vals = _rd_objective(d, p, alphas)
    i = int(np.argmin(vals))
    a, v = float(alphas[i]), float(vals[i])
    if iters > 0:
        lo, hi = max(p, a - step), min(d * p, 1.0, a + step)
        x, fx = golden_max(lambda u: -float(_rd_objective(d, p, np.array(u))), lo, hi, iters)
        if -fx < v:
            a, v = x, -fx
    return v / d, a


def rate_disjunctive_at(d: int, p: float, grid: Grid = DEFAULT_GRID) -> float:
    """Random-coding bound for ``d``-disjunctive codes at column weight ``p t``.

    A union of ``d`` columns with weight ``alpha t`` covers a further column
    with probability ``C(alpha t, p t) / C(t, p t)``; the bound keeps the
    expected number of such events below ``n``.
    """
    if d < 1 or not 0 < p < 1:
        raise InputError("need d >= 1 and 0 < p < 1")
    return _cap(_rd_cached(d, float(p), grid.alpha_step / 10, grid.refine_iters)[0])


def rate_le_at(d: int, p: float, grid: Grid = DEFAULT_GRID, *, fine: bool = True) -> float:
    """Per-``p`` bound for ``(<=d)`` codes: ``(=d)`` union-freeness plus ``(d-1)``-disjunctness."""
    r1 = min(r.value for r in r1_profile(d, p, grid, fine=fine))
    return _cap(min(rate_disjunctive_at(d - 1, p, grid), r1))


def in_membership_set(d: int, p: float, value: float) -> bool:
    """Whether ``p`` qualifies for the ``(<=d)`` fast-decoding bound."""
    return value < rate_r2(d, p) - MEMBERSHIP_GUARD


# maximisation over p


def maximize_over_p(
    scan: Callable[[float], float],
    fine: Callable[[float], float],
    grid: Grid = DEFAULT_GRID,
    threads: int = 1,
) -> tuple[float, float]:
    """Coarse scan of ``scan`` over the p-lattice, then golden-section on ``fine`` around the best point."""
    ps = np.round(np.arange(grid.p_lo, grid.p_hi + 1e-9, grid.p_step), 10)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(threads) as ex:
            vals = np.array(list(ex.map(scan, ps)))
    else:
        vals = np.array([scan(float(p)) for p in ps])
    if not np.isfinite(vals).any() or np.max(vals) == -np.inf:
        return math.nan, -math.inf
    i = int(np.argmax(vals))
    p0 = float(ps[i])
    f0 = fine(p0)
    lo, hi = max(grid.p_lo, p0 - grid.p_step), min(grid.p_hi, p0 + grid.p_step)
    p1, f1 = golden_max(fine, lo, hi, grid.p_refine_iters)
    return (p1, f1) if f1 > f0 else (p0, f0)


@dataclass
class D0Entry:
    d0: int
    r1: float
    alpha: float | None
    alpha0: float | None
    alpha1: float | None
    alpha2: float | None


@dataclass
class BoundResult:
    family: str
    d: int
    rate: float | None
    p_opt: float | None
    r2: float | None = None
    beta: float | None = None
    per_d0: list[D0Entry] = field(default_factory=list)
    components: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "d": self.d,
            "rate": self.rate,
            "p_opt": self.p_opt,
            "r2": self.r2,
            "beta": self.beta,
            "per_d0": [asdict(e) for e in self.per_d0],
            "components": dict(self.components),
            "grid": dict(self.grid),
            "diagnostics": dict(self.diagnostics),
        }


def _d0_entries(d: int, p: float, grid: Grid) -> list[D0Entry]:
    out = []
    for r in r1_profile(d, p, grid):
        pt = r.argmax
        if pt is None:
            out.append(D0Entry(r.d0, r.value, None, None, None, None))
        else:
            out.append(D0Entry(r.d0, r.value, pt.alpha, pt.alpha0, pt.alpha1, pt.alpha2))
    return out


def _finish(res: BoundResult, d: int, grid: Grid) -> BoundResult:
    p = res.p_opt
    if p is not None and d >= 2:
        res.r2 = rate_r2(d, p)
        if res.rate is not None and res.rate > 0:
            res.beta = beta(d, p, res.rate)
    res.grid = asdict(grid)
    return res


def bound_eq(d: int, family: str = "uffd_eq", grid: Grid = DEFAULT_GRID, threads: int = 1) -> BoundResult:
    """Maximise the ``(=d)`` bound over ``p``."""
    if d < 2:
        raise InputError("d must be at least 2")
    if family not in ("uf_eq", "uffd_eq"):
        raise InputError(f"family must be uf_eq or uffd_eq, got {family!r}")
    p, v = maximize_over_p(
        lambda q: rate_eq_at(d, q, family, grid, fine=False),
        lambda q: rate_eq_at(d, q, family, grid),
        grid,
        threads,
    )
    res = BoundResult(family, d, v, p, per_d0=_d0_entries(d, p, grid))
    res.components = {"r1": min(e.r1 for e in res.per_d0), "r2": rate_r2(d, p)}
    return _finish(res, d, grid)


def bound_disjunctive(d: int, p: float | None = None, grid: Grid = DEFAULT_GRID, threads: int = 1) -> BoundResult:
    """Disjunctive-code bound at a given ``p``, or maximised over ``p``."""
    if d < 1:
        raise InputError("d must be at least 1")
    if p is None:
        if d == 1:
            p, v = 0.5, 1.0
        else:
            f = lambda q: rate_disjunctive_at(d, q, grid)
            p, v = maximize_over_p(f, f, grid, threads)
    else:
        v = rate_disjunctive_at(d, p, grid)
    alpha = _rd_cached(d, float(p), grid.alpha_step / 10, grid.refine_iters)[1]
    res = BoundResult("disjunctive", d, v, p, components={"alpha": alpha})
    return _finish(res, d, grid)


def bound_le(d: int, family: str = "uffd_le", grid: Grid = DEFAULT_GRID, threads: int = 1) -> BoundResult:
    """Maximise the ``(<=d)`` bound over ``p``.

    For ``uffd_le`` only values of ``p`` whose per-``p`` bound lies strictly
    below :func:`rate_r2` are admitted; if none is, ``rate`` is ``None``.
    """
    if d < 2:
        raise InputError("d must be at least 2")
    if family not in ("uf_le", "uffd_le"):
        raise InputError(f"family must be uf_le or uffd_le, got {family!r}")

    def make(fine):
        def f(q):
            v = rate_le_at(d, q, grid, fine=fine)
            if family == "uffd_le" and not in_membership_set(d, q, v):
                return -math.inf
            return v

        return f

    p, v = maximize_over_p(make(False), make(True), grid, threads)
    if not math.isfinite(v):
        res = BoundResult(family, d, None, None)
        res.diagnostics["undefined"] = "no p on the grid satisfies the membership condition"
        return _finish(res, d, grid)
    res = BoundResult(family, d, v, p, per_d0=_d0_entries(d, p, grid))
    res.components = {
        "disjunctive_d-1": rate_disjunctive_at(d - 1, p, grid),
        "r1": min(e.r1 for e in res.per_d0),
        "r2": rate_r2(d, p),
        "member": in_membership_set(d, p, v),
    }
    return _finish(res, d, grid)


def bound(family: str, d: int, p: float | None = None, grid: Grid = DEFAULT_GRID, threads: int = 1) -> BoundResult:
    """Dispatch on family name; with ``p`` given, evaluate at that ``p`` only."""
    if family not in FAMILIES:
        raise InputError(f"unknown family {family!r}")
    if family == "disjunctive":
        return bound_disjunctive(d, p, grid, threads)
    if p is None:
        if family in ("uf_eq", "uffd_eq"):
            return bound_eq(d, family, grid, threads)
        return bound_le(d, family, grid, threads)
    if not 0 < p < 1:
        raise InputError("p must lie in (0, 1)")
    if family in ("uf_eq", "uffd_eq"):
        v = rate_eq_at(d, p, family, grid)
        res = BoundResult(family, d, v, p, per_d0=_d0_entries(d, p, grid))
    else:
        v = rate_le_at(d, p, grid)
        member = in_membership_set(d, p, v)
        res = BoundResult(family, d, v if (family == "uf_le" or member) else None, p, per_d0=_d0_entries(d, p, grid))
        res.components = {"disjunctive_d-1": rate_disjunctive_at(d - 1, p, grid), "member": member}
    return _finish(res, d, grid)


# large-d behaviour with Bernoulli columns


def _g_pair(d, p, a, a0):
    return (
        _h(a)
        + _xh(a, a0)
        + 2.0 * _xh(a0, p + a0 - a)
        - 2.0 * _h(p)
        + a0 * math.log2(1.0 - (1.0 - p) ** (d - 1))
        + (1.0 - a0) * (d - 1) * math.log1p(-p) / LN2
    )


def _g_list(d, p, a):
    a = np.asarray(a, dtype=float)
    return (
        _h(a)
        + 2.0 * _xh(a, np.full_like(a, p))
        - 2.0 * _h(p)
        + a * math.log2(1.0 - (1.0 - p) ** d)
        + (1.0 - a) * d * math.log1p(-p) / LN2
    )


def g_pair(d: int, p: float, alpha: float, alpha0: float) -> float:
    """Exponent for bad pairs sharing ``d - 1`` columns (private parts of weight ``p``)."""
    tol = 1e-12
    if d < 2 or not 0 < p < 1:
        raise InputError("need d >= 2 and 0 < p < 1")
    if not (p - tol <= alpha <= min(d * p, 1.0) + tol and max(p, alpha - p) - tol <= alpha0 <= alpha + tol):
        raise InputError(f"infeasible (alpha, alpha0) = ({alpha}, {alpha0})")
    return float(_g_pair(d, p, np.array(alpha), np.array(alpha0)))


def g_list(d: int, p: float, alpha: float) -> float:
    """Exponent for a ``d``-union covering two further columns."""
    tol = 1e-12
    if d < 2 or not 0 < p < 1:
        raise InputError("need d >= 2 and 0 < p < 1")
    if not p - tol <= alpha <= min(d * p, 1.0) + tol:
        raise InputError(f"alpha = {alpha} outside [p, min(dp, 1)]")
    return float(_g_list(d, p, np.array(alpha)))


def max_g_pair(d: int, p: float, n_alpha: int = 2001, n_u: int = 201, iters: int = 40) -> tuple[float, float, float]:
    """``(max, alpha, alpha0)`` with ``alpha0 = alpha - u p`` scanned over ``u`` in [0, 1]."""
    a = np.linspace(p, min(d * p, 1.0), n_alpha)[:, None]
    u = np.linspace(0.0, 1.0, n_u)[None, :]
    a0 = a - p * u
    g = np.where(a0 >= p, _g_pair(d, p, a, a0), -np.inf)
    i, j = np.unravel_index(int(np.argmax(g)), g.shape)
    best, x, x0 = float(g[i, j]), float(a[i, 0]), float(a0[i, j])
    f = lambda v, v0: float(_g_pair(d, p, np.array(v), np.array(v0)))
    for _ in range(6):
        lo, hi = max(p, x0), min(d * p, 1.0, x0 + p)
        if hi > lo:
            v, fv = golden_max(lambda s: f(s, x0), lo, hi, iters)
            if fv > best:
                x, best = v, fv
        lo, hi = max(p, x - p), x
        if hi > lo:
            v, fv = golden_max(lambda s: f(x, s), lo, hi, iters)
            if fv > best:
                x0, best = v, fv
    return best, x, x0


def max_g_list(d: int, p: float, n_alpha: int = 4001, iters: int = 40) -> tuple[float, float]:
    a = np.linspace(p, min(d * p, 1.0), n_alpha)
    g = _g_list(d, p, a)
    i = int(np.argmax(g))
    lo, hi = a[max(i - 1, 0)], a[min(i + 1, a.size - 1)]
    x, fx = golden_max(lambda s: float(_g_list(d, p, np.array(s))), lo, hi, iters)
    return (fx, x) if fx > g[i] else (float(g[i]), float(a[i]))


@dataclass
class AsymptoticReport:
    rows: list[dict]
    final_within: bool
    monotone: bool

    @property
    def ok(self) -> bool:
        return self.final_within and self.monotone


def asymptotic_check(d_list: Sequence[int], tolerance: float = 0.2) -> AsymptoticReport:
    """Evaluate ``d**2 * rate`` at ``p = ln 2 / d`` against its limit ``2 ln 2``."""
    d_list = list(d_list)
    if not d_list or min(d_list) < 10 or any(b <= a for a, b in zip(d_list, d_list[1:])):
        raise InputError("d_list must be increasing with every d >= 10")
    rows = []
    target = 2 * LN2
    for d in d_list:
        p = LN2 / d
        gp, a, a0 = max_g_pair(d, p)
        gl, al = max_g_list(d, p)
        r1, r2 = -gp / d, -gl / (d + 1)
        rate = min(r1, r2)
        b = beta(d, p, rate)
        rows.append(
            {
                "d": d,
                "p": p,
                "max_g_pair": gp,
                "argmax_pair": (a, a0),
                "max_g_list": gl,
                "argmax_list": al,
                "r1": r1,
                "r2": r2,
                "scaled_rate": d * d * rate,
                "distance": abs(d * d * rate - target),
                "beta": b,
                "beta_over_d": b / d,
            }
        )
    dist = [r["distance"] for r in rows]
    monotone = all(b <= a + 1e-12 for a, b in zip(dist, dist[1:]))
    return AsymptoticReport(rows, dist[-1] <= tolerance, monotone)
