"""Exact counts of affine and projective solutions.

``count_naive`` evaluates ``f`` at every point and is the ground-truth oracle.
``count_fast`` fixes a prefix ``(x_1, ..., x_{n-1})`` and counts the distinct
roots of the univariate ``P(X) = (C + a_n X^m)^k - D X`` with
``C = a + sum a_i x_i^m`` and ``D = b x_1...x_{n-1}``.  ``P`` depends on the
prefix only through ``(C, D)``, so prefixes are tallied by that pair and each
distinct pair is root-counted once.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .budgets import Budgets, check_budget
from .field import FieldCtx, mth_power_root_count
from .model import MHInstance, batch_f, batch_prod, point_chunks
from .unipoly import batch_distinct_root_counts

_PAIR_BLOCK = 1 << 15


@dataclass
class ValueDistribution:
    """``table[v]`` counts the points mapping to code ``v``."""

    table: np.ndarray
    total: int

    def __post_init__(self):
        if int(self.table.sum()) != self.total:
            raise AssertionError("value distribution does not sum to its total")


@dataclass
class CountReport:
    N: int
    N_star_direct: int
    N_star_ie: int
    N_i: tuple[int, ...]
    N_eq: int
    count_infinity: int
    count_pcl: int
    zero_pattern_symmetric: bool
    N_naive: int | None = None
    timing: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.N_star_direct != self.N_star_ie:
            raise AssertionError(
                f"N* mismatch: direct {self.N_star_direct} vs inclusion-exclusion {self.N_star_ie}")
        if self.count_pcl != self.N + self.count_infinity:
            raise AssertionError("projective count is not N + count at infinity")
        if self.N_naive is not None and self.N_naive != self.N:
            raise AssertionError(f"fast count {self.N} disagrees with naive count {self.N_naive}")


def _run_partitioned(fn, inst, total: int, workers: int, *extra):
    """Sum ``fn(inst, lo, hi, *extra)`` over a contiguous split of ``range(total)``."""
    workers = max(1, min(workers, total))
    bounds = [total * w // workers for w in range(workers + 1)]
    parts = list(zip(bounds[:-1], bounds[1:]))
    if workers == 1:
        return [fn(inst, lo, hi, *extra) for lo, hi in parts]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, inst, lo, hi, *extra) for lo, hi in parts]
        return [f.result() for f in futures]


# -- naive oracle ----------------------------------------------------------------

def _naive_range(inst: MHInstance, lo: int, hi: int) -> int:
    total = 0
    for coords in point_chunks(inst.q, inst.n, lo, hi):
        total += int(np.count_nonzero(batch_f(inst, coords) == 0))
    return total


def count_naive(inst: MHInstance, budget: int | None = None, workers: int = 1) -> int:
    """Number of points of F_q^n with ``f = 0``, by evaluating every point."""
    budget = Budgets.from_env().naive_evals if budget is None else budget
    total = inst.q**inst.n
    check_budget("naive count", total, budget)
    return sum(_run_partitioned(_naive_range, inst, total, workers))


def count_naive_nonzero(inst: MHInstance, budget: int | None = None) -> int:
    """Brute-force count over ``(F_q^*)^n``; oracle for the N* counters."""
    budget = Budgets.from_env().naive_evals if budget is None else budget
    check_budget("naive nonzero count", (inst.q - 1) ** inst.n, budget)
    alphabet = np.arange(1, inst.q)
    return sum(int(np.count_nonzero(batch_f(inst, c) == 0))
               for c in point_chunks(inst.q, inst.n, alphabet=alphabet))


# -- fast prefix counter -----------------------------------------------------------

def _prefix_hist_range(inst: MHInstance, lo: int, hi: int, nonzero: bool):
    ctx, q, n = inst.ctx, inst.q, inst.n
    alphabet = np.arange(1, q) if nonzero else None
    powm = ctx.power_table(inst.m)
    dense = q * q <= 1 << 22
    hist = np.zeros(q * q, dtype=np.int64) if dense else Counter()
    for coords in point_chunks(q, n - 1, lo, hi, alphabet=alphabet):
        c = np.full(coords.shape[1], inst.a, dtype=np.int64)
        for ai, xi in zip(inst.a_coeffs[:-1], coords):
            c = ctx.vadd(c, ctx.vmul(ai, powm[xi]))
        d = ctx.vmul(inst.b, batch_prod(ctx, coords))
        keys = c * q + d
        if dense:
            hist += np.bincount(keys, minlength=q * q)
        else:
            uniq, cnt = np.unique(keys, return_counts=True)
            hist.update(dict(zip(uniq.tolist(), cnt.tolist())))
    return hist


def prefix_histogram(inst: MHInstance, nonzero: bool = False, workers: int = 1) -> dict[tuple[int, int], int]:
    """Tally of prefixes by their ``(C, D)`` pair."""
    q = inst.q
    base = q - 1 if nonzero else q
    parts = _run_partitioned(_prefix_hist_range, inst, base ** (inst.n - 1), workers, nonzero)
    out: Counter = Counter()
    for part in parts:
        if isinstance(part, np.ndarray):
            nz = np.flatnonzero(part)
            out.update(dict(zip(nz.tolist(), part[nz].tolist())))
        else:
            out.update(part)
    return {divmod(key, q): cnt for key, cnt in out.items()}


def specialization_polys(inst: MHInstance, C: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Coefficient stack of ``(C + a_n X^m)^k - D X`` for each pair, degree ``mk``."""
    ctx, m, k = inst.ctx, inst.m, inst.k
    C = np.asarray(C, dtype=np.int64)
    out = np.zeros((len(C), m * k + 1), dtype=np.int64)
    an = inst.a_coeffs[-1]
    for j in range(k + 1):
        scal = ctx.mul(ctx.element(math.comb(k, j)), ctx.pow(an, j))
        out[:, m * j] = ctx.vmul(scal, ctx.vpow(C, k - j))
    out[:, 1] = ctx.vsub(out[:, 1], np.asarray(D, dtype=np.int64))
    return out


def pair_root_counts(inst: MHInstance, pairs) -> dict[tuple[int, int], int]:
    """Distinct roots in F_q of the specialization for each ``(C, D)`` pair."""
    if inst.a_coeffs[-1] == 0:
        raise ValueError("the fast counter needs a_n != 0")
    pairs = sorted(pairs)
    out = {}
    for lo in range(0, len(pairs), _PAIR_BLOCK):
        block = pairs[lo : lo + _PAIR_BLOCK]
        C = np.array([c for c, _ in block], dtype=np.int64)
        D = np.array([d for _, d in block], dtype=np.int64)
        roots = batch_distinct_root_counts(inst.ctx, specialization_polys(inst, C, D))
        out.update(zip(block, roots.tolist()))
    return out


def _fast_budget(inst: MHInstance, budget: int | None) -> None:
    budget = Budgets.from_env().fast_prefixes if budget is None else budget
    check_budget("fast count", inst.q ** (inst.n - 1), budget)


def count_fast(inst: MHInstance, budget: int | None = None, workers: int = 1) -> int:
    _fast_budget(inst, budget)
    hist = prefix_histogram(inst, nonzero=False, workers=workers)
    roots = pair_root_counts(inst, hist)
    return sum(cnt * roots[pair] for pair, cnt in hist.items())


def count_nonzero_direct(inst: MHInstance, budget: int | None = None, workers: int = 1) -> int:
    """Solutions in ``(F_q^*)^n``: per prefix, drop the root ``X = 0`` (present iff ``C = 0``)."""
    _fast_budget(inst, budget)
    hist = prefix_histogram(inst, nonzero=True, workers=workers)
    roots = pair_root_counts(inst, hist)
    return sum(cnt * (roots[(c, d)] - (c == 0)) for (c, d), cnt in hist.items())


# -- diagonal equations --------------------------------------------------------------

def _count_dtype(q: int, t: int):
    return np.int64 if q**t < 1 << 62 else object


def diagonal_distribution(ctx: FieldCtx, coeff: int, m: int) -> ValueDistribution:
    """``table[v] = #{x : coeff * x^m = v}``."""
    if coeff == 0:
        raise ValueError("diagonal coefficients must be nonzero")
    inv = ctx.inv(coeff)
    table = np.array([mth_power_root_count(ctx, m, ctx.mul(v, inv)) for v in range(ctx.q)],
                     dtype=np.int64)
    return ValueDistribution(table, ctx.q)


def convolve(ctx: FieldCtx, A: ValueDistribution, B: ValueDistribution) -> ValueDistribution:
    """Additive convolution ``out[w] = sum_u A[u] B[w - u]``, naive O(q^2)."""
    q = ctx.q
    dtype = np.int64 if A.total * B.total < 1 << 62 else object
    codes = np.arange(q, dtype=np.int64)
    out = np.zeros(q, dtype=dtype)
    bt = B.table.astype(dtype)
    for u in np.flatnonzero(A.table):
        out[ctx.vadd(int(u), codes)] += A.table[u] * bt
    return ValueDistribution(out, A.total * B.total)


def count_diagonal(ctx: FieldCtx, coeffs, m: int, rhs: int) -> int:
    """Solutions of ``c_1 x_1^m + ... + c_t x_t^m = rhs``."""
    coeffs = list(coeffs)
    if not coeffs:
        raise ValueError("need at least one variable")
    dist = diagonal_distribution(ctx, coeffs[0], m)
    for c in coeffs[1:]:
        dist = convolve(ctx, dist, diagonal_distribution(ctx, c, m))
    return int(dist.table[rhs])


def count_zero_pattern(inst: MHInstance, zero_set) -> int:
    """Solutions with ``x_j = 0`` for every ``j`` in ``zero_set`` (0-based).

    With at least one zero coordinate the right-hand side vanishes and the
    equation reduces to ``g = 0`` on the remaining coordinates.
    """
    zero_set = set(zero_set)
    if not zero_set or not zero_set <= set(range(inst.n)):
        raise ValueError(f"zero set must be a nonempty subset of 0..{inst.n - 1}")
    rest = [c for j, c in enumerate(inst.a_coeffs) if j not in zero_set]
    if not rest:
        return 1 if inst.a == 0 else 0
    return _diag_cached(inst, tuple(sorted(rest)))


_DIAG_CACHE: dict = {}


def _diag_cached(inst: MHInstance, rest: tuple[int, ...]) -> int:
    key = (inst.ctx, inst.m, inst.a, rest)
    if key not in _DIAG_CACHE:
        if len(_DIAG_CACHE) > 4096:
            _DIAG_CACHE.clear()
        _DIAG_CACHE[key] = count_diagonal(inst.ctx, rest, inst.m, inst.ctx.neg(inst.a))
    return _DIAG_CACHE[key]


def count_Ni(inst: MHInstance, i: int, subset=None) -> int:
    """``N_i``: solutions with the first ``i`` coordinates zero, or with ``subset`` zero."""
    if not 1 <= i <= inst.n:
        raise ValueError(f"i must lie in 1..{inst.n}, got {i}")
    zero_set = range(i) if subset is None else subset
    if len(set(zero_set)) != i:
        raise ValueError(f"subset must have exactly {i} elements")
    return count_zero_pattern(inst, zero_set)


def zero_pattern_sum(inst: MHInstance) -> tuple[int, bool]:
    """``(N^=, symmetric)`` by inclusion-exclusion over zero sets.

    Zero sets are grouped by the multiset of surviving coefficients, so the
    sum is exact for any coefficients.  ``symmetric`` reports whether all
    zero sets of each size give the same count, the condition under which a
    single ``N_i`` per size is enough.
    """
    classes = sorted(Counter(inst.a_coeffs).items())
    values = [v for v, _ in classes]
    mult = [c for _, c in classes]
    total = 0
    seen: dict[int, set[int]] = {}
    for picks in itertools.product(*(range(c + 1) for c in mult)):
        size = sum(picks)
        if size == 0:
            continue
        ways = math.prod(math.comb(c, s) for c, s in zip(mult, picks))
        rest = tuple(v for v, c, s in zip(values, mult, picks) for _ in range(c - s))
        cnt = _diag_cached(inst, rest) if rest else (1 if inst.a == 0 else 0)
        total += (-1) ** (size + 1) * ways * cnt
        seen.setdefault(size, set()).add(cnt)
    return total, all(len(v) == 1 for v in seen.values())


def count_nonzero_ie(inst: MHInstance, N: int | None = None, budget: int | None = None,
                     workers: int = 1) -> int:
    """``N^* = N - N^=``."""
    if N is None:
        N = count_fast(inst, budget, workers)
    n_eq, symmetric = zero_pattern_sum(inst)
    if symmetric:
        binom_form = sum((-1) ** (i + 1) * math.comb(inst.n, i) * count_Ni(inst, i)
                         for i in range(1, inst.n + 1))
        if binom_form != n_eq:
            raise AssertionError("symmetric zero patterns but binomial form disagrees")
    return N - n_eq


# -- projective counts -----------------------------------------------------------------

def count_infinity(inst: MHInstance) -> int:
    """Projective points of ``a_1 X_1^m + ... + a_n X_n^m = 0`` in P^{n-1}(F_q)."""
    affine = count_diagonal(inst.ctx, inst.a_coeffs, inst.m, 0)
    quo, rem = divmod(affine - 1, inst.q - 1)
    if rem:
        raise AssertionError(f"(affine count - 1) = {affine - 1} not divisible by q - 1")
    return quo


def count_pcl(inst: MHInstance, N: int | None = None, infinity: int | None = None) -> int:
    if N is None:
        N = count_fast(inst)
    if infinity is None:
        infinity = count_infinity(inst)
    return N + infinity


def count_report(inst: MHInstance, budgets: Budgets | None = None, workers: int = 1,
                 naive: bool = True) -> CountReport:
    """All counts for one instance.

    The naive cross-check runs when ``naive`` is set and ``q^n`` fits the
    naive budget.  Raises ``BudgetExceeded`` if the fast counters do not fit.
    """
    budgets = Budgets.from_env() if budgets is None else budgets
    timing = {}
    _fast_budget(inst, budgets.fast_prefixes)

    t0 = time.perf_counter()
    hist = prefix_histogram(inst, False, workers)
    hist_nz = prefix_histogram(inst, True, workers)
    roots = pair_root_counts(inst, set(hist) | set(hist_nz))
    N = sum(cnt * roots[p] for p, cnt in hist.items())
    N_star_direct = sum(cnt * (roots[(c, d)] - (c == 0)) for (c, d), cnt in hist_nz.items())
    timing["fast"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    n_eq, symmetric = zero_pattern_sum(inst)
    N_i = tuple(count_Ni(inst, i) for i in range(1, inst.n + 1))
    N_star_ie = count_nonzero_ie(inst, N)
    inf = count_infinity(inst)
    timing["diagonal"] = time.perf_counter() - t0

    N_naive = None
    if naive and inst.q**inst.n <= budgets.naive_evals:
        t0 = time.perf_counter()
        N_naive = count_naive(inst, budgets.naive_evals, workers)
        timing["naive"] = time.perf_counter() - t0

    return CountReport(
        N=N, N_star_direct=N_star_direct, N_star_ie=N_star_ie, N_i=N_i, N_eq=n_eq,
        count_infinity=inf, count_pcl=N + inf, zero_pattern_symmetric=symmetric,
        N_naive=N_naive, timing=timing,
    )
