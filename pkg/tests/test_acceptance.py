"""Acceptance criteria 1-10, each reported as one PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import itertools
import time
from decimal import Decimal, getcontext

import pytest

from mhcount import bounds
from mhcount.budgets import Budgets
from mhcount.counting import count_fast, count_infinity, count_naive
from mhcount.geometry import probe
from mhcount.harness import (INT_FIELDS, SweepSpec, csv_row, emit_reports, generate_records, process_record,
                             read_csv, run_sweep)
from mhcount.model import MHInstance, all_ones, eval_g

try:
    from conftest import ACCEPTANCE
except ImportError:  # pragma: no cover
    ACCEPTANCE = {}

SEED = 20240601
MAX_POINTS = 10**7
SWEEP_SPECS = [
    SweepSpec(primes=[5, 7, 11, 13], n_range=(3, 5), m_range=(2, 3), k_range=(2, 3)),
    SweepSpec(primes=[5, 7, 11, 13], n_range=(3, 5), m_range=(2, 4), k_range=(2, 3),
              coeff_mode="random", count=1, seed=SEED),
    SweepSpec(primes=[5, 7, 11, 13], extensions=[2], n_range=(3, 4), m_range=(2, 3),
              k_range=(2, 3), coeff_mode="random", count=1, seed=SEED),
    SweepSpec(primes=[5, 7], extensions=[2], n_range=(3, 4), m_range=(2, 3), k_range=(2, 2)),
]


def record(num, ok, detail):
    ACCEPTANCE[num] = (bool(ok), detail)
    if __name__ == "__main__":
        print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def sweep_records():
    out = []
    for spec in SWEEP_SPECS:
        for rec in generate_records(spec):
            p, s, n = (int(x) for x in rec.split()[:3])
            if (p**s) ** n <= MAX_POINTS and rec not in out:
                out.append(rec)
    return out


_SWEEP = {}


def get_sweep():
    if not _SWEEP:
        t0 = time.perf_counter()
        results = [process_record(r, True, Budgets(), (), True) for r in sweep_records()]
        _SWEEP["results"] = results
        _SWEEP["seconds"] = time.perf_counter() - t0
    return _SWEEP["results"], _SWEEP["seconds"]


@pytest.fixture(scope="module")
def sweep():
    return get_sweep()


def test_criterion_01_oracle_equivalence(sweep):
    results, secs = sweep
    covered = {(r.p, r.s, r.n) for r in results}
    span = ({r.p for r in results} == {5, 7, 11, 13} and {r.s for r in results} == {1, 2}
            and {r.n for r in results} == {3, 4, 5})
    mixed = any(set(r.coeffs) != {1} for r in results) and any(set(r.coeffs) == {1} for r in results)
    bad = [r.record for r in results
           if r.counts is None or r.counts.N_naive != r.counts.N
           or r.counts.N_star_ie != r.counts.N_star_direct]
    ok = len(results) >= 50 and span and mixed and not bad and secs < 300
    record(1, ok, f"{len(results)} instances, {len(covered)} (p,s,n) cells, "
                  f"{len(bad)} mismatches, {secs:.1f}s")


def test_criterion_02_main_estimate(sweep):
    results, _ = sweep
    verdicts = [r.verdict("main_estimate") for r in results if r.valid]
    worst = max(verdicts, key=lambda v: float(v.tightness))
    ok = all(v.passed for v in verdicts)
    record(2, ok, f"{sum(v.passed for v in verdicts)}/{len(verdicts)} PASS, "
                  f"max tightness {worst.tightness}")


def test_criterion_03_diagonal(sweep):
    results, _ = sweep
    checked = exact = 0
    failures = []
    for r in results:
        for i in range(1, r.n):
            v = r.verdict(f"diagonal_{i}")
            checked += 1
            if not v.passed:
                failures.append((r.record, i))
        if r.gcd == 1:
            q, n = r.q, r.n
            want = [q ** (n - i - 1) for i in range(1, n - 1)] + [1, 0]
            exact += 1
            if list(r.counts.N_i) != want:
                failures.append((r.record, "exact"))
    record(3, not failures, f"{checked} diagonal verdicts, {exact} gcd=1 exact checks, "
                            f"{len(failures)} failures")


def test_criterion_04_nstar(sweep):
    results, _ = sweep
    eligible = [r for r in results if r.valid and r.gcd == 1]
    integral = all(((r.q - 1) ** r.n - (-1) ** r.n) % r.q == 0 for r in eligible)
    passed = sum(r.verdict("nstar").passed for r in eligible)
    worst = max((r.verdict("nstar").tightness for r in eligible), key=float)
    ok = eligible and integral and passed == len(eligible)
    record(4, ok, f"{passed}/{len(eligible)} PASS, main term integral: {integral}, "
                  f"max tightness {worst}")


def test_criterion_05_projective(sweep):
    results, _ = sweep
    consistent = all(r.counts.count_pcl == r.counts.N + r.counts.count_infinity for r in results)
    pcl_ok = all(r.verdict("pcl_bound").passed for r in results)
    inf_ok = all(r.verdict("infinity_deligne").passed for r in results)
    # oracle: scale-classes of nonzero affine zeros of the diagonal form
    inst = all_ones(5, 1, 3, 3, 2)
    ctx = inst.ctx
    zeros = sum(1 for x in itertools.product(range(5), repeat=3)
                if any(x) and ctx.sub(eval_g(inst, x), inst.a) == 0)
    oracle = zeros // 4
    ok = consistent and pcl_ok and inf_ok and oracle == 6 and count_infinity(inst) == 6
    record(5, ok, f"pcl = N + inf: {consistent}, pcl bound: {pcl_ok}, infinity bound: {inf_ok}, "
                  f"q=5 infinity count {count_infinity(inst)} (oracle {oracle})")


def test_criterion_06_identity():
    t0 = time.perf_counter()
    qs = list(range(2, 1001)) + [10**6]
    bad = [(q, n) for q in qs for n in range(1, 21) if not bounds.identity_truncated_sum(q, n)]
    secs = time.perf_counter() - t0
    record(6, not bad and secs < 10, f"{len(qs) * 20} (q,n) pairs, {len(bad)} failures, {secs:.2f}s")


def _probe_problems(summary):
    out = []
    if summary.unclassified:
        out.append("unclassified")
    if summary.one_zero:
        out.append("one_zero")
    if not summary.infinity_nonsingular:
        out.append("infinity_singular")
    if not summary.pcl_no_singular_at_infinity:
        out.append("pcl_singular_at_infinity")
    return out


def test_criterion_07_geometry(sweep):
    results, _ = sweep
    tally = dict.fromkeys(("unclassified", "one_zero", "infinity_singular",
                           "pcl_singular_at_infinity"), 0)
    r1 = r2 = 0
    for res in results:
        inst = MHInstance.from_record(res.record)
        if inst.degree < inst.n:
            continue
        exts = [1]
        if inst.ctx.s == 1 and inst.q ** (2 * inst.n) <= 2 * 10**6:
            exts.append(2)
        for r in exts:
            summary, _ = probe(inst, r, 10**7)
            r1 += r == 1
            r2 += r == 2
            for problem in _probe_problems(summary):
                tally[problem] += 1
    detail = f"r=1 on {r1} instances, r=2 on {r2}; " + ", ".join(f"{k}: {v}" for k, v in tally.items())
    record(7, r1 == len(results) and r2 >= 5 and not any(tally.values()), detail)


def test_criterion_08_existence(sweep):
    results, _ = sweep
    t1 = bounds.existence_threshold(3, 3, 2).threshold
    t2 = bounds.existence_threshold(5, 2, 3).threshold
    chain = [r.verdict("existence_chain") for r in results if r.n >= 5]
    getcontext().prec = 60
    literal = all(
        Decimal(r.counts.N_star_direct)
        >= Decimal(r.q - 2) ** r.n / r.q
        - 11 * Decimal(r.m * r.k) ** (r.n - 1) * Decimal(r.q) ** (r.n - 2) * Decimal(r.q).sqrt()
        for r in results if r.n >= 5)
    ok = t1 == 167961600 and t2 == 484 * 12**8 and chain and all(v.passed for v in chain) and literal
    record(8, ok, f"thresholds {t1}, {t2}; lower-bound chain PASS on "
                  f"{sum(v.passed for v in chain)}/{len(chain)} n>=5 instances")


def test_criterion_09_determinism(tmp_path):
    def once(tag):
        spec = SweepSpec(primes=[5, 7, 11], extensions=[1, 2], n_range=(3, 3), m_range=(2, 3),
                         k_range=(2, 3), coeff_mode="random", count=2, seed=SEED,
                         csv_path=str(tmp_path / f"{tag}.csv"))
        results = run_sweep(spec)
        emit_reports(results, spec.csv_path)
        return results, (tmp_path / f"{tag}.csv").read_bytes()

    res_a, bytes_a = once("a")
    _, bytes_b = once("b")
    rows = read_csv(tmp_path / "a.csv")
    counted = [r for r in res_a if r.counts is not None]
    round_trip = len(rows) == len(counted) and all(
        all(row[f] == csv_row(res)[f] for f in INT_FIELDS) for row, res in zip(rows, counted))
    record(9, bytes_a == bytes_b and round_trip,
           f"{len(rows)} rows, byte-identical: {bytes_a == bytes_b}, round trip: {round_trip}")


@pytest.mark.slow
def test_criterion_10_performance():
    inst = all_ones(11, 2, 4, 2, 3)
    t0 = time.perf_counter()
    fast = count_fast(inst)
    t_fast = time.perf_counter() - t0
    t0 = time.perf_counter()
    naive = count_naive(inst, budget=10**9)
    t_naive = time.perf_counter() - t0
    ratio = t_naive / t_fast
    record(10, fast == naive and ratio >= 20,
           f"q=121 n=4: fast {t_fast:.2f}s, naive {t_naive:.2f}s, speedup {ratio:.0f}x, N={fast}")


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    tests = [(name, fn) for name, fn in sorted(globals().items()) if name.startswith("test_criterion")]
    failed = 0
    for name, fn in tests:
        args = []
        if "sweep" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
            args.append(get_sweep())
        if "tmp_path" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
            args.append(Path(tempfile.mkdtemp()))
        try:
            fn(*args)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
