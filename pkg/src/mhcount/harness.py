"""Batch sweeps over instance families and report emission.

Coefficient draws use a 64-bit linear congruential generator so they are
reproducible without relying on any library RNG::

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64
    output = state >> 33

A nonzero code is ``output mod q``, redrawn while it is 0.  Each
``(p, s, n, m, k)`` tuple gets its own stream: starting from ``seed``, the
state is stepped once after xoring in each of ``p, s, n, m, k`` in turn.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import bounds
from .budgets import BudgetExceeded, Budgets
from .counting import CountReport, count_report
from .geometry import ProbeSummary, probe
from .model import MHInstance, check_hypotheses

LCG_MULT = 6364136223846793005
LCG_INC = 1442695040888963407
_MASK = (1 << 64) - 1

CSV_HEADER = ("p,s,q,n,m,k,coeffs,a,b,gcd_m_q1,N,Nstar,main_N,main_Nstar,err_N,err_Nstar,"
              "verdict_main,verdict_nstar,verdict_pcl,verdict_inf,tightness_main,"
              "tightness_nstar,existence_threshold,nstar_positive")
CSV_FIELDS = tuple(CSV_HEADER.split(","))
INT_FIELDS = ("p", "s", "q", "n", "m", "k", "a", "b", "gcd_m_q1", "N", "Nstar", "main_N",
              "main_Nstar", "err_N", "err_Nstar", "existence_threshold", "nstar_positive")

COEFF_MODES = ("all_ones", "random", "explicit")


class Lcg:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def step(self) -> int:
        self.state = (LCG_MULT * self.state + LCG_INC) & _MASK
        return self.state >> 33

    def nonzero_code(self, q: int) -> int:
        while True:
            v = self.step() % q
            if v:
                return v

    @classmethod
    def for_tuple(cls, seed: int, *key: int) -> Lcg:
        rng = cls(seed)
        for v in key:
            rng.state ^= v & _MASK
            rng.step()
        return rng


@dataclass
class SweepSpec:
    primes: list[int]
    extensions: list[int] = field(default_factory=lambda: [1])
    n_range: tuple[int, int] = (3, 3)
    m_range: tuple[int, int] = (2, 2)
    k_range: tuple[int, int] = (2, 2)
    coeff_mode: str = "all_ones"
    count: int = 1
    seed: int | None = None
    explicit: list[tuple[tuple[int, ...], int, int]] = field(default_factory=list)
    strict: bool = True
    budgets: Budgets = field(default_factory=Budgets)
    probe_ext: list[int] = field(default_factory=lambda: [1])
    naive_check: bool = True
    workers: int = 1
    csv_path: str | None = None
    jsonl_path: str | None = None

    def __post_init__(self):
        for name in ("n_range", "m_range", "k_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty: {lo}..{hi}")
        if not self.primes or not self.extensions:
            raise ValueError("primes and extensions must be nonempty")
        if self.coeff_mode not in COEFF_MODES:
            raise ValueError(f"coeff_mode must be one of {COEFF_MODES}")
        if self.coeff_mode == "random":
            if self.seed is None:
                raise ValueError("random coefficients need a seed")
            if self.count < 1:
                raise ValueError("random coefficients need count >= 1")
        if self.coeff_mode == "explicit" and not self.explicit:
            raise ValueError("explicit coefficient mode needs at least one coefficient set")


@dataclass
class InstanceResult:
    record: str
    p: int
    s: int
    q: int
    n: int
    m: int
    k: int
    coeffs: tuple[int, ...]
    a: int
    b: int
    flags: dict[str, bool]
    status: str = "ok"
    message: str = ""
    counts: CountReport | None = None
    verdicts: list[bounds.BoundVerdict] = field(default_factory=list)
    probes: list[ProbeSummary] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.flags["nonzero_coeffs"] and self.flags["p_not_div_mk"] and self.flags["mk_gt_n"]

    @property
    def gcd(self) -> int:
        return math.gcd(self.m, self.q - 1)

    def verdict(self, name: str) -> bounds.BoundVerdict | None:
        return next((v for v in self.verdicts if v.name == name), None)

    def failures(self) -> list[bounds.BoundVerdict]:
        return [v for v in self.verdicts if not v.hypothesis_violation and not v.passed]

    def to_json(self) -> str:
        data = asdict(self)
        if data["counts"] is not None:
            data["counts"].pop("timing", None)
        for v, obj in zip(data["verdicts"], self.verdicts):
            v["pass"] = obj.passed
        return json.dumps(data, sort_keys=True)


def hypothesis_flags(p: int, n: int, m: int, k: int, coeffs, q: int) -> dict[str, bool]:
    return {
        "nonzero_coeffs": all(c != 0 for c in coeffs),
        "p_not_div_mk": (m * k) % p != 0,
        "mk_gt_n": m * k > n,
        "gcd_m_q1_is_1": math.gcd(m, q - 1) == 1,
    }


def _range(r):
    return range(r[0], r[1] + 1)


def generate_records(spec: SweepSpec) -> list[str]:
    """The sweep's instance stream as serialized records, in sweep order."""
    out = []
    for p in sorted(set(spec.primes)):
        for s in sorted(set(spec.extensions)):
            q = p**s
            for n in _range(spec.n_range):
                for m in _range(spec.m_range):
                    for k in _range(spec.k_range):
                        for coeffs, a, b in _coefficient_sets(spec, p, s, n, m, k, q):
                            if spec.strict and check_hypotheses(p, n, m, k, (*coeffs, a, b)):
                                continue
                            c = ",".join(map(str, coeffs))
                            out.append(f"{p} {s} {n} {m} {k} {c} {a} {b}")
    return out


def _coefficient_sets(spec: SweepSpec, p, s, n, m, k, q):
    if spec.coeff_mode == "all_ones":
        yield (1,) * n, 1, 1
    elif spec.coeff_mode == "random":
        rng = Lcg.for_tuple(spec.seed, p, s, n, m, k)
        for _ in range(spec.count):
            coeffs = tuple(rng.nonzero_code(q) for _ in range(n))
            yield coeffs, rng.nonzero_code(q), rng.nonzero_code(q)
    else:
        for coeffs, a, b in spec.explicit:
            if len(coeffs) == n and all(c < q for c in (*coeffs, a, b)):
                yield tuple(coeffs), a, b


def evaluate_instance(inst: MHInstance, report: CountReport) -> list[bounds.BoundVerdict]:
    q, n, m, k = inst.q, inst.n, inst.m, inst.k
    valid = inst.valid
    out = [
        bounds.verdict_main(q, n, m, k, report.N, valid),
        bounds.verdict_pcl(q, n, m, k, report.count_pcl, valid),
        bounds.verdict_infinity(q, n, m, k, report.count_infinity, valid),
    ]
    out += [bounds.verdict_diagonal(q, n, m, i, report.N_i[i - 1], valid) for i in range(1, n)]
    out.append(bounds.verdict_nstar(q, n, m, k, report.N_star_direct, valid))
    out.append(bounds.verdict_existence(q, n, m, k, report.N_star_direct, valid))
    if n >= 5:
        out.append(bounds.verdict_existence_chain(q, n, m, k, report.N_star_direct, valid))
    return out


def process_record(record: str, strict: bool, budgets: Budgets, probe_ext=(1,),
                   naive_check: bool = True) -> InstanceResult:
    inst = MHInstance.from_record(record, strict=strict)
    q = inst.q
    res = InstanceResult(
        record=record, p=inst.ctx.p, s=inst.ctx.s, q=q, n=inst.n, m=inst.m, k=inst.k,
        coeffs=inst.a_coeffs, a=inst.a, b=inst.b,
        flags=hypothesis_flags(inst.ctx.p, inst.n, inst.m, inst.k,
                               (*inst.a_coeffs, inst.a, inst.b), q),
    )
    try:
        res.counts = count_report(inst, budgets, naive=naive_check)
    except BudgetExceeded as exc:
        res.status, res.message = "budget_exceeded", str(exc)
        return res
    res.verdicts = evaluate_instance(inst, res.counts)
    if inst.degree >= inst.n:
        for r in probe_ext:
            if r > 1 and inst.coeff_int_spec is None:
                continue
            try:
                res.probes.append(probe(inst, r, budgets.probe_points)[0])
            except BudgetExceeded:
                pass
    return res


def _process_star(args):
    return process_record(*args)


def run_sweep(spec: SweepSpec) -> list[InstanceResult]:
    """Process every instance of the sweep; results follow the instance stream order."""
    records = generate_records(spec)
    jobs = [(r, spec.strict, spec.budgets, tuple(spec.probe_ext), spec.naive_check)
            for r in records]
    if spec.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            return list(pool.map(_process_star, jobs))
    return [_process_star(j) for j in jobs]


def _status(v: bounds.BoundVerdict | None, applicable: bool) -> str:
    if v is None or not applicable:
        return "NA"
    return v.status


def csv_row(res: InstanceResult) -> dict[str, object]:
    c = res.counts
    q, n = res.q, res.n
    main_N = q ** (n - 1)
    main_Nstar = bounds.nstar_main_term(q, n)
    nstar_ok = res.valid and res.flags["gcd_m_q1_is_1"]
    return {
        "p": res.p, "s": res.s, "q": q, "n": n, "m": res.m, "k": res.k,
        "coeffs": ";".join(map(str, res.coeffs)), "a": res.a, "b": res.b,
        "gcd_m_q1": res.gcd, "N": c.N, "Nstar": c.N_star_direct,
        "main_N": main_N, "main_Nstar": main_Nstar,
        "err_N": c.N - main_N, "err_Nstar": c.N_star_direct - main_Nstar,
        "verdict_main": _status(res.verdict("main_estimate"), res.valid),
        "verdict_nstar": _status(res.verdict("nstar"), nstar_ok),
        "verdict_pcl": _status(res.verdict("pcl_bound"), res.valid),
        "verdict_inf": _status(res.verdict("infinity_deligne"), res.valid),
        "tightness_main": res.verdict("main_estimate").tightness if res.valid else "NA",
        "tightness_nstar": res.verdict("nstar").tightness if nstar_ok else "NA",
        "existence_threshold": bounds.existence_threshold(n, res.m, res.k).threshold,
        "nstar_positive": int(c.N_star_direct > 0),
    }


def emit_reports(results: list[InstanceResult], csv_path=None, jsonl_path=None) -> None:
    """Write the CSV summary (counted instances only) and the full JSON-lines log."""
    if not results:
        raise ValueError("no results to report")
    if csv_path is not None:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
            writer.writeheader()
            for res in results:
                if res.counts is not None:
                    writer.writerow(csv_row(res))
    if jsonl_path is not None:
        with open(jsonl_path, "w") as fh:
            for res in results:
                fh.write(res.to_json() + "\n")


def read_csv(path) -> list[dict[str, object]]:
    """Parse an emitted CSV, converting integer columns back to ``int``."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_FIELDS:
            raise ValueError(f"unexpected CSV header in {path}")
        rows = []
        for row in reader:
            for name in INT_FIELDS:
                row[name] = int(row[name])
            row["coeffs"] = tuple(int(c) for c in row["coeffs"].split(";"))
            rows.append(row)
    return rows


def exit_status(results: list[InstanceResult]) -> int:
    """0 iff no hypothesis-satisfying instance has a failing verdict."""
    return 1 if any(res.failures() for res in results) else 0
