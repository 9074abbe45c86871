"""Command line entry point: ``mhcount {field-info,count,verify,probe,sweep}``.

Instances are given as the record ``p s n m k a1,...,an a b`` (quoted or as
eight separate arguments).  ``sweep`` accepts ``--config FILE`` holding
``key=value`` lines named like the long options (``n_range=3:5``); explicit
command line options take precedence over the file, which takes precedence
over ``MHCOUNT_BUDGET_*`` environment variables.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .budgets import BudgetExceeded, Budgets
from .counting import count_report
from .field import build_field, prime_factors
from .geometry import check_pcl_no_singular_at_infinity, probe
from .harness import (COEFF_MODES, SweepSpec, emit_reports, evaluate_instance, exit_status,
                      run_sweep)
from .model import MHInstance


def _ints(text: str) -> list[int]:
    return [int(x) for x in str(text).split(",") if x.strip()]


def _span(text: str) -> tuple[int, int]:
    parts = str(text).split(":")
    if len(parts) == 1:
        return int(parts[0]), int(parts[0])
    return int(parts[0]), int(parts[1])


def _explicit(text: str) -> tuple[tuple[int, ...], int, int]:
    coeffs, a, b = str(text).split("/")
    return tuple(_ints(coeffs)), int(a), int(b)


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    return str(text).strip().lower() in ("1", "true", "yes", "on")


# name -> (parser, default); defaults apply after config file and command line
SWEEP_OPTIONS = {
    "primes": (_ints, None),
    "extensions": (_ints, [1]),
    "n_range": (_span, (3, 3)),
    "m_range": (_span, (2, 2)),
    "k_range": (_span, (2, 2)),
    "coeff_mode": (str, "all_ones"),
    "count": (int, 1),
    "seed": (int, None),
    "explicit": (_explicit, None),
    "strict": (_bool, True),
    "naive_evals": (int, None),
    "fast_prefixes": (int, None),
    "probe_points": (int, None),
    "probe_ext": (_ints, [1]),
    "naive_check": (_bool, True),
    "workers": (int, 1),
    "csv_path": (str, None),
    "jsonl_path": (str, None),
}


def read_config(path: str) -> dict[str, object]:
    out: dict[str, object] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep or key not in SWEEP_OPTIONS:
                raise ValueError(f"{path}:{lineno}: unrecognized setting {line!r}")
            conv = SWEEP_OPTIONS[key][0]
            value = value.strip()
            if key == "explicit":
                out[key] = [conv(v) for v in value.split()]
            else:
                out[key] = conv(value)
    return out


def build_sweep_spec(args: argparse.Namespace) -> SweepSpec:
    cfg = read_config(args.config) if args.config else {}
    vals = {}
    for name, (_, default) in SWEEP_OPTIONS.items():
        cli = getattr(args, name)
        vals[name] = cli if cli is not None else cfg.get(name, default)
    if vals["primes"] is None:
        raise ValueError("--primes is required (on the command line or in the config file)")
    budgets = Budgets.from_env(naive_evals=vals.pop("naive_evals"),
                               fast_prefixes=vals.pop("fast_prefixes"),
                               probe_points=vals.pop("probe_points"))
    vals["explicit"] = vals["explicit"] or []
    return SweepSpec(budgets=budgets, **vals)


def _instance(tokens: list[str], strict: bool) -> MHInstance:
    return MHInstance.from_record(" ".join(tokens), strict=strict)


def cmd_field_info(args) -> int:
    ctx = build_field(args.p, args.s)
    print(f"q={ctx.q}")
    print(f"modulus={','.join(map(str, ctx.modulus))}")
    print(f"generator={ctx.generator}")
    print(f"q_minus_1_factors={','.join(map(str, prime_factors(ctx.q - 1)))}")
    return 0


def cmd_count(args) -> int:
    inst = _instance(args.instance, args.strict)
    budgets = Budgets.from_env(naive_evals=args.naive_evals, fast_prefixes=args.fast_prefixes)
    rep = count_report(inst, budgets, workers=args.workers, naive=args.naive)
    print(json.dumps({"instance": inst.to_record(), **asdict(rep)}, sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    inst = _instance(args.instance, args.strict)
    budgets = Budgets.from_env(naive_evals=args.naive_evals, fast_prefixes=args.fast_prefixes)
    rep = count_report(inst, budgets, workers=args.workers, naive=args.naive)
    verdicts = evaluate_instance(inst, rep)
    for v in verdicts:
        flag = " hypothesis_violation" if v.hypothesis_violation else ""
        print(f"{v.name} {v.status} lhs_sq={v.lhs_sq} rhs_sq={v.rhs_sq} tightness={v.tightness}{flag}")
    failed = [v for v in verdicts if not v.hypothesis_violation and not v.passed]
    return 1 if failed else 0


def cmd_probe(args) -> int:
    inst = _instance(args.instance, args.strict)
    budget = Budgets.from_env(probe_points=args.probe_points).probe_points
    summary, records = probe(inst, args.ext, budget)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for rec in records:
            out.write(rec.to_json() + "\n")
    finally:
        if args.out:
            out.close()
    witnesses: list = []
    check_pcl_no_singular_at_infinity(inst, args.ext, budget, witnesses)
    print(json.dumps({**asdict(summary), "pcl_singular_at_infinity": [list(w) for w in witnesses]}),
          file=sys.stderr)
    return 0 if summary.unclassified == 0 and summary.one_zero == 0 else 1


def cmd_sweep(args) -> int:
    spec = build_sweep_spec(args)
    results = run_sweep(spec)
    if not results:
        print("sweep produced no instances", file=sys.stderr)
        return 0
    emit_reports(results, spec.csv_path, spec.jsonl_path)
    counted = [r for r in results if r.counts is not None]
    failed = sum(bool(r.failures()) for r in results)
    print(f"instances={len(results)} counted={len(counted)} "
          f"budget_exceeded={len(results) - len(counted)} failing={failed}", file=sys.stderr)
    return exit_status(results)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mhcount", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", help="print modulus and generator of F_{p^s}")
    p.add_argument("p", type=int)
    p.add_argument("s", type=int, nargs="?", default=1)
    p.set_defaults(func=cmd_field_info)

    def instance_args(sp):
        sp.add_argument("instance", nargs="+", help="record 'p s n m k a1,...,an a b'")
        sp.add_argument("--no-strict", dest="strict", action="store_false",
                        help="accept instances violating the hypotheses")
        sp.add_argument("--workers", type=int, default=1)

    for name, func, help_ in (("count", cmd_count, "exact counts for one instance"),
                              ("verify", cmd_verify, "bound verdicts for one instance")):
        sp = sub.add_parser(name, help=help_)
        instance_args(sp)
        sp.add_argument("--no-naive", dest="naive", action="store_false",
                        help="skip the naive cross-check")
        sp.add_argument("--naive-evals", type=int)
        sp.add_argument("--fast-prefixes", type=int)
        sp.set_defaults(func=func)

    sp = sub.add_parser("probe", help="singular points and behaviour at infinity")
    instance_args(sp)
    sp.add_argument("--ext", type=int, default=1, help="extension degree r")
    sp.add_argument("--probe-points", type=int)
    sp.add_argument("--out", help="write singular-point JSON lines here")
    sp.set_defaults(func=cmd_probe)

    sp = sub.add_parser("sweep", help="run a sweep and write CSV / JSON-lines reports")
    sp.add_argument("--config")
    sp.add_argument("--primes")
    sp.add_argument("--extensions")
    sp.add_argument("--n-range", dest="n_range")
    sp.add_argument("--m-range", dest="m_range")
    sp.add_argument("--k-range", dest="k_range")
    sp.add_argument("--coeff-mode", dest="coeff_mode", choices=COEFF_MODES)
    sp.add_argument("--count")
    sp.add_argument("--seed")
    sp.add_argument("--explicit", action="append",
                    help="coefficient set 'a1,...,an/a/b'; repeatable")
    sp.add_argument("--strict", dest="strict", action="store_const", const="true")
    sp.add_argument("--no-strict", dest="strict", action="store_const", const="false")
    sp.add_argument("--naive-evals", dest="naive_evals")
    sp.add_argument("--fast-prefixes", dest="fast_prefixes")
    sp.add_argument("--probe-points", dest="probe_points")
    sp.add_argument("--probe-ext", dest="probe_ext")
    sp.add_argument("--no-naive-check", dest="naive_check", action="store_const", const="false")
    sp.add_argument("--workers")
    sp.add_argument("--csv-path", dest="csv_path")
    sp.add_argument("--jsonl-path", dest="jsonl_path")
    sp.set_defaults(func=cmd_sweep)
    return parser


def _convert_sweep_args(args: argparse.Namespace) -> None:
    for name, (conv, _) in SWEEP_OPTIONS.items():
        val = getattr(args, name, None)
        if val is None:
            continue
        if name == "explicit":
            setattr(args, name, [conv(v) for v in val])
        else:
            setattr(args, name, conv(val))


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sweep":
            _convert_sweep_args(args)
        return args.func(args)
    except (ValueError, BudgetExceeded) as exc:
        print(f"mhcount: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
