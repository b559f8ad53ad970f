"""Command-line front end.

Valuations are printed as exact fractions num/den (never decimals);
output is byte-deterministic for fixed inputs and flags.  Exit codes:
0 success / all checks pass, 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import cache as cache_mod
from . import iwasawa, lvalues, verify
from .characters import CONVENTION, CharSpec
from .cyclotomic import DyadicValuation, _v2

CACHE_ENV = "DYADICL_CACHE"


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _spec_from_args(args) -> CharSpec:
    power = args.power
    if power is None:
        power = 1 if args.d > 1 else 0
    return CharSpec(args.n, args.d, power, allow_even_twist=args.d % 2 == 0)


def _attach_cache(args) -> None:
    path = getattr(args, "cache", None) or os.environ.get(CACHE_ENV)
    if path:
        lvalues.use_disk_cache(cache_mod.LValueCache(path))


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def cmd_lvalue(args) -> int:
    spec = _spec_from_args(args)
    if spec.effective_power == 2 and spec.effective_twist > 1:
        result = lvalues.l_value_imprimitive(spec, 1, args.m, force=args.force_large)
    else:
        result = lvalues.l_value(spec, args.m, force=args.force_large)
    if args.json:
        payload = result.to_dict()
        payload["schema"] = "dyadicl-lvalue-v1"
        payload["convention"] = CONVENTION
        _print_json(payload)
    else:
        print(f"character: {spec}   weight: 1-m with m={args.m}")
        print(f"value = {result.value}")
        print(f"ord2 = {result.ord2}")
        if result.euler_factors_removed:
            removed = ",".join(str(p) for p in result.euler_factors_removed)
            print(f"euler factors removed at: {removed}")
    return 0


def cmd_zeta(args) -> int:
    if args.d == 1:
        z = lvalues.zeta_Qn(args.n, args.m, force=args.force_large)
        name = f"Q_{args.n}"
    elif args.d % 2 == 0:
        if args.n != 0:
            raise ValueError("even d is a base-layer twist; use the odd part for n >= 1")
        z = lvalues.zeta_base_even_twist(args.d, args.m, force=args.force_large)
        name = f"Q(sqrt({args.d}))"
    else:
        z = lvalues.zeta_Kn(args.d, args.n, args.m, force=args.force_large)
        name = f"Q(sqrt({args.d}))_{args.n}"
    v = DyadicValuation(Fraction(_v2(z.numerator) - _v2(z.denominator)))
    if args.json:
        _print_json(
            {
                "schema": "dyadicl-zeta-v1",
                "field": name,
                "n": args.n,
                "d": args.d,
                "m": args.m,
                "value": _frac(z),
                "ord2": str(v),
            }
        )
    else:
        print(f"zeta_{name}(1-{args.m}) = {_frac(z)}")
        print(f"ord2 = {v}")
    return 0


def cmd_invariants(args) -> int:
    if args.d != 1 and (args.d % 2 == 0):
        raise ValueError("invariants need d = 1 or odd square-free d >= 3")
    triple = iwasawa.invariant_triple(args.d, args.m, force=args.force_large)
    if args.json:
        _print_json(
            {
                "schema": "dyadicl-invariants-v1",
                "d": args.d,
                "m": args.m,
                "mu": triple.mu,
                "lambda": triple.lambda_,
                "nu": triple.nu,
                "nu_prime": _frac(triple.nu_prime),
                "n_threshold": triple.n_threshold,
                "note": triple.note,
            }
        )
    else:
        print(f"d={args.d} m={args.m}: mu={triple.mu} lambda={triple.lambda_} nu={triple.nu}")
        print(f"nu_prime = {_frac(triple.nu_prime)}   valid from n >= {triple.n_threshold}")
        if triple.note:
            print(f"note: {triple.note}")
    return 0


def cmd_kgroup(args) -> int:
    fl = iwasawa.field_layer(args.d, args.n)
    order = iwasawa.k_group_ord2(fl, args.m, force=args.force_large)
    if args.json:
        _print_json(
            {
                "schema": "dyadicl-kgroup-v1",
                "base": fl.base,
                "n": fl.layer,
                "degree": fl.degree,
                "m": args.m,
                "e": order.e,
            }
        )
    else:
        print(f"ord2 |K_{2 * args.m - 2} O(2)| at layer {args.n} over base {args.d}: {order.e}")
    return 0


def cmd_structure(args) -> int:
    fl = iwasawa.field_layer(args.d, args.n)
    st = iwasawa.tame_kernel_structure(fl, force=args.force_large)
    if args.json:
        _print_json(
            {
                "schema": "dyadicl-structure-v1",
                "base": fl.base,
                "n": fl.layer,
                "r1": fl.r1,
                "g2": fl.g2,
                "rank_lower": st.rank_lower,
                "order_exponent": st.order_exponent,
                "structure": st.description,
            }
        )
    else:
        print(
            f"base {args.d}, layer {args.n}: r1={fl.r1} g2={fl.g2} "
            f"bounds [{st.rank_lower}, {st.order_exponent}] -> {st.description}"
        )
    return 0


def cmd_threshold(args) -> int:
    found = iwasawa.empirical_threshold(args.d, args.m, args.n_max, force=args.force_large)
    ceiling = refined = None
    if args.d > 1:
        bound = iwasawa.n_d_bound(args.d, args.m)
        ceiling, refined = bound.ceiling, bound.refined
    else:
        ceiling = 1
    if args.json:
        _print_json(
            {
                "schema": "dyadicl-threshold-v1",
                "d": args.d,
                "m": args.m,
                "n_max": args.n_max,
                "empirical": found,
                "ceiling": ceiling,
                "refined": refined,
            }
        )
    else:
        shown = "not found" if found is None else str(found)
        print(f"empirical threshold for d={args.d}, m={args.m} up to n={args.n_max}: {shown}")
        print(f"ceiling bound: {ceiling}   refined (m=2) bound: {refined}")
    return 0


def _sweep_point(task) -> dict:
    d, n, m, force = task
    spec = CharSpec(n, d) if d > 1 else CharSpec(n)
    computed = lvalues.l_value(spec, m, force=force).ord2
    predicted = iwasawa.predicted_lvalue_ord(d, n, m)
    if d > 1:
        bound = iwasawa.n_d_bound(d, m)
        ceiling = bound.ceiling
        refined = bound.refined
    else:
        ceiling, refined = 1, 1 if m == 2 else None
    return {
        "d": d,
        "n": n,
        "m": m,
        "ord2_computed": str(computed),
        "ord2_predicted": str(DyadicValuation(predicted)),
        "match": computed == predicted,
        "n_d_ceiling": ceiling,
        "n_d_refined": "" if refined is None else refined,
    }


SWEEP_COLUMNS = (
    "d",
    "n",
    "m",
    "ord2_computed",
    "ord2_predicted",
    "match",
    "n_d_ceiling",
    "n_d_refined",
)


def sweep_csv(ds, n_min, n_max, ms, jobs: int = 1, force: bool = False) -> str:
    tasks = [(d, n, m, force) for d in sorted(ds) for n in range(n_min, n_max + 1) for m in sorted(ms)]
    for d, n, m, _ in tasks:
        lvalues.check_size_guard(n, d, force)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    rows.sort(key=lambda r: (r["d"], r["n"], r["m"]))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def cmd_sweep(args) -> int:
    ds = [int(x) for x in args.d_list.split(",")]
    ms = [int(x) for x in args.m_list.split(",")]
    out = sweep_csv(ds, args.n_min, args.n_max, ms, jobs=args.jobs, force=args.force_large)
    sys.stdout.write(out)
    return 0


def cmd_verify(args) -> int:
    config = verify.GridConfig(
        ns=tuple(args.n_grid) if args.n_grid else verify.DEFAULT_NS,
        ds=tuple(args.d_grid) if args.d_grid else verify.DEFAULT_DS,
        ms=tuple(args.m_grid) if args.m_grid else verify.DEFAULT_MS,
        checks=tuple(args.check) if args.check else None,
        inject_fault=args.inject_fault,
        jobs=args.jobs,
        force=args.force_large,
    )
    reports = verify.run_all(config)
    failures = [r for r in reports if not r.passed]
    if args.json:
        for r in reports:
            _print_json(r.to_dict())
    else:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            params = " ".join(f"{k}={v}" for k, v in sorted(r.parameters.items()))
            print(f"{status} {r.check_name} {params}")
        print(f"{len(reports) - len(failures)}/{len(reports)} checks passed")
    return 1 if failures else 0


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyadicl",
        description="Exact 2-adic Dirichlet L-values, zeta values, K-group "
        "orders and growth invariants over the cyclotomic 2-tower.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n=True, d=True, m=True):
        if n:
            p.add_argument("--n", type=int, default=0, help="tower layer")
        if d:
            p.add_argument("--d", type=int, default=1, help="square-free twist / base")
        if m:
            p.add_argument("--m", type=int, default=2, help="weight parameter (L at 1-m)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--cache", help=f"L-value cache path (or ${CACHE_ENV})")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers")
        p.add_argument(
            "--force-large", action="store_true", help="override the n + log2(d) <= 24 size guard"
        )

    p = sub.add_parser("lvalue", help="exact L(chi, 1-m) with its 2-adic valuation")
    common(p)
    p.add_argument("--power", type=int, choices=(0, 1, 2), help="twist power (default: 1 if d > 1)")
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("zeta", help="Dedekind zeta value of a tower layer")
    common(p)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("invariants", help="growth invariants (mu, lambda, nu)")
    common(p, n=False)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("kgroup", help="ord2 of the even K-group order")
    common(p)
    p.set_defaults(func=cmd_kgroup)

    p = sub.add_parser("structure", help="2-primary tame kernel structure via the rank squeeze")
    common(p, m=False)
    p.set_defaults(func=cmd_structure)

    p = sub.add_parser("threshold", help="empirically locate the prediction threshold")
    common(p, n=False)
    p.add_argument("--n-max", type=int, default=6)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("verify", help="run the congruence check suite")
    p.add_argument("--check", action="append", help="restrict to a named check (repeatable)")
    p.add_argument("--n", dest="n_grid", type=_int_list, help="layers, comma-separated")
    p.add_argument("--d", dest="d_grid", type=_int_list, help="twists, comma-separated")
    p.add_argument("--m", dest="m_grid", type=_int_list, help="weights, comma-separated")
    p.add_argument("--default-grid", action="store_true", help="force the full default grid")
    p.add_argument("--inject-fault", action="store_true", help="harness self-test: perturb one check")
    p.add_argument("--json", action="store_true", help="JSON-lines reports")
    p.add_argument("--cache", help=f"L-value cache path (or ${CACHE_ENV})")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--force-large", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="grid sweep of computed vs predicted valuations (CSV)")
    p.add_argument("--d-list", default="3,5,15", help="comma-separated twists")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--m-list", default="2", help="comma-separated weights")
    p.add_argument("--cache", help=f"L-value cache path (or ${CACHE_ENV})")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--force-large", action="store_true")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _attach_cache(args)
        return args.func(args)
    except (ValueError, ArithmeticError, cache_mod.CachePoisonedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        lvalues.use_disk_cache(None)


if __name__ == "__main__":
    sys.exit(main())
