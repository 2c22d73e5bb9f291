"""Command-line entry point.

Exit codes: 0 all checked properties pass, 1 a property or fact failed,
2 configuration error, 3 certificate/horizon insufficiency (the message
names the required horizon).  Outputs are deterministic: identical
configurations produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import AuditError, FamilyError, HorizonError, LinkedTDError
from .families import FAMILY_HELP, make_family
from .graph_core import expand
from .ends import (all_ends_gdelta, audit_gdelta, audit_oracle,
                   subset_gdelta, undominated_gdelta)
from .decomposition import (build, contract_to_linked, end_tree_map,
                            from_json, verify)
from .facts import gadget_facts


def _family_from_args(args):
    params = {}
    for key in ("k", "span", "seed", "input"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    return make_family(args.family, **params)


def _spec_from_args(family, psi):
    if psi == "undominated":
        return undominated_gdelta(family)
    if psi == "all":
        return all_ends_gdelta(family)
    return subset_gdelta(family, [p.strip() for p in psi.split(",") if p.strip()])


def _dump(data, path):
    text = json.dumps(data, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_build(args):
    family = _family_from_args(args)
    spec = _spec_from_args(family, args.psi)
    td = build(family, spec, args.horizon, args.levels)
    tdc = contract_to_linked(td) if not args.no_contract else td
    report = verify(tdc, pair_budget=args.pair_budget)
    out = args.output
    _dump(tdc.to_json(), f"{out}.json" if out else None)
    if args.format == "dot" and out:
        with open(f"{out}.dot", "w") as fh:
            fh.write(tdc.to_dot() + "\n")
    _dump(report.to_json(), f"{out}.report.json" if out else None)
    if args.dump_algorithm and out:
        runs = [rec.run_json for rr in td.log for rec in rr.nodes]
        _dump({"schema": 1, "kind": "algorithm_runs", "runs": runs},
              f"{out}.algorithm.json")
    if args.dump_envelopes and out:
        bags = [{"node": n, "bag": sorted(map(str, tdc.bags[n]))}
                for n in tdc.nodes()]
        _dump({"schema": 1, "kind": "envelopes", "bags": bags},
              f"{out}.envelopes.json")
    return 0 if report.all_passed else 1


def cmd_verify(args):
    family = _family_from_args(args)
    spec = _spec_from_args(family, args.psi)
    with open(args.decomposition) as fh:
        data = json.load(fh)
    t = expand(family, args.horizon if args.horizon else data["horizon"])
    td = from_json(data, t, spec)
    report = verify(td, pair_budget=args.pair_budget)
    _dump(report.to_json(), f"{args.output}.report.json" if args.output else None)
    return 0 if report.all_passed else 1


def cmd_audit_oracle(args):
    family = _family_from_args(args)
    t = expand(family, args.horizon)
    report = audit_oracle(t)
    _dump(report, f"{args.output}.oracle.json" if args.output else None)
    ok = all(e.get("degree_consistent", True)
             and all(d["consistent"] for d in e["dominator_checks"])
             for e in report["ends"])
    return 0 if ok else 1


def cmd_gadget_facts(args):
    results = gadget_facts(horizon=args.horizon, mutated=args.mutated)
    for r in results:
        print(f"{'PASS' if r['passed'] else 'FAIL'}: {r['fact']} -- {r['detail']}")
    return 0 if all(r["passed"] for r in results) else 1


def cmd_families(args):
    for name in sorted(FAMILY_HELP):
        print(f"{name:16s} {FAMILY_HELP[name]}")
    return 0


def _add_family_args(p, with_psi=True):
    p.add_argument("--family", required=True, help="family name (see `families`)")
    p.add_argument("--k", type=int, help="width parameter for grid families")
    p.add_argument("--span", type=int, help="apex span for comb_apex")
    p.add_argument("--seed", type=int, help="seed for planted hosts")
    p.add_argument("--input", help="JSON graph file for --family finite")
    if with_psi:
        p.add_argument("--psi", default="undominated",
                       help="'undominated', 'all', or comma-separated end ids")


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="linkedtd",
        description="Build and verify linked, tight, componental "
                    "tree-decompositions displaying prescribed end sets.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build + contract + verify a decomposition")
    _add_family_args(b)
    b.add_argument("--horizon", type=int, required=True)
    b.add_argument("--levels", type=int, required=True)
    b.add_argument("--pair-budget", type=int, default=200, dest="pair_budget")
    b.add_argument("--output", help="output path prefix (default: stdout)")
    b.add_argument("--format", choices=("json", "dot"), default="json")
    b.add_argument("--no-contract", action="store_true", dest="no_contract")
    b.add_argument("--dump-envelopes", action="store_true", dest="dump_envelopes")
    b.add_argument("--dump-algorithm", action="store_true", dest="dump_algorithm")
    b.set_defaults(fn=cmd_build)

    v = sub.add_parser("verify", help="re-verify an exported decomposition")
    _add_family_args(v)
    v.add_argument("--decomposition", required=True, help="decomposition JSON file")
    v.add_argument("--horizon", type=int)
    v.add_argument("--pair-budget", type=int, default=200, dest="pair_budget")
    v.add_argument("--output")
    v.set_defaults(fn=cmd_verify)

    a = sub.add_parser("audit-oracle", help="declared vs window end data")
    _add_family_args(a, with_psi=False)
    a.add_argument("--horizon", type=int, required=True)
    a.add_argument("--output")
    a.set_defaults(fn=cmd_audit_oracle)

    gf = sub.add_parser("gadget-facts", help="check the gadget separator facts")
    gf.add_argument("--horizon", type=int, default=16)
    gf.add_argument("--mutated", action="store_true",
                    help="run against the adversarially mutated gadget")
    gf.set_defaults(fn=cmd_gadget_facts)

    fl = sub.add_parser("families", help="list built-in families")
    fl.set_defaults(fn=cmd_families)

    args = ap.parse_args(argv)
    if getattr(args, "levels", None) is not None and getattr(args, "horizon", None) is not None:
        if args.horizon < args.levels:
            print(f"error: horizon ({args.horizon}) must be >= levels "
                  f"({args.levels})", file=sys.stderr)
            return 2
    try:
        return args.fn(args)
    except HorizonError as exc:
        msg = f"certificate insufficiency: {exc}"
        if exc.required is not None:
            msg += f" (required horizon: {exc.required})"
        print(msg, file=sys.stderr)
        return 3
    except (AuditError, FamilyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
