"""Command-line front end.

Exit status: 0 success, 1 a verification failed, 2 usage error (bad flags,
unknown group, or an exact expansion refused by the term budget).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import classical as cl
from .classical import Component, Decomposition
from .congruential import (CongruentialGroup, independence_threshold, power_conditions, twisted_reduce, w_p)
from .rootsys import GroupSpec, Lattice, group_spec, su_spec, twisted_spec, unitary_spec

CLASSICAL = ("U", "Oplus", "Ominus", "Sp", "ReU")
EXCEPTIONAL = ("G2", "F4", "E6", "E7", "E8")


class UsageError(Exception):
    pass


def _dump(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))


def _component(args) -> Component:
    if args.group not in CLASSICAL:
        raise UsageError(f"--group must be one of {', '.join(CLASSICAL)} here, got {args.group!r}")
    if args.n is None:
        raise UsageError("--n is required")
    try:
        return Component(args.group, args.n)
    except ValueError as err:
        raise UsageError(str(err)) from None


def _load_lattice(path: str) -> Lattice:
    """JSON: either a serialized lattice or a plain list of generator vectors."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot read lattice file {path}: {err}") from None
    from .exact import parse_vec
    if isinstance(data, dict):
        try:
            return Lattice.from_dict(data)
        except (KeyError, TypeError, ValueError) as err:
            raise UsageError(f"bad lattice file {path}: {err}") from None
    try:
        return Lattice.from_generators([parse_vec(v) for v in data])
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise UsageError(f"bad lattice file {path}: {err}") from None


def group_from_args(args) -> GroupSpec:
    """Resolve ``--group/--n/--form/--lattice-file`` into a group spec."""
    g = args.group
    form = args.form
    try:
        if g.startswith("twisted:"):
            parts = g.split(":")
            kind = parts[1]
            m = int(parts[2]) if len(parts) > 2 else None
            return twisted_spec(kind, m, args.n or 1, "sc" if form == "sc" else "adjoint")
        if g == "U":
            if args.n is None:
                raise UsageError("--n is required for U")
            return unitary_spec(args.n)
        if g == "SU":
            if args.n is None:
                raise UsageError("--n is required for SU")
            if form == "adjoint":
                return group_spec("A", args.n - 1, "adjoint")
            return su_spec(args.n)
        if g in CLASSICAL:
            raise UsageError(f"{g} is a classical coset; use decompose/verify-exact/verify-mc")
        lattice = None
        if form == "custom":
            if not args.lattice_file:
                raise UsageError("--form custom needs --lattice-file")
            lattice = _load_lattice(args.lattice_file)
        rank = args.n if g in ("A", "B", "C", "D") else None
        return group_spec(g, rank, form, lattice)
    except UsageError:
        raise
    except (ValueError, KeyError, IndexError) as err:
        raise UsageError(f"bad group {g!r}: {err}") from None


def _need_p(args) -> int:
    if args.p is None or args.p < 1:
        raise UsageError("--p must be a positive integer")
    return args.p


# -- commands -------------------------------------------------------------------


def cmd_decompose(args) -> int:
    c = _component(args)
    p = _need_p(args)
    try:
        d = cl.decompose(c, p)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if args.json:
        _dump({"type": "decompose", "component": c.to_dict(), "p": p, "decomposition": d.to_dict()})
    else:
        print(d.render(args.show_trivial))
    return 0


def _describe_group(g: CongruentialGroup) -> str:
    return f"order={g.order} diagram={g.diagram} walls={sorted(g.walls)} automorphisms={len(g.automorphism_part)}"


def cmd_wp(args) -> int:
    spec = group_from_args(args)
    p = _need_p(args)
    g = w_p(spec, p)
    if args.json:
        _dump(g.to_dict())
    else:
        print(_describe_group(g))
    return 0


def cmd_conditions(args) -> int:
    spec = group_from_args(args)
    p = _need_p(args)
    c = power_conditions(spec, p)
    if args.json:
        _dump(c.to_dict())
    else:
        print(f"is_weyl={c.is_weyl} weyl_vector_condition={c.weyl_vector_condition} "
              f"center_connected={c.center_connected}")
    return 0


def cmd_threshold(args) -> int:
    spec = group_from_args(args)
    t = independence_threshold(spec)
    red = twisted_reduce(spec, args.p) if args.p else None
    if args.json:
        out = t.to_dict()
        if red is not None:
            out["reduction"] = red.to_dict()
        _dump(out)
    else:
        print(t.describe())
        if t.note:
            print(t.note)
        if red is not None and spec.twist is not None:
            print(f"p={args.p}: base power {red.base_power}, exponent {red.substitution_exponent}, "
                  f"threshold power {red.threshold_power}")
    return 0


def cmd_table(args) -> int:
    from .tables import TWISTED, generate_table, render_table, table_name, table_spec
    name = args.group.split(":", 1)[1] if args.group.startswith("twisted:") else args.group
    try:
        spec = table_spec(name)
        rows = generate_table(spec, include_twisted=args.include_twisted)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if args.json:
        _dump({"type": "table", "name": table_name(spec), "rows": [r.to_dict() for r in rows]})
    else:
        sys.stdout.write(render_table(rows, args.style))
    return 0


def cmd_verify_exact(args) -> int:
    from .oracle import BudgetExceeded, verify_identity
    if args.group is not None:
        c = _component(args)
        p = _need_p(args)
        try:
            cases = [(c, p, cl.decompose(c, p))]
        except ValueError as err:
            raise UsageError(str(err)) from None
    else:
        cases = cl.theorem_instances()
    results, failed = [], 0
    for c, p, rhs in cases:
        try:
            r = verify_identity(c, p, rhs, budget=args.budget)
        except BudgetExceeded as err:
            print(f"refused: {err}", file=sys.stderr)
            return 2
        failed += not r.ok
        results.append({"lhs": str(c), "p": p, "rhs": rhs.render(), **r.to_dict()})
        if not args.json:
            status = "ok" if r.ok else "FAIL"
            print(f"{c}^{p} ~ {rhs.render()}: {status}")
            for e, a, b in r.witness:
                print(f"  at {e}: lhs {a}, rhs {b}")
    if args.json:
        _dump({"type": "verify_exact", "failed": failed, "results": results})
    else:
        print(f"{len(results) - failed}/{len(results)} identities verified")
    return 1 if failed else 0


def cmd_verify_mc(args) -> int:
    from .mc import compare
    c = _component(args)
    p = _need_p(args)
    if args.rhs:
        try:
            rhs = Decomposition.of(*(Component.parse(t) for t in args.rhs.split("+") if t.strip()))
        except ValueError as err:
            raise UsageError(str(err)) from None
    else:
        try:
            rhs = cl.decompose(c, p)
        except ValueError as err:
            raise UsageError(str(err)) from None
    if args.samples < 1000:
        raise UsageError("--samples must be at least 1000")
    report = compare(c, p, rhs, args.samples, args.kmax, args.seed, args.workers)
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    if args.json:
        print(report.to_json())
    else:
        print(f"{report.lhs}^{p} vs {report.rhs}: N={report.samples} seed={report.seed}")
        for l in report.lines:
            z = "exact" if l.z is None else f"{l.z:+.3f}"
            print(f"  {l.name:<10} lhs {l.lhs_mean:+.5f}  rhs {l.rhs_mean:+.5f}  z {z}")
        print(f"max |z| = {report.max_abs_z:.3f}: {'pass' if report.passes() else 'FAIL'}")
    return 0 if report.passes() else 1


def cmd_selftest(args) -> int:
    from .oracle import verify_identity
    from .tables import TABLE_NAMES, generate_table, load_fixture, render_table, table_spec
    ok = True

    def report(name, passed, detail=""):
        nonlocal ok
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name}{': ' + detail if detail else ''}")

    t = time.time()
    for name in TABLE_NAMES:
        text = render_table(generate_table(table_spec(name), include_twisted=True))
        report(f"table {name}", text == load_fixture(name))
    bad = [(n, p) for n in range(1, 41) for p in range(1, 41)
           if sum(c.size for c in cl.decompose_unitary(n, p).components) != n]
    report("unitary count conservation", not bad)
    bad = [(N, s, p) for N in range(1, 41) for s in (1, -1) for p in range(1, 13)
           if cl.decompose_orthogonal(N, s, p).free_pairs != cl.O(N, s).free_pairs]
    report("orthogonal pair conservation", not bad)
    small = cl.theorem_instances(unitary_n=4, unitary_p=4, pairs=3, orthogonal_p=4, reu_n=3, sp_n=3)
    bad = [f"{c}^{p}" for c, p, rhs in small if not verify_identity(c, p, rhs)]
    report("exact identities (small)", not bad, f"{len(small) - len(bad)}/{len(small)}")
    e8 = independence_threshold(group_spec("E8")).describe()
    report("E8 threshold", e8 == "h=30, iid for p>=30", e8)
    report("SU(4) at p=4", w_p(su_spec(4), 4).order == 4)
    print(f"selftest finished in {time.time() - t:.1f}s")
    return 0 if ok else 1


COMMANDS = {
    "decompose": cmd_decompose,
    "wp": cmd_wp,
    "conditions": cmd_conditions,
    "threshold": cmd_threshold,
    "table": cmd_table,
    "verify-exact": cmd_verify_exact,
    "verify-mc": cmd_verify_mc,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="powermap",
                                     description="Eigenvalue distributions of compact groups under power maps.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, group_required=True):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--group", required=group_required,
                        help="U, Oplus, Ominus, Sp, ReU, SU, G2, F4, E6, E7, E8, A..D (with --n) "
                             "or twisted:KIND[:m]")
        sp.add_argument("--n", type=int, help="size (classical), rank (A..D) or cycle length (twisted)")
        sp.add_argument("--p", type=int, help="power")
        sp.add_argument("--form", choices=("adjoint", "sc", "custom"), default="adjoint")
        sp.add_argument("--lattice-file", help="JSON lattice for --form custom")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    sp = add("decompose", "closed-form decomposition of a classical power")
    sp.add_argument("--show-trivial", action="store_true", help="keep zero-size components")
    add("wp", "the congruential group W^(p)")
    add("conditions", "the three conditions for the power to be a Weyl-type image")
    add("threshold", "independence threshold")
    sp = add("table", "regenerate a table of delta/p data")
    sp.add_argument("--style", choices=("source", "tilde", "overline"), default="source")
    sp.add_argument("--include-twisted", action="store_true", help="allow D4_3 and E6_2")
    sp = add("verify-exact", "exact oracle check (default: the full theorem sweep)", group_required=False)
    sp.add_argument("--budget", type=int, default=20_000_000, help="term budget for exact expansion")
    sp = add("verify-mc", "Monte Carlo comparison of lhs^p against a decomposition")
    sp.add_argument("--rhs", help="override the decomposition, e.g. 'U(2)+U(1)'")
    sp.add_argument("--seed", type=int, default=0, help="64-bit seed")
    sp.add_argument("--samples", type=int, default=200_000)
    sp.add_argument("--kmax", type=int, default=6)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--csv", help="write the report as CSV to this path")
    sub.add_parser("selftest", help="fixtures and quick property checks").add_argument(
        "--json", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as err:
        print(f"powermap {args.command}: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
