"""ct-workbench command line.

    ct-workbench verify --theorem qdyson --a 1,1
    ct-workbench sweep --theorem main1 --n 2..3 --amax 2 --jobs 4
    ct-workbench ct --spec '{"nvars": 2, "factors": [...]}'
    ct-workbench tournaments --n 4 --family r2 --Q "[[3,4]]"
    ct-workbench check degree-bound --a 2,2 --k 1 --q0 7/5

Exit codes: 0 all MATCH (or check passed), 1 any MISMATCH (or check failed),
2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import verify as V
from .identities import IdentityInstance, InvalidInstance, PoleError, Theorem
from .laurent import CeilingExceeded, ProductSpec, andrews_spec, build_product, ct_product, dn_spec
from .tournament import (
    GROUNDS,
    QSet,
    all_qsets,
    e_bar,
    family_as_lists,
    r1_family,
    r2_family,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(",") if v != "")
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def parse_range(text: str) -> tuple[int, ...]:
    """'3', '2..4' (inclusive) or '0,2,5'."""
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            lo_i, hi_i = int(lo), int(hi)
        except ValueError:
            raise UsageError(f"bad range {text!r}") from None
        if hi_i < lo_i:
            raise UsageError(f"empty range {text!r}")
        return tuple(range(lo_i, hi_i + 1))
    return parse_int_list(text)


def parse_json_arg(text: str, what: str):
    """Inline JSON, or a path to a JSON file."""
    path = Path(text)
    try:
        if not text.lstrip().startswith(("[", "{")) and path.exists():
            text = path.read_text()
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON for {what}: {exc}") from None


def parse_pairs(text: str) -> tuple[tuple[int, int], ...]:
    obj = parse_json_arg(text, "--Q")
    try:
        pairs = tuple((int(p[0]), int(p[1])) for p in obj)
        if any(len(p) != 2 for p in obj):
            raise ValueError
    except (TypeError, ValueError, IndexError):
        raise UsageError(f"--Q must be a JSON list of pairs, got {text!r}") from None
    return pairs


def parse_q0(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad q0 {text!r}") from None


def resolve_ceiling(value: int | None) -> int:
    if value is None:
        try:
            return V.default_ceiling()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if value < 1:
        raise UsageError("--ceiling must be >= 1")
    return value


def load_instances(path: str) -> list[IdentityInstance]:
    """A JSON array of instances, or JSON lines (report lines are accepted,
    summary lines skipped)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            objs = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed JSON in {path}: {exc}") from None
    else:
        objs = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                objs.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise UsageError(f"{path}:{lineno}: malformed JSON: {exc}") from None
    return [IdentityInstance.from_json(o) for o in objs if not (isinstance(o, dict) and "summary" in o)]


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def emit_reports(reports, fmt: str, out) -> None:
    if fmt == "json":
        for r in reports:
            print(json.dumps(r.to_json()), file=out)
        print(json.dumps({"summary": V.summarize(reports)}), file=out)
    elif fmt == "tsv":
        print("instance\tverdict\tlhs_ct\trhs_num\trhs_den\ttransitive\ttiming_ms", file=out)
        for r in reports:
            num = "" if r.rhs is None else str(r.rhs.num)
            den = "" if r.rhs is None else str(r.rhs.den)
            lhs = "" if r.lhs_ct is None else str(r.lhs_ct)
            tr = "" if r.transitive is None else str(r.transitive).lower()
            print(f"{r.instance.label()}\t{r.verdict}\t{lhs}\t{num}\t{den}\t{tr}\t{r.timing_ms:.3f}", file=out)
    else:
        for r in reports:
            line = f"{r.verdict:8s} {r.instance.label()}"
            if r.lhs_ct is not None:
                line += f"\n         CT  = {r.lhs_ct}\n         RHS = {r.rhs}"
            if r.reason:
                line += f"\n         ({r.reason})"
            print(line, file=out)
        s = V.summarize(reports)
        print(f"{s['instances']} instances: {s['match']} match, {s['mismatch']} mismatch, "
              f"{s['skipped']} skipped ({s['total_ms']:.0f} ms)", file=out)


def exit_code(reports) -> int:
    return EXIT_MISMATCH if any(r.verdict == V.MISMATCH for r in reports) else EXIT_OK


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_verify(args, out=sys.stdout) -> int:
    inline = any(v is not None for v in (args.theorem, args.a, args.n, args.Q, args.sigma))
    sources = [inline, args.instances is not None, args.json is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one of: inline flags (--theorem/--a/...), --json, --instances")
    if args.instances is not None:
        instances = load_instances(args.instances)
    elif args.json is not None:
        obj = parse_json_arg(args.json, "--json")
        objs = obj if isinstance(obj, list) else [obj]
        instances = [IdentityInstance.from_json(o) for o in objs]
    else:
        if args.theorem is None:
            raise UsageError("--theorem is required")
        instances = [IdentityInstance.make(
            args.theorem,
            parse_int_list(args.a) if args.a is not None else (),
            parse_pairs(args.Q) if args.Q is not None else (),
            parse_int_list(args.sigma) if args.sigma is not None else None,
            args.n,
        )]
    reports = V.run_instances(instances, ceiling=resolve_ceiling(args.ceiling), jobs=args.jobs)
    emit_reports(reports, args.format, out)
    return exit_code(reports)


def build_sweep_spec(args) -> V.SweepSpec:
    if args.spec is not None:
        obj = parse_json_arg(args.spec, "--spec")
        try:
            return V.SweepSpec.from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad sweep spec: {exc}") from None
    if args.theorem is None or args.n is None:
        raise UsageError("sweep needs --theorem and --n (or --spec)")
    q_list = ()
    policy = args.q_policy
    if args.q_list is not None:
        obj = parse_json_arg(args.q_list, "--q-list")
        try:
            q_list = tuple(tuple((int(i), int(j)) for i, j in Q) for Q in obj)
        except (TypeError, ValueError):
            raise UsageError("--q-list must be a JSON list of pair lists") from None
        policy = policy or V.LIST
    try:
        return V.SweepSpec(
            theorem=Theorem.parse(args.theorem),
            n_values=parse_range(args.n),
            amax=args.amax,
            amin=args.amin,
            a0_values=parse_range(args.a0) if args.a0 is not None else None,
            sum_max=args.sum_max,
            q_policy=policy or V.ALL_SUBSETS,
            q_list=q_list,
            jobs=args.jobs,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_sweep(args, out=sys.stdout) -> int:
    spec = build_sweep_spec(args)
    instances = V.enumerate_instances(spec)
    reports = V.run_instances(instances, ceiling=resolve_ceiling(args.ceiling), jobs=spec.jobs)
    emit_reports(reports, args.format, out)
    return exit_code(reports)


def cmd_ct(args, out=sys.stdout) -> int:
    chosen = [x is not None for x in (args.spec, args.andrews, args.dn)]
    if sum(chosen) != 1:
        raise UsageError("give exactly one of --spec, --andrews, --dn")
    if args.spec is not None:
        try:
            spec = ProductSpec.from_json(parse_json_arg(args.spec, "--spec"))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad product spec: {exc}") from None
    elif args.andrews is not None:
        spec = andrews_spec(parse_int_list(args.andrews))
    else:
        try:
            spec = dn_spec(parse_int_list(args.dn))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    ceiling = resolve_ceiling(args.ceiling)
    if args.expand:
        f = build_product(spec, ceiling=ceiling)
        print(json.dumps({"nvars": f.nvars, "terms": f.to_json()}) if args.format == "json" else str(f), file=out)
    else:
        ct = ct_product(spec, ceiling=ceiling)
        print(json.dumps({"ct": str(ct)}) if args.format == "json" else str(ct), file=out)
    return EXIT_OK


def _family_for(qs: QSet, family: str | None):
    if family == "r1":
        return family_as_lists(r1_family(qs))
    if family == "r2":
        return family_as_lists(r2_family(qs))
    return None


def cmd_tournaments(args, out=sys.stdout) -> int:
    if args.n < 1 or args.n > 7:
        raise UsageError("tournaments needs 1 <= n <= 7")
    ground = args.ground or {"r1": "E2", "r2": "E3"}.get(args.family, "E")
    first = GROUNDS[ground]
    if args.family == "r1" and first != 2 or args.family == "r2" and first != 3:
        raise UsageError(f"--family {args.family} needs ground {'E2' if args.family == 'r1' else 'E3'}")
    try:
        if args.Q is not None:
            qsets = [QSet(args.n, frozenset(parse_pairs(args.Q)), first)]
        else:
            qsets = all_qsets(args.n, first)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = []
    for qs in qsets:
        T = e_bar(qs)
        tr = T.is_transitive()
        row = {
            "n": qs.n,
            "Q": [list(p) for p in qs.sorted_pairs()],
            "transitive": tr,
            "winner": list(T.winner_permutation()) if tr else None,
            "dominant_sets": family_as_lists(T.dominant_sets()),
        }
        if args.family:
            row[args.family] = _family_for(qs, args.family)
        rows.append(row)
    if args.format == "json":
        for row in rows:
            print(json.dumps(row), file=out)
        print(json.dumps({"summary": {"rows": len(rows),
                                      "nontransitive": sum(not r["transitive"] for r in rows)}}), file=out)
    elif args.format == "tsv":
        cols = ["Q", "transitive", "winner", "dominant_sets"] + ([args.family] if args.family else [])
        print("\t".join(cols), file=out)
        for row in rows:
            print("\t".join(json.dumps(row[c], separators=(",", ":")) for c in cols), file=out)
    else:
        for row in rows:
            tag = "transitive  " if row["transitive"] else "NONTRANSITIVE"
            line = f"{tag} Q={json.dumps(row['Q'], separators=(',', ':'))}"
            if row["winner"]:
                line += f" winner={'->'.join(map(str, row['winner']))}"
            line += f" dominant={row['dominant_sets']}"
            if args.family:
                line += f" {args.family}={row[args.family]}"
            print(line, file=out)
    return EXIT_OK


def cmd_check(args, out=sys.stdout) -> int:
    """Lemma-level checks; exit 0 when the property holds."""
    what = args.what
    if what == "degree-bound":
        if args.a is None or args.k is None:
            raise UsageError("degree-bound needs --a (a_1..a_n) and --k")
        a = parse_int_list(args.a)
        pres = V.degree_bound_prefactors(len(a), args.k)
        ok = True
        for pre in pres:
            try:
                rep = V.check_degree_bound(a, args.k, prefactor=pre, q0=parse_q0(args.q0),
                                           ceiling=resolve_ceiling(args.ceiling))
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            ok &= rep.ok
            print(json.dumps({"a": list(a), "k": args.k, "prefactor": list(pre), "bound": rep.bound,
                              "a0": list(rep.a0_values), "values": [str(v) for v in rep.values],
                              "ok": rep.ok, "detail": rep.detail}), file=out)
        return EXIT_OK if ok else EXIT_MISMATCH
    if what == "integer-lemma":
        rep = V.check_lemma_import1(args.s_max, args.amax if args.amax is not None else 3)
        print(json.dumps({"ok": rep.ok, "k_vectors": rep.vectors_checked, "a_vectors": rep.a_vectors,
                          "counterexample": rep.counterexample}), file=out)
        return EXIT_OK if rep.ok else EXIT_MISMATCH
    if what == "reflection":
        n_max = args.n if args.n is not None else 3
        rep = V.check_reflection(n_max, tuple(range(1, (args.amax or 2) + 1)))
        print(json.dumps({"ok": rep.ok, "checked": rep.checked, "failures": rep.failures[:20]}), file=out)
        return EXIT_OK if rep.ok else EXIT_MISMATCH
    if what == "census":
        n_max = args.n if args.n is not None else 6
        rows = V.check_dominance_bound(n_max)
        for row in rows:
            print(json.dumps(row), file=out)
        return EXIT_OK if all(r["violations_n_minus_2"] == 0 for r in rows) else EXIT_MISMATCH
    if what == "families":
        rep = V.check_family_bounds(args.n if args.n is not None else 5)
        print(json.dumps(rep), file=out)
        return EXIT_OK if rep["ok"] else EXIT_MISMATCH
    if what == "zero-points":
        if args.theorem is None or args.a is None:
            raise UsageError("zero-points needs --theorem main1|main2 and --a")
        inst = IdentityInstance.make(args.theorem, parse_int_list(args.a),
                                     parse_pairs(args.Q) if args.Q is not None else ())
        try:
            rep = V.check_zero_points(inst)
        except (InvalidInstance, PoleError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        print(json.dumps({"instance": inst.to_json(), "zeros": rep.zeros, "poles": rep.poles,
                          "ok": rep.ok, "detail": rep.detail}), file=out)
        return EXIT_OK if rep.ok else EXIT_MISMATCH
    raise UsageError(f"unknown check {what!r}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ct-workbench", description="Exact constant term identity workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="json"):
        sp.add_argument("--format", choices=("json", "tsv", "pretty"), default=fmt_default)
        sp.add_argument("--ceiling", type=int, default=None,
                        help=f"max stored terms (default {V.DEFAULT_CEILING}, env {V.CEILING_ENV})")

    v = sub.add_parser("verify", help="verify one identity instance or a batch")
    v.add_argument("--theorem")
    v.add_argument("--a", help="comma-separated a-vector (includes a_0 where the identity has one)")
    v.add_argument("--n", type=int)
    v.add_argument("--Q", help='JSON pair list, e.g. "[[1,3]]"')
    v.add_argument("--sigma", help="comma-separated permutation of 1..n")
    v.add_argument("--json", help="inline instance JSON (object or list)")
    v.add_argument("--instances", help="file of instances (JSON array or JSON lines)")
    v.add_argument("--jobs", type=int, default=1)
    common(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="exhaustive sweep over a parameter box")
    s.add_argument("--theorem")
    s.add_argument("--n", help="'3', '2..4' or '2,3'")
    s.add_argument("--amax", type=int, default=2)
    s.add_argument("--amin", type=int, default=None)
    s.add_argument("--a0", help="a_0 values for main1/main2 (default 0..amax)")
    s.add_argument("--sum-max", type=int, default=None)
    s.add_argument("--q-policy", choices=(V.ALL_SUBSETS, V.EMPTY_ONLY, V.LIST), default=None)
    s.add_argument("--q-list", help='JSON list of Q sets, e.g. "[[], [[3,4]]]"')
    s.add_argument("--spec", help="SweepSpec JSON (inline or file)")
    s.add_argument("--jobs", type=int, default=1)
    common(s)
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("ct", help="constant term of a product")
    c.add_argument("--spec", help="ProductSpec JSON (inline or file)")
    c.add_argument("--andrews", help="a-vector for the q-Dyson product")
    c.add_argument("--dn", help="a-vector (a_0..a_n) for the D_n product")
    c.add_argument("--expand", action="store_true", help="print the full expansion instead")
    common(c, "pretty")
    c.set_defaults(func=cmd_ct)

    t = sub.add_parser("tournaments", help="list Q sets with their tournaments")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--ground", choices=sorted(GROUNDS))
    t.add_argument("--family", choices=("r1", "r2"))
    t.add_argument("--Q", help="restrict to one Q (JSON pair list)")
    t.add_argument("--format", choices=("json", "tsv", "pretty"), default="pretty")
    t.set_defaults(func=cmd_tournaments)

    k = sub.add_parser("check", help="lemma-level checks")
    k.add_argument("what", choices=("degree-bound", "integer-lemma", "reflection", "census",
                                    "families", "zero-points"))
    k.add_argument("--a")
    k.add_argument("--k", type=int)
    k.add_argument("--n", type=int)
    k.add_argument("--Q")
    k.add_argument("--theorem")
    k.add_argument("--amax", type=int)
    k.add_argument("--s-max", type=int, default=4)
    k.add_argument("--q0", default="7/5")
    k.add_argument("--ceiling", type=int, default=None)
    k.set_defaults(func=cmd_check)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args, out=out)
    except (UsageError, InvalidInstance) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CeilingExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
