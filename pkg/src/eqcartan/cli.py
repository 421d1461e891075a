"""Command-line front end.

Exit codes: 0 success, 1 mathematical failure (identity or decomposition
mismatch, non-complex), 2 validation failure, 3 input or parse error.
"""
import argparse
import sys

from . import cartan, chains as ch, cochains as co, homology as H
from .algebra import validate_dg_algebra
from .certificate import (ConventionError, builtin_probes, load_certificate,
                          load_shipped_certificate, resolve_signs, IDENTITIES)
from .group import FiniteGroup, GroupAction, OrderNotInvertible, validate_action
from .io import ParseError, algebra_from_json, cochain_from_json, dumps, group_from_json, load
from .scalars import ScalarParseError

OK, MATH, INVALID, PARSE = 0, 1, 2, 3


class InputError(Exception):
    pass


class ValidationFailure(Exception):
    def __init__(self, report):
        super().__init__("validation failed")
        self.report = report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(PARSE, f"{self.prog}: error: {message}\n")


def _emit(args, obj, text):
    out = dumps(obj) if args.format == "json" else text + "\n"
    sys.stdout.write(out)


# ---- loading ------------------------------------------------------------------

def _load_algebra(path):
    return algebra_from_json(load(path))


def _load_pair(alg_path, group_path):
    A = _load_algebra(alg_path)
    if group_path is None:
        G = FiniteGroup(["e"], [[0]], 0)
        return A, GroupAction.trivial(G, A)
    return A, group_from_json(load(group_path), A)


def _validate(A, act):
    report = [v.to_json() for v in validate_dg_algebra(A)]
    if act is not None and not report:
        try:
            report += [v.to_json() for v in validate_action(act)]
        except OrderNotInvertible as exc:
            report.append({"axiom": "order-invertible", "witness": [], "detail": str(exc)})
    return report


def _checked_pair(args):
    A, act = _load_pair(args.algebra, getattr(args, "group", None))
    report = _validate(A, act)
    if report:
        raise ValidationFailure(report)
    return A, act


def _convention(args):
    if getattr(args, "convention", None):
        return load_certificate(args.convention).convention
    return load_shipped_certificate().convention


def _twists(act, twist):
    G = act.group
    if twist in (None, "all-classes"):
        return cartan.sectors(act)
    if twist == "all":
        return list(range(G.order))
    if twist not in G.names:
        raise InputError(f"unknown twist {twist!r}; group elements are {G.names}")
    return [G.names.index(twist)]


def _builtin_cochain(A, name):
    table = {"m2": co.m2, "m1": co.m1, "identity": co.identity_cochain}
    if name not in table:
        raise InputError(f"unknown builtin cochain {name!r}; choose from {sorted(table)}")
    return table[name](A)


def _cochains(args, A, act):
    out = []
    for spec in args.cochain or []:
        if spec.startswith("builtin:") and spec[8:] in ("m2", "m1", "identity"):
            out.append((spec, _builtin_cochain(A, spec[8:])))
        else:
            out.append((spec, cochain_from_json(load(spec), A)))
    if args.sample:
        for i, D in enumerate(co.sample_cochains(A, act, args.sample, args.seed)):
            out.append((f"sample:{args.seed}:{i}", D))
    if not out:
        out.append(("builtin:identity", co.identity_cochain(A)))
    return out


# ---- commands ------------------------------------------------------------------

def cmd_validate(args):
    A, act = _load_pair(args.algebra, args.group)
    report = _validate(A, act if args.group else None)
    obj = {"algebra": args.algebra, "group": args.group, "valid": not report,
           "violations": report}
    lines = ["valid" if not report else "INVALID"]
    for v in report:
        lines.append(f"  {v['axiom']}: {v['witness']}  {v['detail']}")
    _emit(args, obj, "\n".join(lines))
    return OK if not report else INVALID


def _probes(spec):
    if spec in (None, "builtin"):
        return builtin_probes()
    obj = load(spec)
    if not isinstance(obj, dict) or not isinstance(obj.get("probes"), list):
        raise ParseError("probe file must be an object with a 'probes' list")
    out = []
    for p in obj["probes"]:
        if not isinstance(p, dict) or "algebra" not in p or "group" not in p:
            raise ParseError("each probe needs 'algebra' and 'group'")
        A, act = _load_pair(p["algebra"], p["group"])
        report = _validate(A, act)
        if report:
            raise ValidationFailure(report)
        out.append((p.get("name", f"{p['algebra']}+{p['group']}"), A, act))
    return out


def _restriction(items):
    restrict = {}
    for item in items or []:
        if "=" not in item:
            raise InputError(f"--restrict expects SWITCH=VALUE, got {item!r}")
        key, val = item.split("=", 1)
        if key not in ch.SWITCHES:
            raise InputError(f"unknown switch {key!r}; switches are {sorted(ch.SWITCHES)}")
        allowed = {str(v): v for v in ch.SWITCHES[key]}
        if val not in allowed:
            raise InputError(f"switch {key} takes one of {sorted(allowed)}")
        restrict.setdefault(key, []).append(allowed[val])
    return restrict


def cmd_resolve_signs(args):
    probes = _probes(args.probes)
    family = ch.convention_family(_restriction(args.restrict))
    identities = args.identities.split(",") if args.identities else None
    if identities:
        unknown = [i for i in identities if i not in IDENTITIES]
        if unknown:
            raise InputError(f"unknown identities {unknown}; choose from {IDENTITIES}")
    try:
        conv, cert = resolve_signs(probes, family, args.max_n, identities)
    except ConventionError as exc:
        obj = {"error": str(exc), "survivors": exc.survivors}
        _emit(args, obj, f"{exc}\nsurvivors: {dumps(exc.survivors).strip()}")
        return MATH
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(cert.text())
    text = f"unique surviving convention {conv.digest()}\n{dumps(conv.to_json()).strip()}"
    _emit(args, cert.to_json(), text)
    return OK


def _report_line(r, label):
    line = f"{r.identity:<11} {r.sector:<6} n={r.n} {r.status}"
    if label:
        line += f"  [{label}]"
    if not r.passed:
        line += f"  witness {r.witness}"
    if r.note:
        line += f"  ({r.note})"
    return line


def cmd_verify(args):
    A, act = _checked_pair(args)
    conv = _convention(args)
    sectors = _twists(act, args.twist)
    wanted = ["1", "2", "3", "4"] if args.identity == "all" else [args.identity]
    cochains = _cochains(args, A, act) if wanted != ["structural"] else []
    records = []
    for g in sectors:
        if "structural" in wanted:
            for r in cartan.verify_structural(A, act, g, args.max_n, conv):
                records.append(("", r))
        for label, D in cochains:
            if "1" in wanted:
                records += [(label, r) for r in cartan.verify_identity_1(A, act, g, D, args.max_n, conv)]
            if "2" in wanted:
                records += [(label, r) for r in cartan.verify_identity_2(A, act, g, D, args.max_n, conv)]
            if "4" in wanted:
                records += [(label, r) for r in cartan.verify_identity_4(A, act, g, D, args.max_n, conv)]
        if "3" in wanted:
            for i, (la, D) in enumerate(cochains):
                for lb, E in cochains[i:]:
                    lab = f"{la} , {lb}"
                    records += [(lab, r) for r in cartan.verify_identity_3(A, act, g, D, E, args.max_n, conv)]
    ok = all(r.passed for _, r in records)
    obj = {"convention_hash": conv.digest(), "passed": ok,
           "reports": [dict(r.to_json(), cochain=label) for label, r in records]}
    lines = [_report_line(r, label) for label, r in records]
    lines.append("all identities hold" if ok else "FAILURES present")
    _emit(args, obj, "\n".join(lines))
    return OK if ok else MATH


def _coefficients(args):
    try:
        return H.CoefficientW.make(args.coefficients, args.u_window, args.max_n)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_homology(args):
    A, act = _checked_pair(args)
    conv = _convention(args)
    W = _coefficients(args)
    if args.twist == "all-classes":
        sectors = cartan.sectors(act)
    else:
        sectors = _twists(act, args.twist or act.group.names[act.group.identity])
    tables = []
    for g in sectors:
        if W.choice == "hochschild" and not args.invariants:
            t = H.twisted_hochschild(A, act, g, args.max_n, conv)
        else:
            t = H.mixed_homology(A, act, g, W, args.max_n, conv, invariants=args.invariants)
        tables.append(t)
    obj = tables[0].to_json() if len(tables) == 1 else {"tables": [t.to_json() for t in tables]}
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(obj))
    _emit(args, obj, "\n".join(t.text() for t in tables))
    return OK


def cmd_decompose(args):
    A, act = _checked_pair(args)
    conv = _convention(args)
    W = _coefficients(args)
    rep = H.check_decomposition(A, act, args.max_n, conv, W)
    _emit(args, rep.to_json(), rep.text())
    return OK if rep.agrees else MATH


# ---- parser ---------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="eqcartan", description="Twisted Hochschild/cyclic calculus of DG algebras "
                                             "with finite group actions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(q, group=True, group_required=False):
        q.add_argument("algebra", help="algebra JSON file or builtin:NAME")
        if group:
            if group_required:
                q.add_argument("group", help="group/action JSON file or builtin:NAME")
            else:
                q.add_argument("group", nargs="?", help="group/action JSON file or builtin:NAME")
        q.add_argument("--format", choices=["text", "json"], default="text")

    q = sub.add_parser("validate", help="check the algebra (and action) axioms")
    common(q)
    q.set_defaults(func=cmd_validate)

    q = sub.add_parser("resolve-signs", help="search the sign-convention family")
    q.add_argument("--probes", default="builtin", help="probe set file or 'builtin'")
    q.add_argument("--restrict", action="append", metavar="SWITCH=VALUE",
                   help="only allow these switch values (repeatable)")
    q.add_argument("--identities", help="comma-separated subset of " + ",".join(IDENTITIES))
    q.add_argument("--max-n", type=int, default=3)
    q.add_argument("--output", help="write the certificate here")
    q.add_argument("--format", choices=["text", "json"], default="text")
    q.set_defaults(func=cmd_resolve_signs)

    q = sub.add_parser("verify", help="verify the Cartan identities as exact matrix identities")
    common(q)
    q.add_argument("--identity", choices=["1", "2", "3", "4", "all", "structural"], default="all")
    q.add_argument("--twist", help="group element name, 'all-classes' (default) or 'all'")
    q.add_argument("--max-n", type=int, default=3)
    q.add_argument("--cochain", action="append",
                   help="cochain JSON file or builtin:m2 / builtin:m1 / builtin:identity")
    q.add_argument("--sample", type=int, default=0, help="number of seeded random cochains")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--convention", help="certificate file pinning the sign convention")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("homology", help="twisted homology dimensions")
    common(q)
    q.add_argument("--twist", help="group element name or 'all-classes' (default: identity)")
    q.add_argument("--coefficients", choices=list(H.COEFFICIENTS), default="hochschild")
    q.add_argument("--u-window", type=int, help="retained u-powers J")
    q.add_argument("--max-n", type=int, default=3)
    q.add_argument("--invariants", action="store_true", help="centralizer-invariant subcomplex")
    q.add_argument("--output", help="write the table JSON here")
    q.add_argument("--convention")
    q.set_defaults(func=cmd_homology)

    q = sub.add_parser("decompose", help="compare the crossed product with the sector sum")
    common(q, group_required=True)
    q.add_argument("--max-n", type=int, default=3)
    q.add_argument("--coefficients", choices=["hochschild", "cyclic"], default="hochschild")
    q.add_argument("--u-window", type=int)
    q.add_argument("--convention")
    q.set_defaults(func=cmd_decompose)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "max_n", 0) is not None and getattr(args, "max_n", 0) < 0:
        sys.stderr.write("error: --max-n must be >= 0\n")
        return PARSE
    try:
        return args.func(args)
    except (ParseError, ScalarParseError, InputError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return PARSE
    except ValidationFailure as exc:
        obj = {"valid": False, "violations": exc.report}
        lines = ["INVALID"] + [f"  {v['axiom']}: {v['witness']}  {v['detail']}" for v in exc.report]
        _emit(args, obj, "\n".join(lines))
        return INVALID
    except H.NotAComplex as exc:
        obj = {"error": "not a complex", "degree": exc.degree, "witness": exc.witness}
        _emit(args, obj, f"not a complex: {exc}")
        return MATH
    except (ValueError, RuntimeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
