"""Command-line entry point: `kodaira <command> ...`.

JSON goes to stdout (default, or `--text` for a readable summary); errors are
JSON objects on stderr with exit status 2.  KODAIRA_SEED fixes the seed used by
randomized polynomial factorization.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .actions import (Derivation, classify_p_closed, coaction_group_law, induced_derivation,
                      parse_coaction, verify_coaction, zero_scheme_margin)
from .catalog import run_catalog
from .errors import DomainError, KodairaError, NotApplicableError
from .expressions import parse_rational
from .igusa import igusa_datum
from .invariants import analyze, fixed_point_ledger, lattice_check
from .modelio import load_model, model_to_dict
from .tate import KodairaType
from .twists import TwistParameter, frobenius_comparison, quadratic_twist


def _seed() -> int:
    raw = os.environ.get("KODAIRA_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"KODAIRA_SEED must be an integer, got {raw!r}") from None


def _type_label(f) -> str:
    # the frozen JSON names drop n; it is recoverable from the Euler number
    if f["type"] == "In":
        return f"I{f['euler']}"
    if f["type"] == "Instar":
        return f"I{f['euler'] - 6}*"
    return f["type"].replace("star", "*")


def _fiber_line(f) -> str:
    return (f"  {f['place']:>12}  {_type_label(f):<6} vDelta={f['vDelta']:<3} euler={f['euler']:<3} "
            f"swan={f['swan']} components={f['components']}")


def _text_report(out: dict) -> str:
    lines = [out["model"]["equation"] + f"   (p = {out['model']['p']}, q = {out['model']['q']})"]
    lines += [_fiber_line(f) for f in out["fibers"]]
    lines.append(f"  c2 = {out['c2']}, chi = {out['chi']}, isotrivial = {out['isotrivial']}")
    lines += [f"  note: {n}" for n in out["notes"]]
    if "ledger" in out:
        lines.append(f"  fixed-point ledger: {out['ledger']['status']} ({out['ledger']['detail']})")
    return "\n".join(lines)


def cmd_analyze(args) -> tuple[dict, str, int]:
    model = load_model(args.file)
    report = analyze(model, _seed())
    out = report.to_dict()
    if args.mu is not None:
        out["ledger"] = fixed_point_ledger(report, args.mu).to_dict()
    return out, _text_report(out), 0


def cmd_twist(args):
    model = load_model(args.file)
    d = parse_rational(args.d, model.field)
    param = TwistParameter(d)
    twisted = quadratic_twist(model, param)
    seed = _seed()
    before, after = analyze(model, seed).to_dict(), analyze(twisted, seed).to_dict()
    out = {"d": d.format("t"), "mode": param.mode, "before": before, "after": after}
    text = f"twist by d = {out['d']} ({param.mode})\nbefore:\n{_text_report(before)}\n" \
           f"after:\n{_text_report(after)}"
    return out, text, 0


def cmd_frobenius(args):
    model = load_model(args.file)
    if args.iters < 0:
        raise DomainError("--iters must be non-negative")
    rows = frobenius_comparison(model, args.iters, _seed())
    out = {"iterations": args.iters, "model": model_to_dict(model),
           "rows": [{"place": P.label(), "before": b.to_dict(), "after": a.to_dict()}
                    for P, b, a in rows]}
    lines = [f"{model.equation()} pulled back along {args.iters} Frobenius iteration(s)"]
    for r in out["rows"]:
        b, a = r["before"], r["after"]
        lines.append(f"  {r['place']:>12}: {_type_label(b)} (vDelta {b['vDelta']}, swan {b['swan']})"
                     f" -> {_type_label(a)} (vDelta {a['vDelta']}, swan {a['swan']})")
    return out, "\n".join(lines), 0


def _parse_components(text: str) -> dict:
    comps = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise DomainError(f"derivation component {part!r} must read coordinate=expression")
        k, v = part.split("=", 1)
        comps[k.strip()] = v.strip()
    return comps


def cmd_action(args):
    model = load_model(args.file)
    if args.coaction is None and args.derivation is None:
        raise DomainError("give --coaction and/or --derivation")
    out: dict = {"model": model_to_dict(model)}
    lines = [model.equation()]
    D = None
    status = 0
    if args.coaction is not None:
        with open(args.coaction, encoding="utf-8") as fh:
            c = parse_coaction(fh.read(), model.field)
        v, g = verify_coaction(model, c), coaction_group_law(c)
        out["coaction"] = {"chart": c.chart, "relation": c.kind, "order": c.order,
                           "verify": v.to_dict(), "groupLaw": g.to_dict()}
        lines.append(f"  coaction ({c.chart}, {c.kind} {c.order}): {v.status}"
                     + (f", witness {v.witness}" if v.witness else ""))
        lines.append(f"  group law: {g.status}" + (f", witness {g.witness}" if g.witness else ""))
        if not (v.ok and g.ok):
            status = 1
        if v.ok and not c.symbols:
            try:
                D = induced_derivation(c)
            except NotApplicableError as exc:
                out["coaction"]["derivation"] = {"error": exc.code, "message": str(exc)}
    if args.derivation is not None:
        D = Derivation.from_strings(model.field, **_parse_components(args.derivation))
    if D is not None:
        verdict = classify_p_closed(D, model)
        out["derivation"] = {"D": D.format(), "pClosed": verdict.to_dict(model.field)}
        lines.append(f"  D = {D.format()}: {verdict.kind}")
        if args.margin:
            m = zero_scheme_margin(D, model, None, args.sections, _seed())
            out["margin"] = m.to_dict()
            lines.append(f"  margin = {m.margin} (isolated {m.isolated_length}, Z^2 = "
                         f"{m.self_intersection}); excluded fiber {m.excluded_type}")
            if m.verdict.get("threshold") is not None:
                word = "satisfied" if m.verdict["satisfied"] else "not satisfied"
                lines.append(f"  margin > {m.verdict['threshold']}: {word}")
    return out, "\n".join(lines), status


def cmd_igusa(args):
    d = igusa_datum(args.p, args.n).to_dict()
    text = (f"p = {d['p']}, n = {d['n']}: supersingular j = {d['ssCount']}, h_p = {d['h_p']}, "
            f"genus = {d['genus']}, bound = {d['bound']}")
    return d, text, 0


def cmd_lattice(args):
    v = lattice_check(KodairaType.parse(args.t1), KodairaType.parse(args.t2), args.p)
    out = v.to_dict()
    text = f"{args.t1} + {args.t2} at p = {args.p}: {v.status}" + \
        (f" ({', '.join(out['reasons'])})" if out["reasons"] else "") + \
        (f"; {v.detail}" if v.detail else "")
    return out, text, 0


def cmd_catalog(args):
    results = run_catalog(args.filter, _seed())
    out = {"entries": [r.to_dict() for r in results],
           "passed": sum(r.status == "pass" for r in results),
           "failed": sum(r.status in ("fail", "error") for r in results),
           "pending": sum(r.status == "pending" for r in results)}
    lines = []
    for r in results:
        lines.append(f"{r.status.upper():8} {r.id}" + (f"  ({r.detail})" if r.detail else ""))
        for c in r.checks:
            if not c.ok:
                lines.append(f"           {c.name}: expected {c.expected}, got {c.actual}")
    lines.append(f"{out['passed']} passed, {out['failed']} failed, {out['pending']} pending")
    return out, "\n".join(lines), 1 if out["failed"] else 0


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    group = fmt.add_mutually_exclusive_group()
    group.add_argument("--json", dest="format", action="store_const", const="json")
    group.add_argument("--text", dest="format", action="store_const", const="text")
    fmt.set_defaults(format="json")

    parser = argparse.ArgumentParser(prog="kodaira", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[fmt], help="singular fibers, c2 and notes")
    p.add_argument("file")
    p.add_argument("--mu", type=int, default=None, help="p^n: add the mu_{p^n} fixed-point ledger")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("twist", parents=[fmt], help="quadratic twist by d")
    p.add_argument("file")
    p.add_argument("--d", required=True)
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("frobenius", parents=[fmt], help="compare fibers after t -> t^(p^n)")
    p.add_argument("file")
    p.add_argument("--iters", type=int, required=True)
    p.set_defaults(func=cmd_frobenius)

    p = sub.add_parser("action", parents=[fmt], help="check a coaction and/or a vector field")
    p.add_argument("file")
    p.add_argument("--coaction", default=None)
    p.add_argument("--derivation", default=None, help="e.g. 't=t,x=2*x'")
    p.add_argument("--margin", action="store_true", help="zero-scheme margin of the vector field")
    p.add_argument("--sections", type=int, default=1)
    p.set_defaults(func=cmd_action)

    p = sub.add_parser("igusa", parents=[fmt], help="Igusa genus and base-genus bound")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_igusa)

    p = sub.add_parser("lattice", parents=[fmt], help="two-fiber configuration check")
    p.add_argument("--t1", required=True)
    p.add_argument("--t2", required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("catalog", parents=[fmt], help="run the regression catalog")
    p.add_argument("--filter", default="*")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, text, status = args.func(args)
    except KodairaError as exc:
        print(json.dumps(exc.to_dict()), file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": "IO_ERROR", "message": str(exc)}), file=sys.stderr)
        return 2
    if args.format == "text":
        print(text)
    else:
        print(json.dumps(out, indent=2))
    return status


if __name__ == "__main__":
    sys.exit(main())
