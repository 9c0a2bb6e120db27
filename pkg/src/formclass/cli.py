"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 a checked statement failed, 3 oracle bound too small.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from . import adelic, classlevel, forms, induction, sweep
from .cache import atomic_write, cached, dumps
from .congruence import contains_minus_identity, gamma1, parse_group
from .errors import GroupSpecError, InvalidDiscriminantError, OracleBoundError, TheoremViolation
from .matrices import as_nested

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_ORACLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _group(args):
    spec = args.group or f"gamma1:{args.level}"
    G = parse_group(spec)
    if G.level != args.level:
        raise UsageError(f"group {spec} has level {G.level}, not {args.level}")
    return G


def cmd_forms(args) -> tuple[dict, int]:
    forms.check_discriminant(args.disc)
    if args.level < 0:
        raise UsageError("level must be positive")
    R = forms.reduced_forms(args.disc)
    out = {
        "disc": args.disc,
        "class_number": len(R),
        "reduced": [forms.to_json(Q) for Q in R],
    }
    if args.level:
        out["level"] = args.level
        out["residues"] = [list(t) for t in sorted(forms.residue_forms(args.disc, args.level))]
    return out, EXIT_OK


def cmd_classgroup(args) -> tuple[dict, int]:
    forms.check_discriminant(args.disc)
    G = _group(args)

    def compute():
        L = classlevel.enumerate_classes(args.disc, args.level, G)
        table = classlevel.group_table(args.disc, args.level) if G == gamma1(args.level) else None
        return classlevel.to_json(L, table)

    if args.no_cache:
        return compute(), EXIT_OK
    params = {"disc": args.disc, "level": args.level, "group": G.label}
    value, _ = cached("classgroup", params, compute)
    return value, EXIT_OK


def cmd_acts(args) -> tuple[dict, int]:
    forms.check_discriminant(args.disc)
    G = _group(args)
    v = induction.acts(G, args.disc, args.level)
    crit = induction.acts_criterion(G, args.disc, args.level)
    out = {"disc": args.disc, "level": args.level, "group": G.label, **v.to_json()}
    out["modulus"] = induction.action_modulus(args.disc, args.level)
    out["criterion"] = crit
    if not crit:
        Q, gamma = induction.counterexample(G, args.disc, args.level)
        out["case_witness"] = {"form": forms.to_json(Q), "matrix": as_nested(gamma)}
    if crit != v.acts:
        return out, EXIT_VIOLATION
    return out, EXIT_OK


def cmd_induces(args) -> tuple[dict, int]:
    forms.check_discriminant(args.disc)
    G = _group(args)
    v = induction.induces(G, args.disc, args.level)
    out = {"disc": args.disc, "level": args.level, "group": G.label, **v.to_json()}
    return out, EXIT_OK


def cmd_adelic(args) -> tuple[dict, int]:
    D, N = args.disc, args.level
    forms.check_discriminant(D)
    G = _group(args)
    shadow = adelic.build_shadow(D, N, G)
    part, part_ok = adelic.sl2_part(shadow)
    out = {
        "disc": D,
        "level": N,
        "group": G.label,
        "shadow": shadow.to_json(),
        "sl2_part": {"order": len(part), "matches": part_ok},
        "determinant_condition": adelic.determinant_condition(shadow, D, N),
        "diagonal_condition": adelic.diagonal_condition(shadow),
    }
    code = EXIT_OK
    if args.check in ("closure", "all"):
        applicable = (
            induction.acts(G, D, N).acts
            and induction.induces(G, D, N).induces
            and D not in (-3, -4)
            and contains_minus_identity(G)
        )
        closed, bad = adelic.bottom_row_closure_check(D, N, G)
        equal = adelic.shadow_equals_literal_set(D, N, G)
        out["closure"] = {
            "applicable": applicable,
            "bottom_rows_closed": closed,
            "violators": [as_nested(m) for m in bad[:5]],
            "equals_literal_set": equal,
        }
        if not applicable:
            logging.warning("closure hypotheses fail for %s at (%d, %d); reported only", G.label, D, N)
        elif not (closed and equal):
            code = EXIT_VIOLATION
    if args.check in ("equivalence", "all"):
        rep = adelic.canonical_model_equivalence(D, N, G)
        out["equivalence"] = rep
        if rep["status"] == "fail":
            code = EXIT_VIOLATION
    return out, code


def _write_report(report: dict, timings: list, outdir: Path, stem: str) -> None:
    atomic_write(outdir / f"{stem}.json", dumps(report))
    atomic_write(outdir / f"{stem}.md", sweep.markdown(report, timings))


def cmd_sweep(args) -> tuple[dict, int]:
    kw = {}
    if args.disc_list:
        kw["discriminants"] = sweep._int_list(args.disc_list)
    if args.levels:
        kw["levels"] = sweep._int_list(args.levels)
    if args.groups:
        kw["groups"] = tuple(g.strip() for g in args.groups.split(","))
    cfg = sweep.SweepConfig(**kw)
    report, timings = sweep.verify_all(cfg, args.jobs)
    if args.output:
        _write_report(report, timings, Path(args.output), "sweep")
    return report, EXIT_VIOLATION if report["summary"]["fail"] else EXIT_OK


def cmd_verify_all(args) -> tuple[dict, int]:
    cfg = sweep.load_config(args.config)
    jobs = args.jobs or cfg.jobs
    outdir = Path(args.output or cfg.output)
    report, timings = sweep.verify_all(cfg, jobs)
    _write_report(report, timings, outdir, "report")
    s = report["summary"]
    summary = {"summary": s, "report": str(outdir / "report.json"), "config_hash": report["config_hash"]}
    return summary, EXIT_VIOLATION if s["fail"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="formclass", description="Level-N form class groups of imaginary quadratic discriminants.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, group=True):
        sp.add_argument("--disc", type=int, required=True)
        sp.add_argument("--level", type=int, required=True)
        if group:
            sp.add_argument("--group", help="sl2:N, gamma1:N, gamma0:M@N, gammaG:N:t1,t2 or gens:N:[[q,r,s,t],...]")

    sp = sub.add_parser("forms", help="reduced forms and level-N residues")
    sp.add_argument("--disc", type=int, required=True)
    sp.add_argument("--level", type=int, default=0)
    sp.set_defaults(func=cmd_forms)

    sp = sub.add_parser("classgroup", help="class reps (and the group table for gamma1)")
    common(sp)
    sp.add_argument("--no-cache", action="store_true")
    sp.set_defaults(func=cmd_classgroup)

    sp = sub.add_parser("acts", help="does the group preserve level-N forms")
    common(sp)
    sp.set_defaults(func=cmd_acts)

    sp = sub.add_parser("induces", help="does the group induce a form class group")
    common(sp)
    sp.set_defaults(func=cmd_induces)

    sp = sub.add_parser("adelic", help="mod-N shadow checks")
    common(sp)
    sp.add_argument("--check", choices=("closure", "equivalence", "all"), default="all")
    sp.set_defaults(func=cmd_adelic)

    sp = sub.add_parser("sweep", help="ad hoc grid run, report on stdout")
    sp.add_argument("--disc", dest="disc_list", help="comma-separated discriminants")
    sp.add_argument("--levels", help="e.g. 1-4 or 2,3,5")
    sp.add_argument("--groups", help="families: gamma1,gamma0,gammaG,sl2,exotic")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify-all", help="full grid run, writes report.json and report.md")
    sp.add_argument("--config", default="default", help="'default' or a key = value file")
    sp.add_argument("--jobs", type=int, default=0)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_verify_all)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out, code = args.func(args)
    except UsageError as exc:
        print(dumps({"error": "usage", "message": str(exc)}), end="", file=sys.stderr)
        return EXIT_USAGE
    except (GroupSpecError, InvalidDiscriminantError, ValueError, OSError) as exc:
        print(dumps({"error": type(exc).__name__, "message": str(exc)}), end="", file=sys.stderr)
        return EXIT_USAGE
    except TheoremViolation as exc:
        print(dumps({"error": "violation", "message": str(exc)}), end="", file=sys.stderr)
        return EXIT_VIOLATION
    except OracleBoundError as exc:
        print(dumps({"error": "oracle-bound", "message": str(exc)}), end="", file=sys.stderr)
        return EXIT_ORACLE
    sys.stdout.write(dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
