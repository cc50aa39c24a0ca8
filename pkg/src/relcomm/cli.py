"""Command-line interface: ``relcomm <command> [options]``.

Exit codes: 0 success or agreement, 1 a sweep or cross-check found a
disagreement, 2 bad input (unreadable table, unknown variety, budget exceeded,
unsupported request).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import commutators as cm
from . import galois
from .algebra import full_ideal, ideal_closure, is_associative, trivial_ideal
from .corpus import BUNDLED_GROUPS, bundled, corpus_loops, gen_loops, load
from .errors import RelcommError
from .varieties import AB, GP, VarietyDescriptor, get_variety, nil, reflection, sol, verbal_subobject
from .words import parse_word

HOPF_MESSAGE = (
    "Hopf formulas and second homology H2 are out of scope: they need projective "
    "presentations by infinite free objects, which finite operation tables cannot represent."
)


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _variety(args, kind: str) -> VarietyDescriptor:
    if getattr(args, "words", None):
        lines = [ln.split("#", 1)[0].strip() for ln in Path(args.words).read_text().splitlines()]
        wgen = tuple(parse_word(ln) for ln in lines if ln)
        if not wgen:
            raise InputError("word file contains no words")
        return VarietyDescriptor(Path(args.words).stem, kind, wgen)
    name = args.variety or ("Gp" if kind == "loop" else "Ab")
    try:
        V = get_variety(name)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    if V.kind != kind:
        raise InputError(f"variety {V.name} applies to {V.kind}s, the algebra is a {kind}")
    return V


def _ideal(entry, A, spec: str):
    spec = spec.strip()
    if spec == "full":
        return full_ideal(A)
    if spec == "trivial":
        return trivial_ideal(A)
    if spec in entry.ideals:
        return ideal_closure(A, entry.ideals[spec])
    try:
        gens = [int(t) for t in spec.replace(",", " ").split()]
    except ValueError:
        known = ", ".join(sorted(entry.ideals)) or "none"
        raise InputError(f"ideal {spec!r} is neither a generator list, full, trivial nor a named ideal ({known})") from None
    if any(not 0 <= g < A.order for g in gens):
        raise InputError(f"ideal generators must lie in 0..{A.order - 1}")
    return ideal_closure(A, gens)


def _members(J) -> list[int]:
    return [int(v) for v in J.members]


def _table(A) -> list:
    return A.table("mul").tolist()


# ---------------------------------------------------------------------------
# commands; each returns (inputs, results, diagnostics, exit code)


def cmd_validate(args):
    entry = load(args.algebra)
    A = entry.algebra()
    results = {
        "kind": A.kind,
        "order": A.order,
        "associative": is_associative(A),
        "ideals": [_members(J) for J in cm.ideal_lattice(A)],
        "named_ideals": {k: _members(_ideal(entry, A, k)) for k in sorted(entry.ideals)},
    }
    return {"algebra": entry.id}, results, {}, 0


def cmd_verbal(args):
    entry = load(args.algebra)
    A = entry.algebra()
    V = _variety(args, A.kind)
    J = verbal_subobject(A, V)
    return {"algebra": entry.id, "variety": V.name}, {"members": _members(J), "in_variety": J.is_trivial()}, {}, 0


def cmd_reflect(args):
    entry = load(args.algebra)
    A = entry.algebra()
    V = _variety(args, A.kind)
    IA, eta = reflection(A, V)
    results = {
        "order": IA.order,
        "kind": IA.kind,
        "associative": is_associative(IA),
        "table": _table(IA),
        "eta": eta.map.tolist(),
        "kernel": _members(verbal_subobject(A, V)),
    }
    return {"algebra": entry.id, "variety": V.name}, results, {}, 0


def cmd_central(args):
    entry = load(args.algebra)
    A = entry.algebra()
    V = _variety(args, A.kind)
    K = _ideal(entry, A, args.K)
    e = galois.quotient_extension(K)
    central = galois.is_central_extension(e, V)
    results = {
        "kernel": _members(K),
        "central": central,
        "trivial": galois.is_trivial_extension(e, V),
        "commutator": _members(galois.relative_commutator_of_extension(e, V)),
    }
    diagnostics = {}
    if A.kind == "loop" and V.key == GP.key:
        assoc = cm.associator_subloop(K, full_ideal(A), full_ideal(A))
        diagnostics["associator_KAA"] = cm.lifted(assoc, K, full_ideal(A))
        diagnostics["associator_agrees"] = assoc.is_trivial() == central
    code = 1 if diagnostics.get("associator_agrees") is False else 0
    return {"algebra": entry.id, "variety": V.name, "K": args.K}, results, diagnostics, code


def cmd_centralise(args):
    entry = load(args.algebra)
    A = entry.algebra()
    V = _variety(args, A.kind)
    K = _ideal(entry, A, args.K)
    e = galois.quotient_extension(K)
    central, rho = galois.centralisation(e, V)
    results = {
        "commutator": _members(galois.relative_commutator_of_extension(e, V)),
        "order": central.src.order,
        "table": _table(central.src),
        "rho": rho.map.tolist(),
        "map": central.f.map.tolist(),
    }
    return {"algebra": entry.id, "variety": V.name, "K": args.K}, results, {}, 0


def cmd_double_central(args):
    entry = load(args.algebra)
    A = entry.algebra()
    V = _variety(args, A.kind)
    M, N = _ideal(entry, A, args.M), _ideal(entry, A, args.N)
    sq = cm.commutator_square(M, N)
    verdicts = galois.double_central_verdicts(sq, V)
    agree = len(set(verdicts.values())) == 1
    results = {
        "double_extension": galois.is_double_extension(sq),
        "double_central": all(verdicts.values()),
        "squares": {f"{i}{j}": v for (i, j), v in sorted(verdicts.items())},
    }
    inputs = {"algebra": entry.id, "variety": V.name, "M": _members(M), "N": _members(N)}
    return inputs, results, {"squares_agree": agree}, 0 if agree else 1


def cmd_commutator(args):
    entry = load(args.algebra)
    A = entry.algebra()
    V = _variety(args, A.kind)
    M, N = _ideal(entry, A, args.M), _ideal(entry, A, args.N)
    if args.method == "all":
        methods = ("words", "oracle") if A.kind == "group" else ("loops", "oracle")
    else:
        methods = (args.method,)
    if "loops" in methods and V.key != GP.key:
        raise InputError("the associator method computes commutators relative to Gp")
    report = cm.commutator_report(M, N, V, methods, p_factor=not args.no_p_factor)
    inputs = {"algebra": entry.id, "variety": V.name, "M": _members(M), "N": _members(N), "method": args.method}
    if len(methods) == 1:
        results = {"members": report.results[methods[0]]}
    else:
        results = {m: {"members": v} for m, v in report.results.items()}
        results["agree"] = report.agree
    diagnostics = {"p_factor": not args.no_p_factor}
    return inputs, results, diagnostics, 0 if report.agree else 1, report.timing


def _sweep_targets(args, kinds):
    if args.algebra:
        entry = load(args.algebra)
        return [entry]
    out = []
    if "group" in kinds:
        out += [bundled(n) for n in BUNDLED_GROUPS]
    if "loop" in kinds:
        out += corpus_loops(args.max_order)
    return out


def _release_generated(entry):
    # a full loop sweep would otherwise keep every lattice and square alive
    if entry.source == "generated":
        entry.release()


def cmd_sweep_double_centrality(args):
    targets = _sweep_targets(args, ("group", "loop"))
    summary = []
    failures = []
    totals = {"algebras": 0, "pairs": 0, "disagreements": 0, "square_mismatches": 0, "budget_exceeded": 0}
    for entry in targets:
        A = entry.algebra()
        if args.variety or args.words:
            varieties = [_variety(args, A.kind)]
        else:
            varieties = [AB, nil(2), sol(2)] if A.kind == "group" else [GP]
        for V in varieties:
            r = cm.double_centrality_sweep(A, V)
            totals["algebras"] += 1
            totals["pairs"] += len(r.pairs)
            totals["disagreements"] += len(r.disagreements)
            mism = [p for p in r.pairs if not p.squares_agree]
            totals["square_mismatches"] += len(mism)
            totals["budget_exceeded"] += len(r.errors)
            row = {"algebra": entry.id, "variety": V.name, "pairs": len(r.pairs), "disagreements": len(r.disagreements)}
            if args.details:
                row["verdicts"] = [p.as_dict() for p in r.pairs]
            summary.append(row)
            for p in r.disagreements + mism:
                failures.append({"algebra": entry.id, "variety": V.name, **p.as_dict()})
            for err in r.errors:
                failures.append({"algebra": entry.id, "variety": V.name, **err})
        _release_generated(entry)
    inputs = {"algebra": args.algebra, "max_order": args.max_order, "variety": args.variety}
    ok = not failures
    return inputs, {"totals": totals, "algebras": summary, "agree": ok}, {"failures": failures}, 0 if ok else 1


def cmd_sweep_associator(args):
    targets = _sweep_targets(args, ("loop",))
    summary = []
    failures = []
    totals = {"loops": 0, "pairs": 0, "disagreements": 0, "budget_exceeded": 0}
    for entry in targets:
        A = entry.algebra()
        if A.kind != "loop":
            raise InputError("the associator sweep needs loops")
        r = cm.associator_sweep(A)
        totals["loops"] += 1
        totals["pairs"] += len(r.pairs)
        totals["disagreements"] += len(r.disagreements)
        totals["budget_exceeded"] += len(r.errors)
        row = {"algebra": entry.id, "pairs": len(r.pairs), "disagreements": len(r.disagreements)}
        if args.details:
            row["results"] = [p.as_dict() for p in r.pairs]
        summary.append(row)
        failures += [{"algebra": entry.id, **p.as_dict()} for p in r.disagreements]
        failures += [{"algebra": entry.id, **err} for err in r.errors]
        _release_generated(entry)
    ok = not failures
    inputs = {"algebra": args.algebra, "max_order": args.max_order}
    return inputs, {"totals": totals, "loops": summary, "agree": ok}, {"failures": failures}, 0 if ok else 1


def cmd_gen_loops(args):
    entries = gen_loops(args.order)
    nonassoc = sum(1 for e in entries if not is_associative(e.algebra()))
    results = {"count": len(entries), "nonassociative": nonassoc}
    if args.tables:
        results["tables"] = {e.id: e.table.tolist() for e in entries}
    if args.out:
        from .corpus import format_table

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for e in entries:
            (out / f"{e.id}.tbl").write_text(format_table("loop", e.table))
    return {"order": args.order}, results, {"reduced_form": True, "isomorphic_duplicates": True}, 0


COMMANDS = {
    "validate": cmd_validate,
    "verbal": cmd_verbal,
    "reflect": cmd_reflect,
    "central": cmd_central,
    "centralise": cmd_centralise,
    "double-central": cmd_double_central,
    "commutator": cmd_commutator,
    "sweep-thm31": cmd_sweep_double_centrality,
    "sweep-thm42": cmd_sweep_associator,
    "gen-loops": cmd_gen_loops,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--no-timing", action="store_true", help="omit the timing field (for byte-identical reports)")
    common.add_argument("--budget", type=int, help="evaluation cap (overrides RELCOMM_BUDGET)")

    parser = argparse.ArgumentParser(prog="relcomm", description="Relative commutators of finite groups and loops.")
    sub = parser.add_subparsers(dest="command", required=True)

    def algebra_args(p, required=True):
        p.add_argument("--algebra", required=required, help="table file, or a bundled name such as s3 or l5.tbl")

    def variety_args(p):
        p.add_argument("--variety", help="Ab, Gp, Nil_1..Nil_3 or Sol_1..Sol_3 (default Ab for groups, Gp for loops)")
        p.add_argument("--words", help="file of defining words, one per line, in prefix syntax")

    p = sub.add_parser("validate", parents=[common], help="check a table and list its ideals")
    algebra_args(p)

    for name, helptext in (("verbal", "verbal ideal"), ("reflect", "reflection into the subvariety")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        algebra_args(p)
        variety_args(p)

    for name, helptext in (("central", "is A -> A/K central / trivial"), ("centralise", "centralisation of A -> A/K")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        algebra_args(p)
        variety_args(p)
        p.add_argument("--K", required=True, help="kernel: generator list, full, trivial or a named ideal")

    p = sub.add_parser("double-central", parents=[common], help="double centrality of the square of M and N")
    algebra_args(p)
    variety_args(p)
    p.add_argument("--M", required=True)
    p.add_argument("--N", required=True)

    p = sub.add_parser("commutator", parents=[common], help="relative commutator [M, N]")
    algebra_args(p)
    variety_args(p)
    p.add_argument("--M", required=True, help="generator list, full, trivial or a named ideal")
    p.add_argument("--N", required=True)
    p.add_argument("--method", choices=("words", "loops", "oracle", "all"), default="all")
    p.add_argument("--no-p-factor", action="store_true", help="drop the w(p) generators (diagnostic)")

    p = sub.add_parser("sweep-thm31", parents=[common], help="commutator vanishing versus double centrality")
    algebra_args(p, required=False)
    variety_args(p)
    p.add_argument("--max-order", type=int, default=6)
    p.add_argument("--details", action="store_true")

    p = sub.add_parser("sweep-thm42", parents=[common], help="associator commutator versus the oracle on loops")
    algebra_args(p, required=False)
    p.add_argument("--max-order", type=int, default=6)
    p.add_argument("--details", action="store_true")

    p = sub.add_parser("gen-loops", parents=[common], help="enumerate reduced loop tables of an order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--tables", action="store_true", help="include every table in the report")
    p.add_argument("--out", help="also write each table to this directory")

    sub.add_parser("hopf", parents=[common], help="rejected: Hopf formulas and H2 are out of scope")
    return parser


def _render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    for section in ("inputs", "results", "diagnostics"):
        body = report.get(section) or {}
        if not body:
            continue
        lines.append(f"{section}:")
        for k in sorted(body):
            lines.append(f"  {k}: {json.dumps(body[k], sort_keys=True)}")
    if "timing" in report:
        lines.append(f"timing: {json.dumps(report['timing'], sort_keys=True)}")
    return "\n".join(lines)


def run_command(args) -> tuple[dict, int]:
    """Execute a parsed command; returns the report and the exit code."""
    start = time.perf_counter()
    out = COMMANDS[args.command](args)
    inputs, results, diagnostics, code = out[:4]
    timing = dict(out[4]) if len(out) > 4 else {}
    timing["total"] = time.perf_counter() - start
    report = {"command": args.command, "inputs": inputs, "results": results, "diagnostics": diagnostics}
    if not args.no_timing:
        report["timing"] = timing
    return report, code


def _error_report(args, message: str) -> dict:
    report = {"command": getattr(args, "command", None), "inputs": {}, "results": {}, "diagnostics": {"error": message}}
    if not getattr(args, "no_timing", True):
        report["timing"] = {}
    return report


HOPF_REQUESTS = ("hopf", "h2", "hopf-formula", "homology")


def _reject_hopf(argv: list[str]) -> int:
    as_json = "json" in argv
    report = {"command": argv[0], "inputs": {}, "results": {}, "diagnostics": {"error": HOPF_MESSAGE}}
    print(json.dumps(report, sort_keys=True) if as_json else f"error: {HOPF_MESSAGE}", file=sys.stderr)
    return 2


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0].lower() in HOPF_REQUESTS:
        return _reject_hopf(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    previous = os.environ.get("RELCOMM_BUDGET")
    if args.budget is not None:
        if args.budget <= 0:
            parser.error("--budget must be positive")
        os.environ["RELCOMM_BUDGET"] = str(args.budget)
    try:
        report, code = run_command(args)
    except (InputError, RelcommError, FileNotFoundError, ValueError) as exc:
        report, code = _error_report(args, f"{type(exc).__name__}: {exc}"), 2
    finally:
        # --budget applies to this invocation only
        if previous is None:
            os.environ.pop("RELCOMM_BUDGET", None)
        else:
            os.environ["RELCOMM_BUDGET"] = previous
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, default=_json_default)
    else:
        text = _render_text(report)
    stream = sys.stderr if code == 2 else sys.stdout
    print(text, file=stream)
    return code


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


if __name__ == "__main__":
    sys.exit(main())
