"""Command-line front end: ``herbrand-lab <command> [options]``.

Every command prints human-readable text by default.  With ``--format json``
it prints line-delimited JSON records (sorted keys, compact separators), so
re-serializing a parsed record reproduces the line byte for byte.

Exit status depends only on the kind of report: 0 for a definite or
consistent outcome, 1 when budgets left the outcome unknown, 2 for usage
and parse errors, 3 for an internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable, Optional, TextIO

from .aliens import PremiseError, generalize, maximal_aliens, reference_symbols
from .fuzz import PROPERTIES, FuzzConfig, fuzz
from .herbrand import least_model_upto
from .lab import (
    InternalInconsistency,
    build_counterexample,
    counterexample_template,
    equivalence_verdict,
    verify_counterexample,
)
from .sld import Budget, RouteDisagreement, entails, sld_answers
from .syntax import (
    Program,
    Query,
    Signature,
    SignatureError,
    SyntaxError_,
    format_symbols,
    occurring_symbols,
    parse_program,
    parse_query,
    parse_symbols,
    render_program,
    render_query,
)
from .terms import Substitution, render_term

__all__ = ["KINDS", "exit_code_for", "dumps_record", "build_parser", "main"]

SEED_ENV = "HERBRAND_LAB_SEED"

_EXIT = {
    "definite": 0,
    "consistent": 0,
    "unknown": 1,
    "usage": 2,
    "inconsistent": 3,
}
KINDS = tuple(_EXIT)


def exit_code_for(kind: str) -> int:
    try:
        return _EXIT[kind]
    except KeyError:
        raise ValueError(f"unknown report kind {kind!r}") from None


def dumps_record(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class UsageError(Exception):
    pass


class _Out:
    """Collects output in either text or record form."""

    def __init__(self, fmt: str, stream: TextIO):
        self.fmt = fmt
        self.stream = stream

    @property
    def json(self) -> bool:
        return self.fmt == "json"

    def text(self, line: str = "") -> None:
        if not self.json:
            print(line, file=self.stream)

    def record(self, record_type: str, **fields) -> None:
        if self.json:
            print(dumps_record(dict(fields, record=record_type)), file=self.stream)


# ---------------------------------------------------------------------------
# Input resolution


def _alphabet_arg(text: Optional[str]):
    """``None`` (no flag), ``("set", syms)`` or ``("add", syms)`` for ``+f/1``."""
    if text is None:
        return None
    text = text.strip()
    if text.startswith("+"):
        return "add", parse_symbols(text[1:])
    return "set", parse_symbols(text)


def _load(args) -> tuple[Program, Signature]:
    if not args.program:
        raise UsageError("--program is required")
    try:
        with open(args.program, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.program}: {exc.strerror}") from None
    alpha = _alphabet_arg(args.alphabet)
    if alpha is None or alpha[0] == "set":
        return parse_program(text, os.path.basename(args.program), None if alpha is None else alpha[1])
    prog, sig = parse_program(text, os.path.basename(args.program))
    return prog, Signature(sig.symbols | frozenset(alpha[1]), sig.predicates)


def _query(args) -> Query:
    if args.query is None or not args.query.strip():
        raise UsageError("a nonempty --query is required")
    return parse_query(args.query)


def _query_in(sig: Signature, query: Query) -> None:
    missing = occurring_symbols(query) - sig.symbols
    if missing:
        raise SignatureError(f"query uses symbols outside the alphabet: {format_symbols(missing)}")


def _budget(args) -> Budget:
    return Budget(max_depth=args.max_depth, max_nodes=args.max_nodes)


def _bindings(query: Query, sigma: Substitution) -> str:
    parts = [f"{v.name} = {render_term(sigma(v))}" for v in query.variables() if v in sigma]
    return ", ".join(parts) if parts else "true"


def _verdict_line(label: str, v) -> str:
    line = f"{label} : {v.label}"
    return f"{line}   [{v.evidence}]" if v.evidence else line


# ---------------------------------------------------------------------------
# Commands


def cmd_solve(args, out: _Out) -> str:
    prog, _ = _load(args)
    query = _query(args)
    res = sld_answers(prog, query, _budget(args), keep_duplicates=args.keep_duplicates)
    for sigma in res.answers:
        out.text(_bindings(query, sigma))
        out.record(
            "answer",
            bindings={v.name: render_term(sigma(v)) for v in query.variables()},
            instance=render_query(query.substitute(sigma)),
        )
    if not res.answers:
        out.text("no answers")
    out.text("(exhausted)" if res.exhausted else "(budget hit: more answers may exist)")
    kind = "definite" if res.exhausted else "unknown"
    out.record("summary", answers=len(res.answers), exhausted=res.exhausted, nodes=res.nodes, kind=kind)
    return kind


def cmd_check(args, out: _Out) -> str:
    prog, sig = _load(args)
    query = _query(args)
    _query_in(sig, query)
    report = equivalence_verdict(prog, query, sig, _budget(args), args.depth)
    out.text(f"alphabet: {format_symbols(sig.symbols)}")
    out.text(_verdict_line("M_P |= Q", report.model_verdict))
    out.text(_verdict_line("P |= Q", report.entails_verdict))
    out.text(f"theorem-1 conditions: {report.conditions.describe()}")
    for c in report.conditions.cond_b:
        out.text(f"  {render_query(Query((c.atom,)))}: {c.k} variables, {c.available} spare constants")
    if report.compared:
        agree = report.model_verdict.status is report.entails_verdict.status
        out.text("verdicts agree" if agree else "verdicts differ")
    else:
        out.text("no definite comparison within budget")
    out.record("check", alphabet=format_symbols(sig.symbols), query=render_query(query), **report.to_dict())
    return report.kind


def cmd_entails(args, out: _Out) -> str:
    prog, _ = _load(args)
    query = _query(args)
    v = entails(prog, query, _budget(args))
    out.text(_verdict_line("P |= Q", v))
    kind = "definite" if v.definite else "unknown"
    out.record("entails", query=render_query(query), verdict=v.to_dict(), kind=kind)
    return kind


def _reference(args):
    if args.occurring is not None:
        return frozenset(parse_symbols(args.occurring))
    prog, _ = _load(args)
    return reference_symbols(prog)


def cmd_aliens(args, out: _Out) -> str:
    F = _reference(args)
    query = _query(args)
    found = maximal_aliens(query, F)
    for term, paths in found:
        shown = " ".join(".".join(str(i) for i in p) for p in paths)
        out.text(f"{render_term(term)}   at {shown}")
        out.record("alien", term=render_term(term), paths=[list(p) for p in paths])
    if not found:
        out.text("no aliens")
    out.record("summary", reference=format_symbols(F), aliens=len(found), kind="definite")
    return "definite"


def cmd_generalize(args, out: _Out) -> str:
    F = _reference(args)
    query = _query(args)
    res = generalize(query, F)
    rho = {v.name: render_term(t) for v, t in res.rho.items()}
    out.text(render_query(res.generalized))
    for name, t in rho.items():
        out.text(f"  {name} = {t}")
    out.record(
        "generalization",
        query=render_query(query),
        generalized=render_query(res.generalized),
        rho=rho,
        positions=[list(p) for p in res.positions],
        kind="definite",
    )
    return "definite"


def cmd_model(args, out: _Out) -> str:
    prog, sig = _load(args)
    m = least_model_upto(prog, sig, args.depth, max_stages=args.max_stages)
    atoms = [render_term(a) for a in m.sorted_atoms()]
    for a in atoms:
        out.text(a)
    status = "fixpoint" if m.fixpoint_reached else "approximation"
    out.text(f"% {len(atoms)} atoms, stage {m.stage}, term depth <= {args.depth}, {status}")
    out.record(
        "model",
        atoms=atoms,
        stage=m.stage,
        depth_cap=args.depth,
        fixpoint=m.fixpoint_reached,
        alphabet=format_symbols(sig.symbols),
        kind="definite",
    )
    return "definite"


def cmd_counterexample(args, out: _Out) -> str:
    if args.occurring is None:
        raise UsageError("--occurring is required")
    alpha = _alphabet_arg(args.alphabet)
    if alpha is None:
        raise UsageError("--alphabet is required")
    F0 = frozenset(parse_symbols(args.occurring))
    syms = frozenset(alpha[1]) | (F0 if alpha[0] == "add" else frozenset())
    query = _query(args)
    sig = Signature(syms | occurring_symbols(query))
    tpl = counterexample_template(F0, sig, query)
    prog = build_counterexample(F0, sig, query)
    text = render_program(prog)
    out.text(text.rstrip("\n"))
    rec = {
        "program": text,
        "occurring": format_symbols(F0),
        "alphabet": format_symbols(sig.symbols),
        "query": render_query(query),
        "atom": render_term(tpl.atom),
        "template": render_term(tpl.template),
        "clauses": len(prog.clauses),
    }
    kind = "definite"
    if args.verify:
        chk = verify_counterexample(F0, sig, query, program=prog, budget=_budget(args))
        out.text(f"% occurring symbols = F0: {chk.occurring_ok}")
        out.text(f"% ground coverage up to depth 2: {chk.coverage_ok} ({chk.covered} atoms)")
        out.text(f"% witness {render_term(chk.witness)} refuted after extension: {chk.refuted_ok}")
        rec["verified"] = chk.ok
        rec["witness"] = render_term(chk.witness)
        if not chk.ok:
            kind = "inconsistent"
    out.record("counterexample", kind=kind, **rec)
    return kind


def cmd_fuzz(args, out: _Out) -> str:
    seed = args.seed
    if seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            seed = int(env) if env else 1
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    props = tuple(args.property or ("corollary1",))
    for p in props:
        if p not in PROPERTIES:
            raise UsageError(f"unknown property {p!r}; choose from {', '.join(PROPERTIES)}")
    if args.cases < 0:
        raise UsageError("--cases must be >= 0")
    cfg = FuzzConfig(seed=seed, cases=args.cases, properties=props, budget=_budget(args))
    reports = fuzz(cfg)
    bad = 0
    for r in reports:
        s = r.summary()
        bad += s["violations"]
        out.text(
            f"{r.prop}: {s['cases']} cases, {s['definite']} definite, {s['unknown']} unknown, "
            f"{s['violations']} violations (seed {seed})"
        )
        for v in r.violations:
            out.text(f"  violation, reproduce with case seed {v['case_seed']}")
        if out.json:
            for c in r.cases:
                out.record("case", property=r.prop, **c)
        out.record("campaign", **s)
    return "inconsistent" if bad else "definite"


COMMANDS: dict[str, Callable] = {
    "solve": cmd_solve,
    "check": cmd_check,
    "entails": cmd_entails,
    "aliens": cmd_aliens,
    "generalize": cmd_generalize,
    "model": cmd_model,
    "counterexample": cmd_counterexample,
    "fuzz": cmd_fuzz,
}


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--program", help="program file")
    common.add_argument("--query", help="query text, e.g. 'app(X,Y,[a])'")
    common.add_argument("--alphabet", help="function symbols 'f/1, a/0' (replaces the file's); '+g/1' adds")
    common.add_argument("--depth", type=_positive, default=2, help="term depth cap for model computations")
    common.add_argument("--max-depth", type=_positive, default=40, help="SLD derivation length budget")
    common.add_argument("--max-nodes", type=_positive, default=200_000, help="SLD node budget")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = _Parser(prog="herbrand-lab", description="Least Herbrand models versus program answers.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("solve", parents=[common], help="list computed answers")
    p.add_argument("--keep-duplicates", action="store_true", help="report variant answers separately")
    sub.add_parser("check", parents=[common], help="compare M_P |= Q with P |= Q")
    sub.add_parser("entails", parents=[common], help="decide P |= Q")
    for name in ("aliens", "generalize"):
        p = sub.add_parser(name, parents=[common], help={"aliens": "maximal aliens of a query", "generalize": "replace maximal aliens by variables"}[name])
        p.add_argument("--occurring", help="reference symbols instead of a program")
    p = sub.add_parser("model", parents=[common], help="bounded least Herbrand model")
    p.add_argument("--max-stages", type=_positive, default=100)
    p = sub.add_parser("counterexample", parents=[common], help="program refuting the equivalence")
    p.add_argument("--occurring", help="symbols F0 the program must use")
    p.add_argument("--verify", action="store_true", help="also check the construction")
    p = sub.add_parser("fuzz", parents=[common], help="randomized consistency campaigns")
    p.add_argument("--seed", type=int, default=None, help=f"defaults to ${SEED_ENV}, then 1")
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--property", action="append", help=f"one of {', '.join(PROPERTIES)}; repeatable")
    return parser


def main(argv: Optional[list[str]] = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    fmt = "text"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        out = _Out(fmt, stdout)
        kind = COMMANDS[args.command](args, out)
    except UsageError as exc:
        return _fail(stderr, "usage", f"usage error: {exc}")
    except (SyntaxError_, SignatureError, PremiseError) as exc:
        return _fail(stderr, "usage", f"error: {exc}")
    except (InternalInconsistency, RouteDisagreement) as exc:
        bundle = getattr(exc, "bundle", {})
        print(f"internal inconsistency: {exc}", file=stderr)
        if fmt == "json":
            print(dumps_record({"record": "error", "kind": "inconsistent", "bundle": bundle}), file=stdout)
        return exit_code_for("inconsistent")
    return exit_code_for(kind)


def _fail(stderr: TextIO, kind: str, message: str) -> int:
    print(message, file=stderr)
    return exit_code_for(kind)


if __name__ == "__main__":
    sys.exit(main())
