"""Randomized property campaigns over small programs, queries and alphabets.

Every campaign is reproducible from its seed; each case records the seed
that regenerates it.  A *violation* is a pair of definite verdicts (or a
construction result) contradicting the property under test.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .aliens import distinct_alien_instance, generalize, is_alien
from .herbrand import least_model_upto
from .lab import (
    InternalInconsistency,
    PremiseError,
    check_lemma4,
    counterexample_template,
    equivalence_verdict,
    verify_counterexample,
)
from .sld import Budget, RouteDisagreement, Status, entails, entails_direct
from .syntax import Clause, Program, Query, Signature, format_symbols, occurring_symbols
from .terms import (
    Struct,
    Substitution,
    Term,
    Var,
    ground_terms_upto_depth,
    is_ground,
    single_binding_unifiers,
    variables,
)

__all__ = [
    "FuzzConfig",
    "CampaignReport",
    "Generator",
    "PROPERTIES",
    "fuzz",
    "run_campaign",
]

Symbol = tuple[str, int]

_CONSTS = ["a", "b", "c", "d"]
_FUNCS = ["f", "g", "h"]
_ALIEN_CONSTS = ["k", "m"]
_ALIEN_FUNCS = ["s", "t"]
_PREDS = [("p", 1), ("q", 2), ("r", 1), ("u", 2)]
_VARS = ["X", "Y", "Z", "W"]


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 1
    cases: int = 200
    properties: tuple[str, ...] = ("corollary1",)
    max_clauses: int = 4
    max_body: int = 2
    max_symbols: int = 4
    max_arity: int = 2
    max_query_atoms: int = 2
    recursion_rate: float = 0.25
    budget: Budget = Budget(max_depth=10, max_nodes=4000)
    depth_cap: int = 1


@dataclass
class CampaignReport:
    prop: str
    seed: int
    cases: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    definite: int = 0
    unknown: int = 0
    skipped: int = 0

    @property
    def total(self) -> int:
        return len(self.cases)

    @property
    def definite_rate(self) -> float:
        return self.definite / self.total if self.cases else 0.0

    def summary(self) -> dict:
        return {
            "property": self.prop,
            "seed": self.seed,
            "cases": self.total,
            "definite": self.definite,
            "unknown": self.unknown,
            "skipped": self.skipped,
            "violations": len(self.violations),
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps(c, sort_keys=True, separators=(",", ":")) for c in self.cases]
        return "\n".join(lines) + ("\n" if lines else "")


class Generator:
    """Random small terms, programs, queries and alphabets."""

    def __init__(self, rng: random.Random, cfg: FuzzConfig = FuzzConfig()):
        self.rng = rng
        self.cfg = cfg

    def symbols(self, consts: list[str], funcs: list[str], n_const: int, n_func: int) -> list[Symbol]:
        cs = self.rng.sample(consts, n_const)
        fs = self.rng.sample(funcs, n_func)
        return [(c, 0) for c in cs] + [(f, self.rng.randint(1, self.cfg.max_arity)) for f in fs]

    def signature(self, min_consts: int = 1) -> list[Symbol]:
        total = self.rng.randint(max(1, min_consts), self.cfg.max_symbols)
        n_const = self.rng.randint(max(1, min_consts), total)
        return self.symbols(_CONSTS, _FUNCS, n_const, min(total - n_const, len(_FUNCS)))

    def term(self, syms: list[Symbol], vars_: list[Var], depth: int, var_rate: float = 0.45) -> Term:
        consts = [s for s in syms if s[1] == 0]
        funcs = [s for s in syms if s[1] > 0]
        r = self.rng.random()
        if vars_ and r < var_rate:
            return self.rng.choice(vars_)
        if depth > 0 and funcs and (r < 0.75 or not consts):
            name, arity = self.rng.choice(funcs)
            return Struct(name, tuple(self.term(syms, vars_, depth - 1, var_rate) for _ in range(arity)))
        if consts:
            return Struct(self.rng.choice(consts)[0])
        return self.rng.choice(vars_) if vars_ else Struct(syms[0][0], ())

    def atom(self, pred: Symbol, syms: list[Symbol], vars_: list[Var], depth: int = 2, var_rate: float = 0.45) -> Struct:
        return Struct(pred[0], tuple(self.term(syms, vars_, depth, var_rate) for _ in range(pred[1])))

    def program(self, syms: list[Symbol], preds: list[Symbol], hierarchical: bool = False) -> Program:
        clauses = []
        for _ in range(self.rng.randint(1, self.cfg.max_clauses)):
            hi = self.rng.randrange(len(preds))
            nvars = self.rng.randint(1, 3)
            vs = [Var(n) for n in _VARS[:nvars]]
            head = self.atom(preds[hi], syms, vs, depth=1)
            body = []
            recursive = not hierarchical and self.rng.random() < self.cfg.recursion_rate
            lower = preds[: hi + 1] if recursive else preds[:hi]
            if lower:
                for _ in range(self.rng.randint(0, self.cfg.max_body)):
                    body.append(self.atom(self.rng.choice(lower), syms, vs, depth=1))
            clauses.append(Clause(head, tuple(body)))
        # at least one fact so that models are rarely empty
        if all(c.body for c in clauses):
            p = preds[0]
            clauses.append(Clause(self.atom(p, syms, [Var("X")], depth=1)))
        return Program(tuple(clauses))

    def query(self, syms: list[Symbol], preds: list[Symbol], distinct_preds: bool = False, depth: int = 2) -> Query:
        n = self.rng.randint(1, self.cfg.max_query_atoms)
        vs = [Var(n_) for n_ in ("A", "B", "C")]
        chosen = self.rng.sample(preds, min(n, len(preds))) if distinct_preds else [self.rng.choice(preds) for _ in range(n)]
        return Query(tuple(self.atom(p, syms, vs, depth) for p in chosen))


def _record(program: Optional[Program], query: Optional[Query], sig=None, **extra) -> dict:
    rec = {}
    if program is not None:
        rec["program"] = str(program).strip()
    if query is not None:
        rec["query"] = str(query)
    if sig is not None:
        rec["alphabet"] = format_symbols(sig)
    rec.update(extra)
    return rec


def _preds(rng: random.Random) -> list[Symbol]:
    return _PREDS[: rng.randint(2, len(_PREDS))]


# ---------------------------------------------------------------------------
# Campaign cases.  Each returns (record, definite, violation).


def _case_lemma1(g: Generator, cfg: FuzzConfig):
    rng = g.rng
    psyms = g.signature()
    preds = _preds(rng)
    prog = g.program(psyms, preds)
    query = g.query(psyms, preds, depth=1)
    used = set(occurring_symbols(prog)) | set(occurring_symbols(query))
    aliens = g.symbols(_ALIEN_CONSTS, _ALIEN_FUNCS, rng.randint(0, 2), rng.randint(0, 2))
    aliens = [s for s in aliens if s not in used]
    qvars = query.variables()
    if not qvars or not aliens:
        return None
    alien_consts = [s for s in aliens if s[1] == 0]
    alien_funcs = [s for s in aliens if s[1] > 0]
    k = rng.randint(1, len(qvars))
    if not alien_funcs:
        k = min(k, len(alien_consts))
    targets = rng.sample(qvars, k)
    pool_vars = qvars + [Var("N")]
    ts: list[Term] = []
    while len(ts) < k:
        name, arity = rng.choice(aliens)
        t = Struct(name, tuple(g.term(psyms + aliens, pool_vars, 1) for _ in range(arity)))
        if t not in ts:
            ts.append(t)
    rho = Substitution(dict(zip(targets, ts)))
    inst = query.substitute(rho)
    v1 = entails(prog, query, cfg.budget)
    v2 = entails(prog, inst, cfg.budget)
    definite = v1.definite and v2.definite
    violation = definite and v1.status is not v2.status
    rec = _record(prog, query, rho=str(rho), instance=str(inst), entails=v1.label, entails_instance=v2.label)
    return rec, definite, violation


def _case_corollary1(g: Generator, cfg: FuzzConfig):
    psyms = g.signature()
    preds = _preds(g.rng)
    prog = g.program(psyms, preds)
    extra = g.symbols(_ALIEN_CONSTS, _ALIEN_FUNCS, g.rng.randint(0, 2), g.rng.randint(0, 1))
    query = g.query(psyms + extra, preds)
    gen = generalize(query, prog).generalized
    v1 = entails(prog, query, cfg.budget)
    v2 = entails(prog, gen, cfg.budget)
    definite = v1.definite and v2.definite
    violation = definite and v1.status is not v2.status
    rec = _record(prog, query, generalized=str(gen), entails=v1.label, entails_generalized=v2.label)
    return rec, definite, violation


def _case_theorem1(g: Generator, cfg: FuzzConfig):
    sig_syms = g.signature()
    psyms = [s for s in sig_syms if g.rng.random() < 0.7] or [s for s in sig_syms if s[1] == 0][:1]
    preds = _preds(g.rng)
    prog = g.program(psyms, preds)
    query = g.query(sig_syms, preds, depth=1)
    sig = Signature(frozenset(sig_syms) | occurring_symbols(prog) | occurring_symbols(query))
    try:
        rep = equivalence_verdict(prog, query, sig, cfg.budget, cfg.depth_cap)
    except InternalInconsistency as exc:
        return _record(prog, query, sig.symbols, error=str(exc)), True, True
    rec = _record(
        prog,
        query,
        sig.symbols,
        model=rep.model_verdict.label,
        entails=rep.entails_verdict.label,
        conditions=rep.conditions.holds,
    )
    return rec, rep.compared, False


def _case_lemma4(g: Generator, cfg: FuzzConfig):
    sig_syms = g.signature()
    psyms = [s for s in sig_syms if g.rng.random() < 0.6] or [s for s in sig_syms if s[1] == 0][:1]
    preds = _preds(g.rng)
    prog = g.program(psyms, preds)
    atom = g.atom(g.rng.choice(preds), sig_syms, [Var("A"), Var("B")], depth=1)
    sig = Signature(frozenset(sig_syms) | occurring_symbols(prog))
    try:
        chk = check_lemma4(prog, atom, sig, cfg.budget, cfg.depth_cap)
    except PremiseError:
        return None
    rec = _record(
        prog,
        chk.query,
        sig.symbols,
        generalized=str(chk.generalized),
        model=chk.model_verdict.label,
        entails_generalized=chk.entails_verdict.label,
    )
    return rec, chk.compared, not chk.consistent


def _prop1_input(g: Generator, max_instances: int = 50_000):
    rng = g.rng
    funcs = g.symbols([], _FUNCS, 0, rng.randint(0, 2))
    in_consts = [(c, 0) for c in rng.sample(_CONSTS[:3], rng.randint(0, 2))]
    out_consts = [(c, 0) for c in rng.sample(["b1", "b2", "e"], rng.randint(0, 2))]
    if not in_consts and not out_consts:
        in_consts = [("a", 0)]
    F0 = frozenset(funcs + in_consts)
    sig = Signature(F0 | set(out_consts))
    preds = _preds(rng)
    vs = [Var(n) for n in ("Y1", "Y2", "Y3")]
    n_atoms = rng.randint(1, 2)
    chosen = rng.sample(preds, n_atoms)
    atoms = [g.atom(p, sorted(sig.symbols), vs, depth=1, var_rate=0.6) for p in chosen]
    query = Query(tuple(atoms))
    try:
        tpl = counterexample_template(F0, sig, query)
    except PremiseError:
        return None
    pool = len(ground_terms_upto_depth(sig.symbols, 2))
    if pool ** len(tpl.slots) > max_instances:
        return None
    return F0, sig, query


def _case_prop1(g: Generator, cfg: FuzzConfig):
    made = _prop1_input(g)
    if made is None:
        return None
    F0, sig, query = made
    chk = verify_counterexample(F0, sig, query)
    rec = _record(
        None,
        query,
        sig.symbols,
        F0=format_symbols(F0),
        occurring_ok=chk.occurring_ok,
        coverage_ok=chk.coverage_ok,
        covered=chk.covered,
        refuted_ok=chk.refuted_ok,
        witness=str(chk.witness),
        model=chk.model_verdict.label,
        entails=chk.entails_verdict.label,
    )
    return rec, True, not chk.ok


_LEMMA2_MAX_UNIVERSE = 2500


def _count_upto_depth(sig: list[Symbol], depth: int) -> int:
    consts = sum(1 for _, a in sig if a == 0)
    n = consts
    for _ in range(depth):
        n = consts + sum(n**a for _, a in sig if a)
    return n


def lemma2_universe(sig: list[Symbol], s1: Term, s2: Term, depth: int = 3) -> list[Term]:
    """Ground terms up to ``depth`` plus terms ``f(...)`` whose arguments are
    variables (of the pair or one fresh one)."""
    universe = list(ground_terms_upto_depth(sig, depth))
    vs = variables([s1, s2]) + [Var("Fresh")]
    for name, arity in sorted(sig):
        if arity:
            universe.extend(Struct(name, args) for args in itertools.product(vs, repeat=arity))
    return universe


def _case_lemma2(g: Generator, cfg: FuzzConfig):
    rng = g.rng
    sig = g.symbols(_CONSTS[:2], _FUNCS[:2], rng.randint(1, 2), rng.randint(1, 2))
    vs = [Var("X"), Var("Y")]
    s1 = g.term(sig, vs, 2, var_rate=0.35)
    s2 = g.term(sig, vs, 2, var_rate=0.35)
    if s1 == s2:
        return None
    if _count_upto_depth(sig, 3) > _LEMMA2_MAX_UNIVERSE:
        return None
    universe = lemma2_universe(sig, s1, s2)
    found = single_binding_unifiers(s1, s2, universe)
    rec = _record(None, None, sig, s1=str(s1), s2=str(s2), unifiers=[str(u) for u in found])
    return rec, True, len(found) > 1


def _case_lemma3(g: Generator, cfg: FuzzConfig):
    rng = g.rng
    sig_syms = g.signature()
    F = frozenset(s for s in sig_syms if rng.random() < 0.5)
    outside = [s for s in sig_syms if s not in F]
    if not outside:
        return None
    sig = Signature(frozenset(sig_syms))
    vs = [Var(n) for n in ("Y1", "Y2", "Y3")]
    n_vars = rng.randint(0, 3)
    ts: list[Term] = vs[:n_vars]
    for _ in range(rng.randint(0, 3)):
        name, arity = rng.choice(outside)
        t = Struct(name, tuple(g.term(sig_syms, vs, 1) for _ in range(arity)))
        if t not in ts:
            ts.append(t)
    if not ts:
        return None
    rng.shuffle(ts)
    try:
        sigma = distinct_alien_instance(ts, F, sig)
    except PremiseError:
        return None
    out = [sigma(t) for t in ts]
    ok = all(is_ground(t) for t in out) and len(set(out)) == len(out) and all(is_alien(t, F) for t in out)
    rec = _record(None, None, sig.symbols, F=format_symbols(F), terms=[str(t) for t in ts], sigma=str(sigma))
    return rec, True, not ok


def _case_ground_eq(g: Generator, cfg: FuzzConfig):
    rng = g.rng
    consts_only = rng.random() < 0.6
    sig_syms = g.signature() if not consts_only else g.symbols(_CONSTS, [], rng.randint(1, 3), 0)
    preds = _preds(rng)
    prog = g.program(sig_syms, preds, hierarchical=True)
    sig = Signature(frozenset(sig_syms) | occurring_symbols(prog))
    model = least_model_upto(prog, sig, depth_cap=2, max_stages=20)
    if not model.fixpoint_reached:
        return None
    pool = ground_terms_upto_depth(sig.symbols, 1)
    pred = rng.choice(preds)
    atom = Struct(pred[0], tuple(rng.choice(pool) for _ in range(pred[1])))
    member = atom in model
    v = entails_direct(prog, Query((atom,)), cfg.budget)
    violation = v.definite and (v.status is Status.HOLDS) != member
    rec = _record(prog, Query((atom,)), sig.symbols, member=member, entails=v.label)
    return rec, v.definite, violation


PROPERTIES: dict[str, Callable] = {
    "lemma1": _case_lemma1,
    "corollary1": _case_corollary1,
    "theorem1": _case_theorem1,
    "lemma4": _case_lemma4,
    "prop1": _case_prop1,
    "lemma2": _case_lemma2,
    "lemma3": _case_lemma3,
    "ground_eq": _case_ground_eq,
}


def run_campaign(prop: str, seed: int, cases: int, cfg: Optional[FuzzConfig] = None, max_attempts: int = 50) -> CampaignReport:
    """Run ``cases`` cases of one property.  Case ``i`` is generated from
    ``Random(f"{seed}:{prop}:{i}:{attempt}")``; inputs outside the property's
    premise are redrawn up to ``max_attempts`` times."""
    cfg = cfg or FuzzConfig(seed=seed, cases=cases)
    case_fn = PROPERTIES[prop]
    report = CampaignReport(prop, seed)
    for i in range(cases):
        for attempt in range(max_attempts):
            case_seed = f"{seed}:{prop}:{i}:{attempt}"
            g = Generator(random.Random(case_seed), cfg)
            try:
                out = case_fn(g, cfg)
            except RouteDisagreement as exc:
                rec = dict(exc.bundle, case_seed=case_seed, route_disagreement=True)
                report.cases.append(rec)
                report.violations.append(rec)
                report.definite += 1
                break
            if out is None:
                report.skipped += 1
                continue
            rec, definite, violation = out
            rec["case_seed"] = case_seed
            rec["definite"] = definite
            rec["violation"] = violation
            report.cases.append(rec)
            if definite:
                report.definite += 1
            else:
                report.unknown += 1
            if violation:
                report.violations.append(rec)
            break
    return report


def fuzz(cfg: FuzzConfig) -> list[CampaignReport]:
    """Run every configured property; reports come back in configuration order."""
    return [run_campaign(p, cfg.seed, cfg.cases, cfg) for p in cfg.properties]
