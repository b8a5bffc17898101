"""When does the least Herbrand model characterize program answers?

Checkers for the sufficient condition (a non-constant function symbol not in
``P``, or enough spare constants for every atom of ``Q``), the comparison of
``M_P |= Q`` against ``P |= Q``, the generalized-query variants of that
comparison, and the construction of programs showing the condition cannot
be weakened.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .aliens import PremiseError, generalize, is_alien, reference_symbols
from .herbrand import model_satisfies
from .sld import Budget, Status, Verdict, entails, entails_direct
from .syntax import (
    Clause,
    Program,
    Query,
    Signature,
    extend_signature,
    format_symbols,
    fresh_constants,
    occurring_symbols,
    render_query,
)
from .terms import (
    Struct,
    Substitution,
    Term,
    Var,
    ground_terms_upto_depth,
    match,
    render_name,
    variables,
)

__all__ = [
    "AtomCondition",
    "ConditionReport",
    "EquivalenceReport",
    "GeneralizedCheck",
    "InternalInconsistency",
    "PremiseError",
    "CounterexampleTemplate",
    "Prop1Check",
    "check_conditions",
    "equivalence_verdict",
    "check_lemma4",
    "check_corollary2",
    "counterexample_template",
    "build_counterexample",
    "verify_counterexample",
]

Symbol = tuple[str, int]


class InternalInconsistency(AssertionError):
    """Definite verdicts that contradict a proven property; always a bug here."""

    def __init__(self, message: str, bundle: dict):
        self.bundle = bundle
        super().__init__(f"{message}: {bundle}")


# ---------------------------------------------------------------------------
# Conditions


@dataclass(frozen=True)
class AtomCondition:
    atom: Struct
    k: int
    available: int
    satisfied: bool


@dataclass(frozen=True)
class ConditionReport:
    cond_a: bool
    cond_a_witness: Optional[Symbol]
    cond_b: tuple[AtomCondition, ...]
    simple_variant: bool

    @property
    def holds(self) -> bool:
        return self.cond_a or all(c.satisfied for c in self.cond_b)

    def describe(self) -> str:
        if self.cond_a:
            name, arity = self.cond_a_witness
            return f"hold (a: {render_name(name)}/{arity})"
        if self.holds:
            return "hold (b)"
        return "violated"

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "cond_a": self.cond_a,
            "cond_a_witness": None if self.cond_a_witness is None else format_symbols([self.cond_a_witness]),
            "cond_b": [
                {"atom": str(c.atom), "k": c.k, "available": c.available, "satisfied": c.satisfied}
                for c in self.cond_b
            ],
            "simple_variant": self.simple_variant,
        }


def _spare_constants(sig: Signature, used: frozenset) -> list[str]:
    return [c for c in sig.constants() if (c, 0) not in used]


def check_conditions(program: Program, query: Query, sig: Signature) -> ConditionReport:
    occ_p = occurring_symbols(program)
    missing = [s for s in sig.non_constants() if s not in occ_p]
    per_atom = []
    for atom in query.atoms:
        k = len(variables(atom))
        avail = len(_spare_constants(sig, occ_p | occurring_symbols(atom)))
        per_atom.append(AtomCondition(atom, k, avail, avail >= k))
    spare_pq = len(_spare_constants(sig, occ_p | occurring_symbols(query)))
    simple = all(c.k <= spare_pq for c in per_atom)
    return ConditionReport(bool(missing), missing[0] if missing else None, tuple(per_atom), simple)


# ---------------------------------------------------------------------------
# Verdict comparison


@dataclass(frozen=True)
class EquivalenceReport:
    model_verdict: Verdict
    entails_verdict: Verdict
    conditions: ConditionReport
    consistent_with_theorem: bool
    raw_model_verdict: Verdict = field(compare=False, default=None)

    @property
    def compared(self) -> bool:
        return self.model_verdict.definite and self.entails_verdict.definite

    @property
    def kind(self) -> str:
        if not self.consistent_with_theorem:
            return "inconsistent"
        return "definite" if self.compared else "unknown"

    def to_dict(self) -> dict:
        return {
            "model": self.model_verdict.to_dict(),
            "entails": self.entails_verdict.to_dict(),
            "conditions": self.conditions.to_dict(),
            "consistent_with_theorem": self.consistent_with_theorem,
            "kind": self.kind,
        }


def _reconcile(model: Verdict, ent: Verdict) -> tuple[Verdict, Verdict]:
    """Apply the always-valid direction ``P |= Q  implies  M_P |= Q``."""
    if ent.status is Status.HOLDS and model.status is Status.UNKNOWN:
        model = Verdict.holds("implied by P |= Q (M_P is a model of P)")
    elif model.status is Status.FAILS and ent.status is Status.UNKNOWN:
        ent = Verdict.fails(f"M_P refutes the instance {model.evidence}")
    return model, ent


def equivalence_verdict(
    program: Program,
    query: Query,
    sig: Signature,
    budget: Budget = Budget(),
    depth_cap: int = 2,
) -> EquivalenceReport:
    """Compare ``M_P |= Q`` with ``P |= Q`` and evaluate the sufficient condition.

    Raises :class:`InternalInconsistency` if definite verdicts contradict
    soundness or the characterization theorem.
    """
    raw_model = model_satisfies(program, sig, query, budget, depth_cap)
    ent = entails(program, query, budget)
    bundle = {
        "program": str(program),
        "query": render_query(query),
        "alphabet": format_symbols(sig.symbols),
        "model": raw_model.to_dict(),
        "entails": ent.to_dict(),
    }
    if raw_model.status is Status.FAILS and ent.status is Status.HOLDS:
        raise InternalInconsistency("P |= Q but M_P refutes an instance", bundle)
    model, ent = _reconcile(raw_model, ent)
    cond = check_conditions(program, query, sig)
    consistent = True
    if cond.holds and model.definite and ent.definite and model.status is not ent.status:
        consistent = False
        bundle["conditions"] = cond.to_dict()
        raise InternalInconsistency("verdicts differ although the sufficient condition holds", bundle)
    return EquivalenceReport(model, ent, cond, consistent, raw_model)


# ---------------------------------------------------------------------------
# Generalized-query checks


@dataclass(frozen=True)
class GeneralizedCheck:
    """``M_P |= Q`` against ``P |= Q'`` for a generalization ``Q'`` of ``Q``."""

    query: Query
    generalized: Query
    phi: Substitution
    model_verdict: Verdict
    entails_verdict: Verdict

    @property
    def compared(self) -> bool:
        return self.model_verdict.definite and self.entails_verdict.definite

    @property
    def consistent(self) -> bool:
        return not self.compared or self.model_verdict.status is self.entails_verdict.status


def _as_query(q) -> Query:
    return q if isinstance(q, Query) else Query((q,))


def _lemma_condition(program: Program, query: Query, sig: Signature, per_atom: bool) -> bool:
    cond = check_conditions(program, query, sig)
    if cond.cond_a:
        return True
    if per_atom:
        return all(c.satisfied for c in cond.cond_b)
    n = len(query.variables())
    return len(_spare_constants(sig, occurring_symbols(program) | occurring_symbols(query))) >= n


def _compare_generalized(program, sig, query, generalized, phi, budget, depth_cap) -> GeneralizedCheck:
    model = model_satisfies(program, sig, query, budget, depth_cap)
    ent = entails(program, generalized, budget)
    if ent.status is Status.HOLDS and model.status is Status.UNKNOWN:
        # Q is an instance of Q', so P |= Q' gives P |= Q and hence M_P |= Q
        model = Verdict.holds("implied by P |= Q'")
    return GeneralizedCheck(query, generalized, phi, model, ent)


def check_lemma4(
    program: Program,
    query,
    sig: Signature,
    budget: Budget = Budget(),
    depth_cap: int = 2,
    generalized=None,
    phi: Optional[Substitution] = None,
) -> GeneralizedCheck:
    """For an atomic ``Q``: compare ``M_P |= Q`` with ``P |= Q'``.

    By default ``Q'`` is ``Q`` generalized for ``P``.  Passing ``generalized``
    and ``phi`` checks the weaker premise instead: ``Q = Q' phi`` where
    ``phi`` binds variables not in ``Q`` to distinct aliens w.r.t. ``P`` and
    ``Q'``.
    """
    q = _as_query(query)
    if len(q) != 1:
        raise PremiseError("check_lemma4 takes an atomic query")
    if not _lemma_condition(program, q, sig, per_atom=False):
        raise PremiseError("neither a spare non-constant symbol nor enough spare constants")
    if generalized is None:
        res = generalize(q, program)
        return _compare_generalized(program, sig, q, res.generalized, res.rho, budget, depth_cap)
    if phi is None:
        raise PremiseError("phi is required together with the generalized atom")
    qg = _as_query(generalized)
    phi = Substitution(phi)
    if qg.substitute(phi) != q:
        raise PremiseError("Q is not Q' phi")
    qvars = set(q.variables())
    ref = reference_symbols(program) | occurring_symbols(qg)
    values = list(phi.values())
    if any(x in qvars for x in phi):
        raise PremiseError("phi binds a variable of Q")
    if len(set(values)) != len(values) or not all(is_alien(u, ref) for u in values):
        raise PremiseError("phi must bind distinct aliens w.r.t. P and Q'")
    return _compare_generalized(program, sig, q, qg, phi, budget, depth_cap)


def check_corollary2(
    program: Program,
    query: Query,
    sig: Signature,
    budget: Budget = Budget(),
    depth_cap: int = 2,
) -> GeneralizedCheck:
    """Conjunctive version: per-atom spare constants suffice."""
    if not _lemma_condition(program, query, sig, per_atom=True):
        raise PremiseError("condition (a) and the per-atom constant condition both fail")
    res = generalize(query, program)
    return _compare_generalized(program, sig, query, res.generalized, res.rho, budget, depth_cap)


# ---------------------------------------------------------------------------
# Counterexample programs


@dataclass(frozen=True)
class CounterexampleTemplate:
    """The selected atom ``A`` abstracted into slots.

    ``template`` is ``A`` with each distinct out-of-``F0`` constant and each
    distinct variable replaced by a slot variable, left to right.
    """

    atom_index: int
    atom: Struct
    template: Struct
    slots: tuple[Var, ...]
    slot_values: tuple[Term, ...]
    spare: tuple[str, ...]

    @property
    def k(self) -> int:
        return sum(isinstance(t, Var) for t in self.slot_values)

    @property
    def n(self) -> int:
        return len(self.slots) - self.k

    def instantiate(self, values) -> Struct:
        return Substitution(dict(zip(self.slots, values)))(self.template)


def counterexample_template(F0, sig: Signature, query: Query) -> CounterexampleTemplate:
    F0 = frozenset(F0)
    preds = [a.indicator for a in query.atoms]
    if len(set(preds)) != len(preds):
        raise PremiseError("the atoms of the query must have distinct predicate symbols")
    if not F0 <= sig.symbols:
        raise PremiseError(f"F0 has symbols outside the alphabet: {format_symbols(F0 - sig.symbols)}")
    if not occurring_symbols(query) <= sig.symbols:
        raise PremiseError("the query uses symbols outside the alphabet")
    outside = [s for s in sig.non_constants() if s not in F0]
    if outside:
        raise PremiseError(f"condition (a) holds via {format_symbols(outside[:1])}")
    outside_consts = [c for c in sig.constants() if (c, 0) not in F0]
    for idx, atom in enumerate(query.atoms):
        k = len(variables(atom))
        occ = occurring_symbols(atom)
        spare = tuple(c for c in outside_consts if (c, 0) not in occ)
        if len(spare) < k:
            break
    else:
        raise PremiseError("every atom has enough spare constants")

    slot_of: dict[Term, Var] = {}
    order: list[Term] = []

    def abstract(t: Term) -> Term:
        if isinstance(t, Var) or (not t.args and t.indicator not in F0):
            if t not in slot_of:
                slot_of[t] = Var(f"S{len(slot_of) + 1}")
                order.append(t)
            return slot_of[t]
        return Struct(t.functor, tuple(abstract(a) for a in t.args))

    template = Struct(atom.functor, tuple(abstract(a) for a in atom.args))
    return CounterexampleTemplate(
        idx, atom, template, tuple(slot_of[t] for t in order), tuple(order), spare
    )


def build_counterexample(F0, sig: Signature, query: Query) -> Program:
    """A program over exactly ``F0`` with ``M_P |= Q`` but ``P`` not entailing ``Q``.

    Requires the sufficient condition to fail for ``(sig, F0, Q)``.  Unit
    clauses are the other atoms of ``Q`` (their out-of-``F0`` constants
    replaced by variables), then template instances where one variable fills
    two slots, then instances with ``f(Z1..Zm)`` in one slot for each
    ``f`` in ``F0``.  Arrangements are enumerated up to variable renaming.
    """
    F0 = frozenset(F0)
    tpl = counterexample_template(F0, sig, query)
    clauses: list[Clause] = []
    for idx, atom in enumerate(query.atoms):
        if idx != tpl.atom_index:
            clauses.append(Clause(generalize(atom, F0).generalized.atoms[0]))
    width = len(tpl.slots)
    xs = [Var(f"X{i}") for i in range(1, width)]
    for i, j in itertools.combinations(range(width), 2):
        it = iter(xs)
        vals: list[Term] = []
        for s in range(width):
            vals.append(vals[i] if s == j else next(it))
        clauses.append(Clause(tpl.instantiate(vals)))
    for name, arity in sorted(F0):
        ft = Struct(name, tuple(Var(f"Z{i}") for i in range(1, arity + 1)))
        for pos in range(width):
            it = iter(xs)
            vals = [ft if s == pos else next(it) for s in range(width)]
            clauses.append(Clause(tpl.instantiate(vals)))
    return Program(tuple(clauses), name="counterexample")


@dataclass(frozen=True)
class Prop1Check:
    occurring_ok: bool
    coverage_ok: bool
    covered: int
    refuted_ok: bool
    witness: Struct
    extended: Signature
    entails_verdict: Verdict
    model_verdict: Verdict
    extended_model_verdict: Verdict

    @property
    def ok(self) -> bool:
        return (
            self.occurring_ok
            and self.coverage_ok
            and self.refuted_ok
            and self.entails_verdict.status is Status.FAILS
            and self.model_verdict.status is not Status.FAILS
            and self.extended_model_verdict.status is Status.FAILS
        )


def verify_counterexample(
    F0,
    sig: Signature,
    query: Query,
    program: Optional[Program] = None,
    coverage_depth: int = 2,
    model_depth: int = 1,
    budget: Budget = Budget(max_depth=8, max_nodes=20_000),
) -> Prop1Check:
    """Check the three properties a generated counterexample must have.

    1. its function symbols are exactly ``F0``;
    2. every ground template instance (bindings up to ``coverage_depth``)
       over the original alphabet is an instance of some clause;
    3. after adding fresh constants, the template instance with distinct
       spare constants in the variable slots finitely fails.
    """
    F0 = frozenset(F0)
    tpl = counterexample_template(F0, sig, query)
    if program is None:
        program = build_counterexample(F0, sig, query)
    occurring_ok = occurring_symbols(program) == F0

    heads = [c.head for c in program.clauses if c.head.indicator == tpl.template.indicator]
    pool = ground_terms_upto_depth(sig.symbols, coverage_depth)
    covered = 0
    coverage_ok = True
    for combo in itertools.product(pool, repeat=len(tpl.slots)):
        inst = tpl.instantiate(combo)
        if not any(match(h, inst) is not None for h in heads):
            coverage_ok = False
            break
        covered += 1

    need = tpl.k - len(tpl.spare)
    fresh = fresh_constants(need, sig.symbols)
    extended = extend_signature(sig, fresh)
    spare_iter = iter(list(tpl.spare) + [n for n, _ in fresh])
    vals = [next(spare_iter) if isinstance(v, Var) else v for v in tpl.slot_values]
    witness = tpl.instantiate([Struct(v) if isinstance(v, str) else v for v in vals])
    refuted_ok = entails_direct(program, Query((witness,)), budget).status is Status.FAILS

    ent = entails(program, query, budget)
    model = model_satisfies(program, sig, query, budget, model_depth)
    ext_model = model_satisfies(program, extended, query, budget, model_depth)
    return Prop1Check(occurring_ok, coverage_ok, covered, refuted_ok, witness, extended, ent, model, ext_model)
