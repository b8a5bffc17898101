"""SLD resolution and two independent decision routes for ``P |= Q``.

Search is iterative deepening on derivation length with leftmost selection.
A negative verdict is only ever reported after a full pass in which no
derivation was cut off, i.e. when the SLD tree is finite and was explored
completely.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .syntax import Clause, Program, Query, occurring_symbols, fresh_constants, render_query
from .terms import (
    Struct,
    Substitution,
    Var,
    VarSupply,
    match,
    resolve,
    unify_bindings,
    variables,
    variant_of,
)

__all__ = [
    "Budget",
    "Status",
    "Verdict",
    "AnswerSet",
    "SLDSearch",
    "RouteDisagreement",
    "sld_answers",
    "entails_direct",
    "entails_via_grounding",
    "entails",
    "canonical_answer",
]


@dataclass(frozen=True)
class Budget:
    """Resource bounds: derivation length and total SLD-tree nodes."""

    max_depth: int = 40
    max_nodes: int = 200_000

    def __post_init__(self) -> None:
        if self.max_depth <= 0 or self.max_nodes <= 0:
            raise ValueError("budget bounds must be positive")


class Status(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    """Three-valued result.  ``HOLDS`` and ``FAILS`` are never produced by a
    budget cut; ``UNKNOWN`` may carry the depth up to which every checked
    instance held (``holds_up_to``)."""

    status: Status
    evidence: Optional[str] = None
    holds_up_to: Optional[int] = None
    stats: dict = field(default_factory=dict, compare=False)

    @classmethod
    def holds(cls, evidence: Optional[str] = None, **stats) -> "Verdict":
        return cls(Status.HOLDS, evidence, None, stats)

    @classmethod
    def fails(cls, evidence: Optional[str] = None, **stats) -> "Verdict":
        return cls(Status.FAILS, evidence, None, stats)

    @classmethod
    def unknown(cls, evidence: Optional[str] = None, holds_up_to: Optional[int] = None, **stats) -> "Verdict":
        return cls(Status.UNKNOWN, evidence, holds_up_to, stats)

    @property
    def definite(self) -> bool:
        return self.status is not Status.UNKNOWN

    @property
    def label(self) -> str:
        if self.status is Status.UNKNOWN and self.holds_up_to is not None:
            return f"holds-up-to({self.holds_up_to})"
        return self.status.value

    def __bool__(self) -> bool:
        raise TypeError("Verdict is three-valued; compare .status instead")

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "evidence": self.evidence,
            "holds_up_to": self.holds_up_to,
        }


class RouteDisagreement(AssertionError):
    """The two entailment routes returned contradictory definite verdicts."""

    def __init__(self, program: Program, query: Query, direct: Verdict, grounding: Verdict):
        self.bundle = {
            "program": str(program),
            "query": render_query(query),
            "direct": direct.to_dict(),
            "grounding": grounding.to_dict(),
        }
        super().__init__(f"entailment routes disagree: {self.bundle}")


class _BudgetExceeded(Exception):
    pass


class SLDSearch:
    """Iterative-deepening SLD search for one query.

    Iterating :meth:`answers` yields one computed answer per successful
    derivation (restricted to the query variables, not yet deduplicated).
    After the iterator finishes, ``exhausted`` tells whether the whole tree
    was explored and ``budget_hit`` whether a bound stopped the search.
    """

    def __init__(self, program: Program, query: Query, budget: Budget = Budget()):
        self.query = query
        self.budget = budget
        self.nodes = 0
        self.exhausted = False
        self.budget_hit = False
        self.depth_reached = 0
        self._index: dict[tuple[str, int], list[tuple[Clause, list[Var]]]] = defaultdict(list)
        for c in program.clauses:
            self._index[c.head.indicator].append((c, c.variables()))
        self._stamp = 0
        self._cutoff = False

    def _rename(self, clause: Clause, cvars: list[Var]) -> tuple[Struct, tuple[Struct, ...]]:
        self._stamp += 1
        theta = Substitution({v: Var(f"{v.name}#{self._stamp}") for v in cvars})
        return theta(clause.head), tuple(theta(b) for b in clause.body)

    def _solve(self, goals: tuple, depth: int, limit: int, b: dict, trail: list) -> Iterator[None]:
        if not goals:
            if depth == limit:
                yield None
            return
        if depth == limit:
            self._cutoff = True
            return
        first, rest = goals[0], goals[1:]
        for clause, cvars in self._index.get(first.indicator, ()):
            self.nodes += 1
            if self.nodes > self.budget.max_nodes:
                raise _BudgetExceeded
            head, body = self._rename(clause, cvars)
            mark = len(trail)
            if unify_bindings(first, head, b, trail):
                yield from self._solve(body + rest, depth + 1, limit, b, trail)
            while len(trail) > mark:
                del b[trail.pop()]

    def answers(self) -> Iterator[Substitution]:
        qvars = self.query.variables()
        goals = self.query.atoms
        try:
            for limit in range(1, self.budget.max_depth + 1):
                self._cutoff = False
                self.depth_reached = limit
                b: dict = {}
                trail: list = []
                for _ in self._solve(goals, 0, limit, b, trail):
                    yield Substitution({v: resolve(v, b) for v in qvars})
                if not self._cutoff:
                    self.exhausted = True
                    return
            self.budget_hit = True
        except _BudgetExceeded:
            self.budget_hit = True


def canonical_answer(query: Query, sigma: Substitution) -> Substitution:
    """Rename the fresh variables of a computed answer deterministically.

    A variable that is the image of a query variable gets that variable's
    name when possible, so an answer that is a pure renaming becomes the
    identity.  Other variables become ``_1, _2, ...``.
    """
    qvars = query.variables()
    renaming: dict[Var, Var] = {}
    used: set[Var] = set()
    for v in qvars:
        t = sigma.get(v, v)
        if isinstance(t, Var) and t not in renaming and v not in used:
            renaming[t] = v
            used.add(v)
    supply = VarSupply("_", avoid=[v.name for v in qvars])
    image = [sigma.get(v, v) for v in qvars]
    for w in variables(image):
        if w not in renaming:
            renaming[w] = next(supply)
    rn = Substitution(renaming)
    return Substitution({v: rn(sigma.get(v, v)) for v in qvars})


def _variant_key(atoms: tuple) -> tuple:
    theta = Substitution({v: Var(f"_{i}") for i, v in enumerate(variables(atoms))})
    return tuple(theta(a) for a in atoms)


@dataclass
class AnswerSet:
    answers: list[Substitution]
    exhausted: bool
    nodes: int = 0
    depth_reached: int = 0

    def __iter__(self) -> Iterator[Substitution]:
        return iter(self.answers)

    def __len__(self) -> int:
        return len(self.answers)


def sld_answers(
    program: Program,
    query: Query,
    budget: Budget = Budget(),
    keep_duplicates: bool = False,
) -> AnswerSet:
    """Computed answers for ``query``.

    With ``keep_duplicates`` every computed answer is reported once up to
    renaming (the operational view, where ``{p(X). p(a).}`` gives two answers
    for ``p(Y)``).  By default answers that are instances of another
    reported answer are dropped as well, leaving the most general ones.
    """
    search = SLDSearch(program, query, budget)
    seen: set = set()
    found: list[tuple[tuple, Substitution]] = []
    for sigma in search.answers():
        inst = tuple(sigma(a) for a in query.atoms)
        key = _variant_key(inst)
        if key in seen:
            continue
        seen.add(key)
        found.append((inst, canonical_answer(query, sigma)))
    if not keep_duplicates:
        kept = []
        for i, (inst, sigma) in enumerate(found):
            subsumed = False
            for j, (other, _) in enumerate(found):
                if i != j and match(other, inst) is not None:
                    # variants were removed above, so a match means strictly more general
                    subsumed = True
                    break
            if not subsumed:
                kept.append((inst, sigma))
        found = kept
    return AnswerSet([s for _, s in found], search.exhausted, search.nodes, search.depth_reached)


def entails_direct(program: Program, query: Query, budget: Budget = Budget()) -> Verdict:
    """``P |= Q`` iff some computed answer for ``Q`` is a renaming of it."""
    search = SLDSearch(program, query, budget)
    for sigma in search.answers():
        inst = tuple(sigma(a) for a in query.atoms)
        if variant_of(inst, query.atoms):
            answer = canonical_answer(query, sigma)
            return Verdict.holds(
                f"computed answer {answer} is a renaming", nodes=search.nodes, depth=search.depth_reached
            )
    stats = {"nodes": search.nodes, "depth": search.depth_reached}
    if search.exhausted:
        return Verdict.fails("SLD tree exhausted without a most general answer", **stats)
    return Verdict.unknown("budget exhausted", **stats)


def ground_with_fresh_constants(program: Program, query: Query) -> tuple[Query, Substitution]:
    """Map the variables of ``query`` to distinct constants occurring in neither
    ``program`` nor ``query``."""
    qvars = query.variables()
    avoid = occurring_symbols(program) | occurring_symbols(query)
    consts = fresh_constants(len(qvars), avoid)
    rho = Substitution({v: Struct(name) for v, (name, _) in zip(qvars, consts)})
    return query.substitute(rho), rho


def entails_via_grounding(program: Program, query: Query, budget: Budget = Budget()) -> Verdict:
    """Decide ``P |= Q`` through the ground query obtained with fresh constants."""
    ground, rho = ground_with_fresh_constants(program, query)
    search = SLDSearch(program, ground, budget)
    for _ in search.answers():
        return Verdict.holds(f"ground instance {render_query(ground)} succeeds", nodes=search.nodes)
    stats = {"nodes": search.nodes, "depth": search.depth_reached}
    if search.exhausted:
        return Verdict.fails(f"ground instance {render_query(ground)} finitely fails", **stats)
    return Verdict.unknown("budget exhausted", **stats)


def entails(program: Program, query: Query, budget: Budget = Budget()) -> Verdict:
    """Run both routes; contradictory definite verdicts raise :class:`RouteDisagreement`."""
    direct = entails_direct(program, query, budget)
    grounding = entails_via_grounding(program, query, budget)
    if direct.definite and grounding.definite:
        if direct.status is not grounding.status:
            raise RouteDisagreement(program, query, direct, grounding)
        return direct
    if direct.definite:
        return direct
    if grounding.definite:
        return grounding
    return Verdict.unknown(
        "both routes exhausted their budget",
        nodes=direct.stats.get("nodes", 0) + grounding.stats.get("nodes", 0),
    )
