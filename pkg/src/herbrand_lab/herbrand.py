"""Bounded least Herbrand models and truth of queries in them.

Atoms are kept only up to a term-depth cap, so every approximation is a
subset of the least Herbrand model.  A fixpoint is declared only when an
iteration step adds nothing and no head instance was ever dropped for
exceeding the cap.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .sld import Budget, Status, Verdict, entails_direct
from .syntax import Clause, Program, Query, Signature, render_query
from .terms import (
    Struct,
    Substitution,
    Term,
    Var,
    ground_terms_upto_depth,
    match,
    term_depth,
    term_key,
    variables,
)

__all__ = [
    "ModelApprox",
    "atom_depth",
    "tp_step",
    "least_model_upto",
    "model_satisfies",
]


def atom_depth(atom: Struct) -> int:
    """Maximum term nesting among the arguments of an atom."""
    return max((term_depth(a) for a in atom.args), default=0)


@dataclass(frozen=True)
class ModelApprox:
    atoms: frozenset
    stage: int
    term_depth_cap: int
    fixpoint_reached: bool
    stages: tuple = field(default=(), compare=False, repr=False)

    def __contains__(self, atom: Struct) -> bool:
        return atom in self.atoms

    def __len__(self) -> int:
        return len(self.atoms)

    def sorted_atoms(self) -> list[Struct]:
        return sorted(self.atoms, key=term_key)


class _Grounder:
    """Shared state for one clause set over one signature and depth cap."""

    def __init__(self, program: Program, sig: Signature, cap: int):
        self.program = program
        self.sig = sig
        self.cap = cap
        self.infinite = not sig.finite_universe()
        self._terms: dict[int, list[Term]] = {}
        self.head_vars = [variables(c.head) for c in program.clauses]
        self.done: set = set()

    def terms_upto(self, d: int) -> list[Term]:
        if not self.infinite:
            d = 0
        if d not in self._terms:
            self._terms[d] = ground_terms_upto_depth(self.sig.symbols, d)
        return self._terms[d]

    @staticmethod
    def _var_nesting(t: Term, level: int, out: dict) -> None:
        if isinstance(t, Var):
            out[t] = max(out.get(t, -1), level)
        else:
            for a in t.args:
                _Grounder._var_nesting(a, level + 1, out)

    def head_slack(self, head: Struct) -> dict[Var, int]:
        """For each variable of ``head``: the largest depth a ground binding may
        have while keeping the head within the cap."""
        nest: dict[Var, int] = {}
        for a in head.args:
            self._var_nesting(a, 0, nest)
        return {v: self.cap - n for v, n in nest.items()}

    def body_matches(self, body: tuple, index: dict, delta_index: Optional[dict], theta: dict):
        """Yield bindings that map every body atom into the indexed atom sets.

        With ``delta_index``, at least one body atom must come from it.
        """
        if delta_index is None:
            yield from self._join(body, 0, [index] * len(body), theta)
            return
        for j in range(len(body)):
            sources = [index] * len(body)
            sources[j] = delta_index
            yield from self._join(body, 0, sources, theta)

    def _join(self, body: tuple, i: int, sources: list, theta: dict):
        if i == len(body):
            yield theta
            return
        pat = Substitution(theta)(body[i])
        for atom in sources[i].get(pat.indicator, ()):
            m = match(pat, atom)
            if m is None:
                continue
            ext = dict(theta)
            ext.update(m)
            yield from self._join(body, i + 1, sources, ext)

    def heads(self, clause: Clause, theta: dict) -> tuple[list[Struct], bool]:
        """Ground head instances within the cap, and whether any were dropped."""
        head = Substitution(theta)(clause.head)
        slack = self.head_slack(head)
        if not slack:
            if atom_depth(head) > self.cap:
                return [], True
            return [head], False
        dropped = self.infinite
        if any(s < 0 for s in slack.values()):
            return [], True
        vs = list(slack)
        pools = [self.terms_upto(slack[v]) for v in vs]
        out = []
        for combo in itertools.product(*pools):
            h = Substitution(dict(zip(vs, combo)))(head)
            if atom_depth(h) <= self.cap:
                out.append(h)
            else:
                dropped = True
        return out, dropped


def _index(atoms: Iterable[Struct]) -> dict:
    idx: dict = defaultdict(list)
    for a in atoms:
        idx[a.indicator].append(a)
    return idx


def _step(g: _Grounder, current: frozenset, delta: Optional[frozenset]) -> tuple[set, bool]:
    idx = _index(current)
    didx = None if delta is None else _index(delta)
    new: set = set()
    dropped = False
    for ci, clause in enumerate(g.program.clauses):
        if didx is not None and not clause.body:
            continue
        hvars = g.head_vars[ci]
        for theta in g.body_matches(clause.body, idx, didx, {}):
            # bindings of body-only variables do not change the head instances
            key = (ci, tuple(theta.get(v) for v in hvars))
            if key in g.done:
                continue
            g.done.add(key)
            hs, d = g.heads(clause, theta)
            dropped = dropped or d
            new.update(hs)
    return new, dropped


def tp_step(program: Program, interp: Iterable[Struct], sig: Signature, depth_cap: int) -> frozenset:
    """``I`` together with the immediate consequences of ``I`` within the depth cap."""
    current = frozenset(interp)
    g = _Grounder(program, sig, depth_cap)
    new, _ = _step(g, current, None)
    return current | new


def least_model_upto(
    program: Program,
    sig: Signature,
    depth_cap: int,
    max_stages: int = 100,
) -> ModelApprox:
    """Iterate the immediate-consequence operator from the empty set.

    Evaluation is semi-naive: after the first stage only clause instances
    using at least one atom derived in the previous stage are grounded.
    """
    g = _Grounder(program, sig, depth_cap)
    current: frozenset = frozenset()
    stages = [current]
    ever_dropped = False
    delta: Optional[frozenset] = None
    for n in range(1, max_stages + 1):
        new, dropped = _step(g, current, delta)
        ever_dropped = ever_dropped or dropped
        added = frozenset(new - current)
        if not added:
            return ModelApprox(current, n - 1, depth_cap, not ever_dropped, tuple(stages))
        current = current | added
        stages.append(current)
        delta = added
    return ModelApprox(current, max_stages, depth_cap, False, tuple(stages))


def model_satisfies(
    program: Program,
    sig: Signature,
    query: Query,
    budget: Budget = Budget(),
    depth_cap: int = 2,
    model: Optional[ModelApprox] = None,
    max_instances: int = 200_000,
) -> Verdict:
    """Decide whether every ground instance of ``query`` over ``sig`` is true in
    the least Herbrand model.

    Instances are enumerated with bindings of depth at most ``depth_cap``
    and checked atom by atom, first against ``model`` (if given) and then by
    ground SLD.  With a finite Herbrand universe the enumeration is complete
    and a positive result is definite; otherwise it degrades to
    ``holds_up_to=depth_cap``.
    """
    qvars = query.variables()
    pool = ground_terms_upto_depth(sig.symbols, 0 if sig.finite_universe() else depth_cap)
    cache: dict[Struct, Status] = {}
    unknown = 0
    checked = 0

    def atom_status(atom: Struct) -> Status:
        hit = cache.get(atom)
        if hit is None:
            if model is not None and atom in model.atoms:
                hit = Status.HOLDS
            else:
                hit = entails_direct(program, Query((atom,)), budget).status
            cache[atom] = hit
        return hit

    for combo in itertools.product(pool, repeat=len(qvars)):
        checked += 1
        if checked > max_instances:
            return Verdict.unknown("instance budget exhausted", instances=checked - 1)
        theta = Substitution(dict(zip(qvars, combo)))
        inst = query.substitute(theta)
        statuses = [atom_status(a) for a in inst.atoms]
        if Status.FAILS in statuses:
            return Verdict.fails(render_query(inst), instances=checked)
        if Status.UNKNOWN in statuses:
            unknown += 1
    if unknown:
        return Verdict.unknown(f"{unknown} instances undecided within budget", instances=checked)
    if sig.finite_universe() or not qvars:
        return Verdict.holds(f"all {checked} ground instances are provable", instances=checked)
    return Verdict.unknown(
        f"all {checked} instances with bindings of depth <= {depth_cap} hold",
        holds_up_to=depth_cap,
        instances=checked,
    )
