"""Independent reference implementations used as test oracles."""

import itertools

from herbrand_lab.syntax import Program, Query
from herbrand_lab.terms import Struct, Var, variables


def sub(t, m):
    if isinstance(t, Var):
        return m.get(t, t)
    return Struct(t.functor, tuple(sub(x, m) for x in t.args))


def robinson(t1, t2, sol=None):
    """Textbook unification on an equation list; returns a dict or None."""
    eqs = [(t1, t2)]
    sol = dict(sol or {})
    while eqs:
        s, t = eqs.pop()
        s, t = sub(s, sol), sub(t, sol)
        if s == t:
            continue
        if isinstance(t, Var) and not isinstance(s, Var):
            s, t = t, s
        if isinstance(s, Var):
            if s in variables(t):
                return None
            sol = {v: sub(u, {s: t}) for v, u in sol.items()}
            sol[s] = t
            continue
        if s.functor != t.functor or len(s.args) != len(t.args):
            return None
        eqs.extend(zip(s.args, t.args))
    return sol


def naive_answers(program: Program, query: Query):
    """All computed answer instances of ``query`` by plain depth-first SLD.

    Only for programs whose SLD trees are finite (e.g. hierarchical ones).
    Returns the list of query instances, one per successful derivation.
    """
    counter = itertools.count()
    out = []

    def solve(goals, sol):
        if not goals:
            out.append(tuple(sub(a, sol) for a in query.atoms))
            return
        first, rest = sub(goals[0], sol), goals[1:]
        for c in program.clauses:
            n = next(counter)
            ren = {v: Var(f"{v.name}~{n}") for v in c.variables()}
            head = sub(c.head, ren)
            s2 = robinson(first, head, sol)
            if s2 is not None:
                solve(tuple(sub(b, ren) for b in c.body) + rest, s2)

    solve(query.atoms, {})
    return out
