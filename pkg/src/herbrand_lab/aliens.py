"""Aliens, maximal aliens and query generalization.

An alien w.r.t. a set of function symbols ``F`` is a non-variable term whose
main symbol is not in ``F``.  Generalizing a query replaces each distinct
maximal alien by its own fresh variable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .syntax import Clause, Program, Query, Signature, occurring_symbols
from .terms import (
    Struct,
    Substitution,
    Term,
    Var,
    VarSupply,
    iter_ground_terms,
    symbols,
    term_key,
    variables,
    variant_of,
)

__all__ = [
    "Path",
    "GeneralizationResult",
    "reference_symbols",
    "is_alien",
    "maximal_aliens",
    "generalize",
    "is_generalization",
    "iter_ground_aliens",
    "enumerate_ground_aliens",
    "distinct_alien_instance",
]

Symbol = tuple[str, int]
Path = tuple[int, ...]


def reference_symbols(ref) -> frozenset[Symbol]:
    """The symbol set ``F`` for a program, query, atom, a collection of those,
    or an explicit collection of ``(name, arity)`` pairs."""
    if isinstance(ref, (Program, Query, Clause, Struct)):
        return occurring_symbols(ref)
    items = list(ref)
    if all(isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], str) and isinstance(x[1], int) for x in items):
        return frozenset(items)
    out: frozenset = frozenset()
    for x in items:
        out |= reference_symbols(x)
    return out


def is_alien(t: Term, F) -> bool:
    if isinstance(t, Var):
        return False
    return t.indicator not in _as_symbols(F)


def _as_symbols(F) -> frozenset[Symbol]:
    return F if isinstance(F, frozenset) else reference_symbols(F)


def _atoms(q: Union[Query, Struct, Iterable[Struct]]) -> tuple[Struct, ...]:
    if isinstance(q, Query):
        return q.atoms
    if isinstance(q, Struct):
        return (q,)
    return tuple(q)


def _scan(t: Term, path: Path, F: frozenset, out: dict) -> None:
    if isinstance(t, Var):
        return
    if t.indicator not in F:
        out.setdefault(t, []).append(path)
        return
    for i, a in enumerate(t.args):
        _scan(a, path + (i,), F, out)


def maximal_aliens(q, F) -> list[tuple[Term, list[Path]]]:
    """Distinct terms whose occurrences in ``q`` are maximal aliens w.r.t. ``F``.

    Each term comes with all its maximal occurrence paths.  A path is the
    atom index followed by argument indices (all 0-based).  Terms are listed
    by first occurrence, left to right.
    """
    F = _as_symbols(F)
    found: dict[Term, list[Path]] = {}
    for k, atom in enumerate(_atoms(q)):
        for i, a in enumerate(atom.args):
            _scan(a, (k, i), F, found)
    return [(t, paths) for t, paths in found.items()]


@dataclass(frozen=True)
class GeneralizationResult:
    generalized: Query
    rho: Substitution
    positions: tuple[Path, ...]


def _replace(t: Term, path: Path, repl: dict) -> Term:
    if path in repl:
        return repl[path]
    if isinstance(t, Var) or not t.args:
        return t
    return Struct(t.functor, tuple(_replace(a, path + (i,), repl) for i, a in enumerate(t.args)))


def generalize(q, ref) -> GeneralizationResult:
    """Replace maximal aliens w.r.t. ``ref`` by fresh variables ``V1, V2, ...``.

    Equal alien terms share one variable; variables are numbered by first
    occurrence.  ``rho`` maps the new variables back, so applying it to the
    generalized query gives the original.
    """
    query = q if isinstance(q, Query) else Query(_atoms(q))
    F = reference_symbols(ref)
    aliens = maximal_aliens(query, F)
    supply = VarSupply("V", avoid=query.variables())
    repl: dict[Path, Term] = {}
    rho: dict[Var, Term] = {}
    positions: list[Path] = []
    for term, paths in aliens:
        v = next(supply)
        rho[v] = term
        for p in paths:
            repl[p] = v
            positions.append(p)
    atoms = tuple(
        Struct(a.functor, tuple(_replace(arg, (k, i), repl) for i, arg in enumerate(a.args)))
        for k, a in enumerate(query.atoms)
    )
    return GeneralizationResult(Query(atoms), Substitution(rho), tuple(sorted(positions)))


def is_generalization(candidate, q, ref) -> bool:
    """True iff ``candidate`` is (up to renaming) ``q`` generalized for ``ref``."""
    return variant_of(_atoms(candidate), generalize(q, ref).generalized.atoms)


def iter_ground_aliens(F, sig: Signature) -> Iterator[Term]:
    """Ground aliens w.r.t. ``F`` over ``sig`` in canonical term order."""
    F = _as_symbols(F)
    outside = [s for s in sig.symbols if s not in F]
    if not outside:
        return
    if all(a == 0 for _, a in outside):
        yield from sorted((Struct(n) for n, _ in outside), key=term_key)
        return
    for t in iter_ground_terms(sig.symbols):
        if t.indicator not in F:
            yield t


def enumerate_ground_aliens(F, sig: Signature, limit: int) -> list[Term]:
    return list(itertools.islice(iter_ground_aliens(F, sig), limit))


class PremiseError(ValueError):
    pass


def distinct_alien_instance(ts: list[Term], F, sig: Signature) -> Substitution:
    """Ground the distinct terms ``ts`` (each a variable or an alien) into
    pairwise distinct ground aliens.

    Variables are bound one at a time to the first ground alien, in
    canonical order, that keeps all terms pairwise distinct.  Each pair of
    distinct terms has at most one such bad binding for a given variable,
    so the search per variable is bounded by the number of pairs.
    """
    F = _as_symbols(F)
    ts = list(ts)
    if len(set(ts)) != len(ts):
        raise PremiseError("terms must be pairwise distinct")
    for t in ts:
        if not isinstance(t, Var) and not is_alien(t, F):
            raise PremiseError(f"{t} is neither a variable nor an alien")
        if isinstance(t, Struct) and not symbols(t) <= sig.symbols:
            raise PremiseError(f"{t} uses symbols outside the signature")
    # order-insensitive: variables first, aliens after
    ordered = [t for t in ts if isinstance(t, Var)] + [t for t in ts if not isinstance(t, Var)]
    aliens = [t for t in ordered if not isinstance(t, Var)]
    plain_vars = [t for t in ordered if isinstance(t, Var)]

    if all(t.ground for t in aliens):
        taken = set(aliens)
        pool = (u for u in iter_ground_aliens(F, sig) if u not in taken)
        chosen = list(itertools.islice(pool, len(plain_vars)))
        if len(chosen) < len(plain_vars):
            raise PremiseError(
                f"need {len(plain_vars)} ground aliens distinct from the given ones, "
                f"the signature supplies {len(chosen)}"
            )
        return Substitution(dict(zip(plain_vars, chosen)))

    current = list(ordered)
    sigma: dict[Var, Term] = {}
    pairs = len(current) * (len(current) - 1) // 2
    for x in variables(current):
        for tries, s in enumerate(iter_ground_aliens(F, sig)):
            step = Substitution({x: s})
            nxt = [step(t) for t in current]
            if len(set(nxt)) == len(nxt):
                current = nxt
                sigma[x] = s
                break
            if tries >= pairs:
                raise AssertionError(
                    f"more than {pairs} single-binding unifiers for {x}: contradicts uniqueness"
                )
    return Substitution(sigma)
