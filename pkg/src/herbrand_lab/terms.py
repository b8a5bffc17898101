"""First-order terms, substitutions and unification.

Terms are immutable: a :class:`Var` or a :class:`Struct` (a functor applied
to a tuple of argument terms; constants are structs with no arguments).
Atoms use the same representation, with the predicate symbol as functor.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

__all__ = [
    "Var",
    "Struct",
    "Term",
    "Substitution",
    "VarSupply",
    "unify",
    "match",
    "apply",
    "variant_of",
    "single_binding_unifiers",
    "term_size",
    "term_depth",
    "term_key",
    "variables",
    "symbols",
    "is_ground",
    "render_term",
    "cons",
    "nil",
    "make_list",
]


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@dataclass(frozen=True, slots=True)
class Struct:
    functor: str
    args: tuple = ()
    _hash: int = field(default=0, init=False, repr=False, compare=False)
    ground: bool = field(default=True, init=False, repr=False, compare=False)
    depth: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        args = self.args
        if not isinstance(args, tuple):
            args = tuple(args)
            object.__setattr__(self, "args", args)
        object.__setattr__(self, "_hash", hash((self.functor, args)))
        if args:
            ground = True
            depth = 0
            for a in args:
                if isinstance(a, Var):
                    ground = False
                else:
                    ground = ground and a.ground
                    depth = max(depth, a.depth)
            object.__setattr__(self, "ground", ground)
            object.__setattr__(self, "depth", depth + 1)

    def __hash__(self) -> int:
        return self._hash

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def indicator(self) -> tuple[str, int]:
        return (self.functor, len(self.args))

    def __str__(self) -> str:
        return render_term(self)

    def __repr__(self) -> str:
        return f"Struct({render_term(self)!r})"


Term = Union[Var, Struct]

NIL = "[]"
CONS = "."


def nil() -> Struct:
    return Struct(NIL)


def cons(head: Term, tail: Term) -> Struct:
    return Struct(CONS, (head, tail))


def make_list(items: Sequence[Term], tail: Optional[Term] = None) -> Term:
    result = nil() if tail is None else tail
    for item in reversed(items):
        result = cons(item, result)
    return result


# ---------------------------------------------------------------------------
# Rendering

_BARE_NAME = re.compile(r"[a-z][A-Za-z0-9_]*\Z|[0-9]+\Z|\$[A-Za-z0-9_]+\Z")


def render_name(name: str) -> str:
    if name == NIL or _BARE_NAME.match(name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if t.functor == CONS and len(t.args) == 2:
        items = []
        cur: Term = t
        while isinstance(cur, Struct) and cur.functor == CONS and len(cur.args) == 2:
            items.append(render_term(cur.args[0]))
            cur = cur.args[1]
        if isinstance(cur, Struct) and cur.functor == NIL and not cur.args:
            return "[" + ",".join(items) + "]"
        return "[" + ",".join(items) + "|" + render_term(cur) + "]"
    if not t.args:
        return render_name(t.functor)
    return render_name(t.functor) + "(" + ",".join(render_term(a) for a in t.args) + ")"


# ---------------------------------------------------------------------------
# Structural measures


def term_size(t: Term) -> int:
    """Number of nodes; a proper subterm is always strictly smaller."""
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def term_depth(t: Term) -> int:
    """Nesting depth: variables and constants have depth 0."""
    return 0 if isinstance(t, Var) else t.depth


def term_key(t: Term) -> tuple:
    """Sort key for the canonical order: size, then functor name, then arguments.

    Variables sort before structs of the same size.
    """
    if isinstance(t, Var):
        return (1, 0, t.name)
    return (term_size(t), 1, t.functor, len(t.args), tuple(term_key(a) for a in t.args))


def _iter_vars(t: Term) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    elif not t.ground:
        for a in t.args:
            yield from _iter_vars(a)


def variables(x: Union[Term, Iterable[Term]]) -> list[Var]:
    """Distinct variables in order of first occurrence."""
    terms = [x] if isinstance(x, (Var, Struct)) else x
    seen: dict[Var, None] = {}
    for t in terms:
        for v in _iter_vars(t):
            seen.setdefault(v)
    return list(seen)


def symbols(t: Term) -> set[tuple[str, int]]:
    """Function symbols (name, arity) occurring in ``t``, its own functor included."""
    out: set[tuple[str, int]] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Struct):
            out.add(s.indicator)
            stack.extend(s.args)
    return out


def is_ground(t: Term) -> bool:
    return not isinstance(t, Var) and t.ground


# ---------------------------------------------------------------------------
# Substitutions


class Substitution(Mapping[Var, Term]):
    """Finite map from variables to terms; identity bindings are dropped."""

    __slots__ = ("_bindings",)

    def __init__(self, bindings: Optional[Mapping[Var, Term]] = None):
        b = {}
        for v, t in (bindings or {}).items():
            if not isinstance(v, Var):
                raise TypeError(f"substitution domain must be variables, got {v!r}")
            if t != v:
                b[v] = t
        self._bindings = b

    def __getitem__(self, v: Var) -> Term:
        return self._bindings[v]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._bindings)

    def __len__(self) -> int:
        return len(self._bindings)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Substitution):
            return self._bindings == other._bindings
        if isinstance(other, Mapping):
            return self._bindings == dict(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._bindings.items()))

    def __repr__(self) -> str:
        return "Substitution(" + str(self) + ")"

    def __str__(self) -> str:
        return "{" + ", ".join(f"{v}/{render_term(t)}" for v, t in self._bindings.items()) + "}"

    @property
    def domain(self) -> frozenset[Var]:
        return frozenset(self._bindings)

    def range_variables(self) -> list[Var]:
        return variables(self._bindings.values())

    def __call__(self, t: Term) -> Term:
        if not self._bindings:
            return t
        return _subst(t, self._bindings)

    def compose(self, other: "Substitution") -> "Substitution":
        """``self`` followed by ``other``: t(self.compose(other)) == (t self) other."""
        out = {v: other(t) for v, t in self._bindings.items()}
        for v, t in other._bindings.items():
            if v not in self._bindings:
                out[v] = t
        return Substitution(out)

    def restrict(self, vs: Iterable[Var]) -> "Substitution":
        keep = set(vs)
        return Substitution({v: t for v, t in self._bindings.items() if v in keep})

    def is_idempotent(self) -> bool:
        return self.compose(self) == self

    def is_renaming(self) -> bool:
        """True iff the bindings map distinct variables to distinct variables."""
        vals = list(self._bindings.values())
        return all(isinstance(t, Var) for t in vals) and len(set(vals)) == len(vals)


def _subst(t: Term, b: Mapping[Var, Term]) -> Term:
    if isinstance(t, Var):
        return b.get(t, t)
    if t.ground:
        return t
    return Struct(t.functor, tuple(_subst(a, b) for a in t.args))


def apply(theta: Mapping[Var, Term], x):
    """Apply ``theta`` to a term, an object with ``substitute``, or a sequence of those."""
    if not isinstance(theta, Substitution):
        theta = Substitution(theta)
    if isinstance(x, (Var, Struct)):
        return theta(x)
    if hasattr(x, "substitute"):
        return x.substitute(theta)
    return tuple(apply(theta, y) for y in x)


class VarSupply:
    """Monotone generator of fresh variables ``V1, V2, ...`` avoiding given names."""

    def __init__(self, prefix: str = "V", avoid: Iterable[Union[str, Var]] = ()):
        self.prefix = prefix
        self.counter = 0
        self.avoid = {a.name if isinstance(a, Var) else a for a in avoid}

    def __next__(self) -> Var:
        while True:
            self.counter += 1
            name = f"{self.prefix}{self.counter}"
            if name not in self.avoid:
                return Var(name)

    def __iter__(self) -> "VarSupply":
        return self

    def take(self, n: int) -> list[Var]:
        return [next(self) for _ in range(n)]


# ---------------------------------------------------------------------------
# Unification


def walk(t: Term, b: Mapping[Var, Term]) -> Term:
    while isinstance(t, Var):
        nxt = b.get(t)
        if nxt is None:
            return t
        t = nxt
    return t


def occurs(v: Var, t: Term, b: Mapping[Var, Term]) -> bool:
    stack = [t]
    while stack:
        s = walk(stack.pop(), b)
        if isinstance(s, Var):
            if s == v:
                return True
        else:
            stack.extend(s.args)
    return False


def unify_bindings(t1: Term, t2: Term, b: dict, trail: Optional[list] = None) -> bool:
    """Extend triangular bindings ``b`` to unify ``t1`` and ``t2`` (occurs-check on).

    New bindings are recorded in ``trail`` when given; on failure ``b`` may
    hold partial bindings and the caller is expected to undo via the trail.
    """
    stack = [(t1, t2)]
    while stack:
        a, c = stack.pop()
        a = walk(a, b)
        c = walk(c, b)
        if a is c or a == c:
            continue
        if isinstance(a, Var):
            if occurs(a, c, b):
                return False
            b[a] = c
            if trail is not None:
                trail.append(a)
        elif isinstance(c, Var):
            if occurs(c, a, b):
                return False
            b[c] = a
            if trail is not None:
                trail.append(c)
        else:
            if a.functor != c.functor or len(a.args) != len(c.args):
                return False
            stack.extend(zip(a.args, c.args))
    return True


def resolve(t: Term, b: Mapping[Var, Term]) -> Term:
    """Fully dereference ``t`` under triangular bindings ``b``."""
    t = walk(t, b)
    if isinstance(t, Var) or t.ground:
        return t
    return Struct(t.functor, tuple(resolve(a, b) for a in t.args))


def unify(t1, t2) -> Optional[Substitution]:
    """Idempotent most general unifier of two terms (or equal-length term tuples)."""
    b: dict = {}
    if isinstance(t1, (Var, Struct)) and isinstance(t2, (Var, Struct)):
        ok = unify_bindings(t1, t2, b)
    else:
        t1, t2 = tuple(t1), tuple(t2)
        ok = len(t1) == len(t2) and unify_bindings(Struct("", t1), Struct("", t2), b)
    if not ok:
        return None
    return Substitution({v: resolve(v, b) for v in b})


def match(pattern, target) -> Optional[Substitution]:
    """One-way matching: theta with pattern theta == target, variables of target fixed."""
    if isinstance(pattern, (Var, Struct)):
        pairs = [(pattern, target)]
    else:
        pattern, target = tuple(pattern), tuple(target)
        if len(pattern) != len(target):
            return None
        pairs = list(zip(pattern, target))
    b: dict[Var, Term] = {}
    while pairs:
        p, t = pairs.pop()
        if isinstance(p, Var):
            bound = b.get(p)
            if bound is None:
                b[p] = t
            elif bound != t:
                return None
        elif isinstance(t, Var) or p.functor != t.functor or len(p.args) != len(t.args):
            return None
        else:
            pairs.extend(zip(p.args, t.args))
    return Substitution(b)


def variant_of(a, b) -> bool:
    """True iff ``a`` and ``b`` are equal up to a consistent bijective variable renaming."""
    if isinstance(a, (Var, Struct)) != isinstance(b, (Var, Struct)):
        return False
    if isinstance(a, (Var, Struct)):
        pairs = [(a, b)]
    else:
        a = tuple(a.atoms) if hasattr(a, "atoms") else tuple(a)
        b = tuple(b.atoms) if hasattr(b, "atoms") else tuple(b)
        if len(a) != len(b):
            return False
        pairs = list(zip(a, b))
    fwd: dict[Var, Var] = {}
    bwd: dict[Var, Var] = {}
    while pairs:
        x, y = pairs.pop()
        if isinstance(x, Var) and isinstance(y, Var):
            if fwd.setdefault(x, y) != y or bwd.setdefault(y, x) != x:
                return False
        elif isinstance(x, Var) or isinstance(y, Var):
            return False
        elif x.functor != y.functor or len(x.args) != len(y.args):
            return False
        else:
            pairs.extend(zip(x.args, y.args))
    return True


def single_binding_unifiers(s1: Term, s2: Term, universe: Iterable[Term]) -> list[Substitution]:
    """All unifiers ``{X/u}`` of ``s1, s2`` with ``X`` a variable of either term
    and ``u`` a non-variable term drawn from ``universe``."""
    if s1 == s2:
        raise ValueError("single_binding_unifiers needs two distinct terms")
    cands = [u for u in universe if not isinstance(u, Var)]
    found = []
    for x in variables([s1, s2]):
        for u in cands:
            theta = Substitution({x: u})
            if theta(s1) == theta(s2):
                found.append(theta)
    return found


def ground_terms_by_size(sig: Iterable[tuple[str, int]], size: int) -> list[Term]:
    """All ground terms with exactly ``size`` nodes, in canonical order."""
    return list(_ground_of_size(tuple(sorted(set(sig))), size))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


_SIZE_CACHE: dict = {}


def _ground_of_size(sig: tuple, size: int) -> tuple:
    key = (sig, size)
    hit = _SIZE_CACHE.get(key)
    if hit is not None:
        return hit
    out: list[Term] = []
    if size >= 1:
        for name, arity in sig:
            if arity == 0:
                if size == 1:
                    out.append(Struct(name))
                continue
            for comp in _compositions(size - 1, arity):
                pools = [_ground_of_size(sig, s) for s in comp]
                for args in itertools.product(*pools):
                    out.append(Struct(name, args))
    out.sort(key=term_key)
    res = tuple(out)
    _SIZE_CACHE[key] = res
    return res


def iter_ground_terms(sig: Iterable[tuple[str, int]], max_size: Optional[int] = None) -> Iterator[Term]:
    """Ground terms over ``sig`` in canonical order (size, then lexicographic)."""
    s = tuple(sorted(set(sig)))
    finite = all(a == 0 for _, a in s)
    size = 1
    while max_size is None or size <= max_size:
        yield from _ground_of_size(s, size)
        if finite or not s:
            return
        size += 1


def ground_terms_upto_depth(sig: Iterable[tuple[str, int]], depth: int) -> list[Term]:
    """All ground terms of nesting depth at most ``depth``, in canonical order."""
    s = tuple(sorted(set(sig)))
    levels: list[list[Term]] = [[Struct(n) for n, a in s if a == 0]]
    for _ in range(depth):
        prev = levels[-1]
        nxt = list(levels[0])
        for name, arity in s:
            if arity:
                nxt.extend(Struct(name, args) for args in itertools.product(prev, repeat=arity))
        levels.append(nxt)
    return sorted(levels[-1], key=term_key)
