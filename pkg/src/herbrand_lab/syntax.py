"""Definite programs, queries, signatures and their concrete syntax.

The dialect is a pure-Prolog subset::

    #alphabet '[]'/0, '.'/2.
    app([], L, L).
    app([H|K], L, [H|M]) :- app(K, L, M).

Lowercase-initial names are functors or predicates, uppercase-initial (or
``_``-initial) names are variables, ``%`` starts a line comment, and list
sugar ``[a,b|T]`` is desugared to ``'.'/2`` and ``'[]'/0``.  The optional
``#alphabet`` directive declares the function symbols of the underlying
language; it may name symbols that never occur in the clauses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .terms import (
    Struct,
    Substitution,
    Term,
    Var,
    VarSupply,
    make_list,
    render_name,
    render_term,
    symbols,
    variables,
)

__all__ = [
    "SyntaxError_",
    "SignatureError",
    "Clause",
    "Program",
    "Query",
    "Signature",
    "parse_program",
    "parse_clauses",
    "parse_query",
    "parse_term",
    "parse_symbols",
    "occurring_symbols",
    "extend_signature",
    "fresh_constants",
    "render_program",
    "render_query",
    "format_symbols",
]

Symbol = tuple[str, int]


class SyntaxError_(ValueError):
    """Malformed program or query text; carries 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line else ""
        super().__init__(message + where)


class SignatureError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Data model


@dataclass(frozen=True)
class Clause:
    head: Struct
    body: tuple[Struct, ...] = ()

    def substitute(self, theta: Substitution) -> "Clause":
        return Clause(theta(self.head), tuple(theta(b) for b in self.body))

    def variables(self) -> list[Var]:
        return variables((self.head,) + self.body)

    def __str__(self) -> str:
        if not self.body:
            return render_term(self.head) + "."
        return render_term(self.head) + " :- " + ", ".join(render_term(b) for b in self.body) + "."


@dataclass(frozen=True)
class Program:
    clauses: tuple[Clause, ...]
    name: Optional[str] = None

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def predicates(self) -> set[Symbol]:
        out = set()
        for c in self.clauses:
            out.add(c.head.indicator)
            out.update(b.indicator for b in c.body)
        return out

    def __str__(self) -> str:
        return render_program(self)


@dataclass(frozen=True)
class Query:
    atoms: tuple[Struct, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.atoms, tuple):
            object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.atoms:
            raise ValueError("a query needs at least one atom")

    def substitute(self, theta: Substitution) -> "Query":
        return Query(tuple(theta(a) for a in self.atoms))

    def variables(self) -> list[Var]:
        return variables(self.atoms)

    def is_ground(self) -> bool:
        return not self.variables()

    def __iter__(self) -> Iterator[Struct]:
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        return render_query(self)


@dataclass(frozen=True)
class Signature:
    """Function-symbol alphabet of the underlying language (plus predicates)."""

    symbols: frozenset[Symbol]
    predicates: frozenset[Symbol] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", frozenset(self.symbols))
        object.__setattr__(self, "predicates", frozenset(self.predicates))
        if not self.constants():
            raise SignatureError("empty Herbrand universe: the alphabet has no constant")

    def constants(self) -> list[str]:
        return sorted(n for n, a in self.symbols if a == 0)

    def non_constants(self) -> list[Symbol]:
        return sorted(s for s in self.symbols if s[1] > 0)

    def finite_universe(self) -> bool:
        return not self.non_constants()

    def __contains__(self, sym: Symbol) -> bool:
        return sym in self.symbols

    def __str__(self) -> str:
        return format_symbols(self.symbols)


def format_symbols(syms: Iterable[Symbol]) -> str:
    return ", ".join(f"{render_name(n)}/{a}" for n, a in sorted(syms))


# ---------------------------------------------------------------------------
# Symbol analysis


def _atom_function_symbols(atom: Struct) -> set[Symbol]:
    out: set[Symbol] = set()
    for a in atom.args:
        out |= symbols(a)
    return out


def occurring_symbols(x) -> frozenset[Symbol]:
    """Function symbols (with arities) occurring in a program, clause, query,
    atom or term collection; predicate symbols are excluded."""
    out: set[Symbol] = set()
    if isinstance(x, Program):
        for c in x.clauses:
            out |= occurring_symbols(c)
    elif isinstance(x, Clause):
        for a in (x.head,) + x.body:
            out |= _atom_function_symbols(a)
    elif isinstance(x, Query):
        for a in x.atoms:
            out |= _atom_function_symbols(a)
    elif isinstance(x, Struct):
        out |= _atom_function_symbols(x)
    else:
        for y in x:
            out |= occurring_symbols(y)
    return frozenset(out)


def extend_signature(sig: Signature, fresh: Iterable[Symbol]) -> Signature:
    fresh = list(fresh)
    names = {n for n, _ in sig.symbols}
    for name, arity in fresh:
        if name in names:
            raise SignatureError(f"symbol {render_name(name)}/{arity} clashes with the alphabet")
        names.add(name)
    return Signature(sig.symbols | set(fresh), sig.predicates)


def fresh_constants(k: int, avoid: Iterable[Symbol] = (), prefix: str = "$c") -> list[Symbol]:
    """``k`` constants from a reserved namespace that the parser never produces."""
    taken = {n for n, _ in avoid}
    out = []
    i = 0
    while len(out) < k:
        i += 1
        name = f"{prefix}{i}"
        if name not in taken:
            out.append((name, 0))
    return out


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<directive>\#[a-z]+)
  | (?P<neck>:-)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<name>[a-z][A-Za-z0-9_]*|[0-9]+)
  | (?P<qname>'(?:[^'\\\n]|\\.)*')
  | (?P<nil>\[\])
  | (?P<end>\.(?=\s|%|\Z))
  | (?P<punct>[()\[\],|/])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise SyntaxError_(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        val = m.group()
        if kind != "ws":
            if kind == "qname":
                val = re.sub(r"\\(.)", r"\1", val[1:-1])
                if val.startswith("$"):
                    raise SyntaxError_(f"reserved name {val!r}", line, col)
                kind = "name"
            toks.append(_Tok(kind, val, line, col))
        nl = val.count("\n") if kind == "ws" else 0
        if nl:
            line += nl
            line_start = pos + m.group().rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self._anon = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str) -> SyntaxError_:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return SyntaxError_(f"{msg}, found {found}", t.line, t.col)

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[_Tok]:
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None

    def expect(self, kind: str, text: Optional[str] = None, what: str = "") -> _Tok:
        t = self.accept(kind, text)
        if t is None:
            raise self.error(f"expected {what or text or kind}")
        return t

    def term(self) -> Term:
        t = self.tok
        if self.accept("var"):
            if t.text == "_":
                self._anon += 1
                return Var(f"_G{self._anon}")
            return Var(t.text)
        if self.accept("nil"):
            return Struct("[]")
        if self.accept("punct", "["):
            return self.list_tail()
        if self.accept("name"):
            if self.accept("punct", "("):
                args = [self.term()]
                while self.accept("punct", ","):
                    args.append(self.term())
                self.expect("punct", ")")
                return Struct(t.text, tuple(args))
            return Struct(t.text)
        raise self.error("expected a term")

    def list_tail(self) -> Term:
        items = [self.term()]
        while self.accept("punct", ","):
            items.append(self.term())
        tail = None
        if self.accept("punct", "|"):
            tail = self.term()
        self.expect("punct", "]")
        return make_list(items, tail)

    def atom(self) -> Struct:
        t = self.tok
        if t.kind != "name":
            raise self.error("expected an atom")
        a = self.term()
        assert isinstance(a, Struct)
        return a

    def conjunction(self) -> list[Struct]:
        atoms = [self.atom()]
        while self.accept("punct", ","):
            atoms.append(self.atom())
        return atoms

    def symbol_list(self) -> list[Symbol]:
        out = []
        while True:
            t = self.tok
            if self.accept("nil"):
                name = "[]"
            elif self.accept("name"):
                name = t.text
            else:
                raise self.error("expected a symbol name")
            self.expect("punct", "/", "'/'")
            ar = self.expect("name", what="an arity")
            if not ar.text.isdigit():
                raise SyntaxError_(f"bad arity {ar.text!r}", ar.line, ar.col)
            out.append((name, int(ar.text)))
            if not self.accept("punct", ","):
                return out


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.expect("eof", what="end of input")
    return t


def _parse(text: str) -> tuple[list[Clause], Optional[set[Symbol]]]:
    p = _Parser(text)
    clauses: list[Clause] = []
    alphabet: Optional[set[Symbol]] = None
    while p.tok.kind != "eof":
        d = p.accept("directive")
        if d is not None:
            if d.text != "#alphabet":
                raise SyntaxError_(f"unknown directive {d.text}", d.line, d.col)
            alphabet = (alphabet or set()) | set(p.symbol_list())
            p.expect("end", what="'.'")
            continue
        head = p.atom()
        body: list[Struct] = []
        if p.accept("neck"):
            body = p.conjunction()
        p.expect("end", what="'.'")
        clauses.append(Clause(head, tuple(body)))
    return clauses, alphabet


def parse_clauses(text: str, name: Optional[str] = None) -> Program:
    """Parse program text, ignoring any alphabet directive."""
    clauses, _ = _parse(text)
    return Program(tuple(clauses), name)


def parse_program(
    text: str,
    name: Optional[str] = None,
    alphabet: Optional[Iterable[Symbol]] = None,
) -> tuple[Program, Signature]:
    """Parse a program and its declared signature.

    ``alphabet`` (when given) takes precedence over the file's directive,
    which takes precedence over the symbols occurring in the clauses.
    """
    clauses, declared = _parse(text)
    prog = Program(tuple(clauses), name)
    occ = occurring_symbols(prog)
    if alphabet is not None:
        declared = set(alphabet)
    syms = occ if declared is None else frozenset(declared)
    missing = occ - syms
    if missing:
        raise SignatureError(f"alphabet is missing occurring symbols: {format_symbols(missing)}")
    return prog, Signature(syms, frozenset(prog.predicates()))


def parse_query(text: str) -> Query:
    p = _Parser(text)
    if p.tok.kind == "eof":
        raise SyntaxError_("empty query", 1, 1)
    atoms = p.conjunction()
    p.accept("end")
    p.expect("eof", what="end of query")
    return Query(tuple(atoms))


def parse_symbols(text: str) -> list[Symbol]:
    """Parse ``"f/2, a/0, '[]'/0"`` into symbol pairs."""
    p = _Parser(text)
    if p.tok.kind == "eof":
        return []
    out = p.symbol_list()
    p.expect("eof", what="end of symbol list")
    return out


# ---------------------------------------------------------------------------
# Rendering


def render_query(q: Query) -> str:
    return ", ".join(render_term(a) for a in q.atoms)


def render_program(prog: Program, sig: Optional[Signature] = None) -> str:
    lines = []
    if sig is not None:
        lines.append("#alphabet " + format_symbols(sig.symbols) + ".")
    lines.extend(str(c) for c in prog.clauses)
    return "\n".join(lines) + ("\n" if lines else "")


def rename_query(q: Query, supply: VarSupply) -> Query:
    theta = Substitution({v: next(supply) for v in q.variables()})
    return q.substitute(theta)
