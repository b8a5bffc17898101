"""
Alien subterms and the generalized query
========================================

Terms whose main symbol does not occur in the program are aliens.
Replacing each maximal alien by a variable yields a query with the same
verdicts.
"""

# %%
from pathlib import Path

from herbrand_lab.aliens import distinct_alien_instance, generalize, maximal_aliens
from herbrand_lab.syntax import Signature, parse_program, parse_query, parse_symbols, parse_term
from herbrand_lab.terms import Var

app, _ = parse_program((Path(__file__).parent / "programs" / "append.pl").read_text())
q = parse_query("app([a],[[]|g(a,X)],[g(a,Y),Z,[a]])")

# %%
for term, paths in maximal_aliens(q, app):
    print(f"{term!s:10}", paths)

# %%
g = generalize(q, app)
print(g.generalized)
print(g.rho)

# %%
# Distinct ground aliens for a mix of variables and alien terms.
sig = Signature(frozenset(parse_symbols("a/0, g/1")))
print(distinct_alien_instance([Var("Y1"), parse_term("g(a)")], {("a", 0)}, sig))
