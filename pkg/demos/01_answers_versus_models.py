"""
When the least Herbrand model and the program disagree
=======================================================

A single fact p(a) over the one-constant alphabet {a}.  Every ground
instance of p(X) is true in the least model, yet p(X) is not a
logical consequence of the program.
"""

# %%
from herbrand_lab.herbrand import model_satisfies
from herbrand_lab.lab import check_conditions, equivalence_verdict
from herbrand_lab.sld import entails
from herbrand_lab.syntax import parse_program, parse_query

prog, sig = parse_program("#alphabet a/0.\np(a).")
q = parse_query("p(X)")

# %%
# The model check grounds X over the (finite) universe {a}.
print("M_P |= p(X):", model_satisfies(prog, sig, q).label)
# SLD finds only the answer X = a, which is not a renaming.
print("P   |= p(X):", entails(prog, q).label)

# %%
# Neither sufficient condition is met: no spare function symbol, no spare constant.
print(check_conditions(prog, q, sig).describe())

# %%
# Add a second constant and the model no longer satisfies p(X) either.
prog2, sig2 = parse_program("#alphabet a/0, b/0.\np(a).")
r = equivalence_verdict(prog2, q, sig2)
print(r.model_verdict.label, r.model_verdict.evidence, r.entails_verdict.label)
