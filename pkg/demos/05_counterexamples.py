"""
Building a program where the model and the consequences differ
==============================================================

Given a finite set of function symbols F0 and a query with variables,
build a program over F0 whose least model satisfies the query over the
alphabet while the query is not a consequence.
"""

# %%
from herbrand_lab.lab import build_counterexample, counterexample_template, verify_counterexample
from herbrand_lab.syntax import Signature, parse_query, parse_symbols, render_program

F0 = parse_symbols("g/1, c/0")
sig = Signature(frozenset(parse_symbols("g/1, c/0, a1/0, b1/0")))
q = parse_query("q(b1,Y1,Y2)")

# %%
tpl = counterexample_template(F0, sig, q)
print(tpl)
prog = build_counterexample(F0, sig, q)
print(render_program(prog))

# %%
chk = verify_counterexample(F0, sig, q, program=prog)
print("ok:", chk.ok, " witness:", chk.witness, " model:", chk.model_verdict.label, " entails:", chk.entails_verdict.label)
