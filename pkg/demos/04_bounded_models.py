"""
Bounded least Herbrand models
=============================

Two append programs with the same least model but different logical
consequences.
"""

# %%
from pathlib import Path

from herbrand_lab.herbrand import least_model_upto, model_satisfies
from herbrand_lab.sld import entails
from herbrand_lab.syntax import parse_program, parse_query

HERE = Path(__file__).parent / "programs"
app, sig = parse_program((HERE / "append.pl").read_text())
app3, sig3 = parse_program((HERE / "append3.pl").read_text())

# %%
for d in (1, 2, 3):
    m = least_model_upto(app, sig, d)
    print(d, len(m), "atoms, stages:", len(m.stages), "fixpoint:", m.fixpoint_reached)

# %%
print(all(least_model_upto(app, sig, d).atoms == least_model_upto(app3, sig3, d).atoms for d in (2, 3, 4)))

# %%
q = parse_query("app([X],[Y],[X,Y])")
print("model, depth <= 3:", model_satisfies(app, sig, q, depth_cap=3).label)
print("APPEND:", entails(app, q).label, "  three-clause variant:", entails(app3, q).label)
