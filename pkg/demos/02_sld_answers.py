"""
Computed answers by iterative deepening
=======================================
"""

# %%
from pathlib import Path

from herbrand_lab.sld import Budget, entails_direct, entails_via_grounding, sld_answers
from herbrand_lab.syntax import parse_program, parse_query

HERE = Path(__file__).parent
app, _ = parse_program((HERE / "programs" / "append.pl").read_text())

# %%
res = sld_answers(app, parse_query("app(X,Y,[a,b])"))
for ans in res:
    print(ans)
print("exhausted:", res.exhausted)

# %%
# An open query has infinitely many answers, so the search stops at the depth bound.
res = sld_answers(app, parse_query("app(X,Y,Z)"), Budget(max_depth=5))
print(len(res), "answers, exhausted:", res.exhausted)

# %%
# Two ways to decide P |= Q: look for a renaming answer, or ground Q with fresh constants.
q = parse_query("app([X],[Y],[X,Y])")
print(entails_direct(app, q).label, entails_via_grounding(app, q).label)

# %%
# Answers subsumed by a more general one are dropped unless asked otherwise.
p2, _ = parse_program("#alphabet a/0.\np(X).\np(a).")
print(sld_answers(p2, parse_query("p(Y)")).answers)
print(sld_answers(p2, parse_query("p(Y)"), keep_duplicates=True).answers)
