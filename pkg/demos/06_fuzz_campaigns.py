"""
Randomized campaigns
====================

Each campaign draws small programs and queries from a seeded generator
and checks one property.  Reports are reproducible from the seed.
"""

# %%
from herbrand_lab.fuzz import PROPERTIES, run_campaign

for prop in PROPERTIES:
    report = run_campaign(prop, seed=7, cases=40)
    print(f"{prop:12}", report.summary())

# %%
# Each case is a self-contained record, one JSON line per case.
print(run_campaign("ground_eq", seed=7, cases=2).to_jsonl())
