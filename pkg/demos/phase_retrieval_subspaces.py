"""
Phase retrieval by projections and the complement family
=========================================================

A family does phase retrieval when ``{P_i x}`` spans the space for every
nonzero ``x``.  Taking complements can destroy that property.
"""

import numpy as np

from normret import constructions
from normret.retrieval import (SearchParams, decide_norm_retrieval_projections,
                               decide_phase_retrieval_projections, perp_family, pr_spanning_check)

fam = constructions.construct("two-basis-pr")
print("member dimensions:", fam.dims())

rng = np.random.default_rng(0)
print("spans at 1000 random x:", all(pr_spanning_check(fam, x) for x in rng.standard_normal((1000, 3))))
print(decide_phase_retrieval_projections(fam, SearchParams(starts=64)))

# The complements fail both phase and norm retrieval; each refutation
# carries a witness pair that is re-measured before it is reported.
comp = perp_family(fam)
for decide in (decide_phase_retrieval_projections, decide_norm_retrieval_projections):
    v = decide(comp)
    print(v, "replay:", v.diagnostics["replay"])
