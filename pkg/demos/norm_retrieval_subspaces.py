"""
Deciding norm retrieval for subspaces
=====================================

The decision engine tries exact tests first and a seeded search last.  Families it cannot settle either way come back as ``ProbablyYes``.
"""

from normret import constructions
from normret.retrieval import SearchParams, decide_norm_retrieval_projections, identity_certificate
from normret.subspaces import SubspaceFamily
from normret.verdict import replay_witness

e1, e2, e3 = [1, 0, 0], [0, 1, 0], [0, 0, 1]

# |x|^2 = |P1 x|^2 + |P2 x|^2 - |P3 x|^2 for these coordinate subspaces, so the
# engine finds an exact identity certificate.
signed = SubspaceFamily.from_spans([[e1, e2], [e2, e3], [e2]])
v = decide_norm_retrieval_projections(signed)
print(v, "certificate:", list(v.certificate))

# Hyperplanes orthogonal to e1 and e2 do not retrieve norms.
two = constructions.hyperplane_family([e1, e2], exact=True)
v = decide_norm_retrieval_projections(two)
print(v, "squared norms:", v.witness.norms_sq())

# A hand-built exact witness: x = (1,1,1) against sqrt(2) (1,1,0).
w = constructions.coordinate_hyperplane_witness(3)
print("replay:", replay_witness(w, two), "squared norms:", w.norms_sq())

# Three hyperplanes of R^3 in general position do retrieve norms, yet the
# identity is not a combination of their projections.  The engine reports
# its limit honestly instead of guessing.
three = constructions.construct("three-codim-one", dim=3)
print("identity certificate:", identity_certificate(three))
v = decide_norm_retrieval_projections(three, SearchParams(starts=2000, seed=1))
print(v, v.diagnostics["search"])
