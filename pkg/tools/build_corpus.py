"""Regenerate src/normret/corpus_data/*.json.

Run from the repository root:  python3 tools/build_corpus.py
Constructed inputs are inlined so every entry is self-contained.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from normret import constructions, io

OUT = Path(__file__).resolve().parents[1] / "src" / "normret" / "corpus_data"


def e(n, i):
    return [1 if j == i else 0 for j in range(n)]


def family(spans, dim, field="exact"):
    return {"field": field, "dim": dim, "subspaces": [{"basis": s} for s in spans]}


def frame(vectors, field="exact"):
    return {"field": field, "dim": len(vectors[0]), "vectors": vectors}


def strip_meta(doc):
    doc = dict(doc)
    doc.pop("meta", None)
    return doc


ENTRIES = []


def entry(id, source, input, expectations, transform=None, proved=None, notes=""):
    doc = {"id": id, "source": source, "notes": notes, "input": input, "expectations": expectations}
    if transform:
        doc["transform"] = transform
    if proved:
        doc["proved"] = proved
    ENTRIES.append(doc)


signed = family([[e(3, 0), e(3, 1)], [e(3, 1), e(3, 2)], [e(3, 1)]], 3)
entry("coordinate-planes-signed-sum",
      "worked example: two coordinate planes and their common axis",
      signed,
      {"decide_nr": {"status": "YesExact", "rule": "identity-certificate", "certificate": [1, 1, -1], "exact": True},
       "decide_pr": {"status": "NoWithWitness", "rule": "complements-span"},
       "nr_dimension_sum": "Pass",
       "pooled_test": "Pass",
       "identity_certificate": {"found": True, "value": [1, 1, -1]}},
      proved={"nr": True, "pr": False},
      notes="|x|^2 = |P1 x|^2 + |P2 x|^2 - |P3 x|^2; the complements e3, e1, span{e1, e3} miss e2.")

two_basis = constructions.construct("two-basis-pr")
tb = io.family_to_json(two_basis)
tb["meta"] = {"recipe": "two-basis-pr"}
entry("two-basis-five-subspaces",
      "worked example: five subspaces from two full-spark orthonormal bases",
      tb,
      {"decide_pr": {"status": "ProbablyYes"},
       "perp_decide_nr": {"status": "NoWithWitness"},
       "perp_decide_pr": {"status": "NoWithWitness"}},
      proved={"nr": True, "pr": True},
      notes="Phase retrieval holds (so norm retrieval too) but no certificate exists for general subspaces.")
entry("two-basis-five-complements",
      "worked example: complements of the two-basis family",
      tb,
      {"decide_nr": {"status": "NoWithWitness"}},
      transform=["perp"],
      proved={"nr": False, "pr": False})

cone = constructions.construct("cone-example")
cj = strip_meta(io.frame_to_json(cone))
entry("cone-five-vectors",
      "worked example: five full-spark vectors inside a narrow cone",
      cj,
      {"spark": 4,
       "phase_retrieval_vectors": "YesExact",
       "decide_pr": {"status": "YesExact", "rule": "complement-property"},
       "decide_nr": {"status": "YesExact"},
       "identity_certificate": {"found": False},
       "scalability": {"status": "Separated"}},
      transform=["lines"],
      proved={"nr": True, "pr": True},
      notes="Phase retrieval without the identity in the span of the rank-one projections; not scalable.")

coord5 = family([[e(3, 0)], [e(3, 1)], [e(3, 2)], [e(3, 0), e(3, 1)], [e(3, 0), e(3, 2)]], 3)
entry("coordinate-five-two-certificates",
      "worked example: two identity certificates with different sums",
      coord5,
      {"certificates": {"coefficients": [[1, 1, 1, 0, 0], [-1, 0, 0, 1, 1]], "sums": [3, 1],
                        "complement_found": [True, False]},
       "decide_nr": {"status": "YesExact", "rule": "identity-certificate"},
       "perp_decide_nr": {"status": "YesExact"}},
      proved={"nr": True})
entry("coordinate-five-complements",
      "worked example: complements of the five coordinate subspaces",
      coord5,
      {"decide_nr": {"status": "YesExact"}},
      transform=["perp"],
      proved={"nr": True})

mult = constructions.construct("coordinate-multiplicity", sets=[[0, 1], [1, 2], [0, 2]], dim=3)
entry("uniform-multiplicity-coordinates",
      "coordinate subspaces covering each axis equally often",
      strip_meta(io.family_to_json(mult)),
      {"decide_nr": {"status": "YesExact", "certificate": ["1/2", "1/2", "1/2"], "exact": True}},
      proved={"nr": True})

r3 = math.sqrt(3) / 2
mb = [[0.0, 1.0], [-r3, -0.5], [r3, -0.5]]
entry("mercedes-benz-tight",
      "tight frames retrieve norms: three equiangular vectors in the plane",
      frame(mb, "float"),
      {"classify": {"tight": True, "parseval": False},
       "norm_retrieval_vectors": "YesExact",
       "decide_nr": {"status": "YesExact"},
       "scalability": {"status": "Feasible", "c": ["2/3", "2/3", "2/3"]},
       "tail_check": {"samples": 50, "all_true": True}},
      transform=["lines"],
      proved={"nr": True})
s = math.sqrt(2 / 3)
entry("mercedes-benz-parseval",
      "Naimark embedding of the Parseval-scaled equiangular frame",
      frame([[s * a for a in v] for v in mb], "float"),
      {"classify": {"tight": True, "parseval": True},
       "naimark_embed": {"ambient": 3, "trace": 2.0}},
      transform=["lines"],
      proved={"nr": True})

for n, norms in ((3, [3, 4]), (4, [4, "9/2"])):
    hyp = constructions.hyperplane_family([e(n, i) for i in range(n - 1)], exact=True)
    entry(f"basis-hyperplanes-missing-one-dim{n}",
          "hyperplanes of all but one basis vector fail norm retrieval",
          strip_meta(io.family_to_json(hyp)),
          {"decide_nr": {"status": "NoWithWitness", "rule": "pooled-basis"},
           "pooled_test": "Fail",
           "explicit_hyperplane_witness": {"norms_sq": norms}},
          proved={"nr": False})

oblique = [[1, 0, 0], ["3/5", "4/5", 0]]
entry("oblique-hyperplanes-dim3",
      "hyperplanes of N-1 independent unit vectors fail norm retrieval",
      frame(oblique),
      {"oblique_hyperplane_witness": {"replay": True},
       "decide_nr": {"status": "NoWithWitness"}},
      transform=["hyperplanes"],
      proved={"nr": False})

three = constructions.construct("three-codim-one", dim=3)
entry("three-generic-hyperplanes",
      "three hyperplanes of R^3 retrieve norms without an identity certificate",
      strip_meta(io.family_to_json(three)),
      {"decide_nr": {"status": "ProbablyYes", "rule": "search-exhausted"},
       "identity_certificate": {"found": False},
       "pooled_test": "Pass"},
      proved={"nr": True},
      notes="Known incompleteness: the engine cannot certify this family and must not refute it.")

kp = constructions.construct("k-plus-one", dim=4, k=2)
entry("nested-k-plus-one",
      "a base subspace plus K one-step extensions",
      strip_meta(io.family_to_json(kp)),
      {"decide_nr": {"status": "YesExact", "certificate": [-1, 1, 1], "exact": True}},
      proved={"nr": True})

pl = constructions.construct("partition-ln", sizes=[2, 2, 2], dim=3)
entry("layered-partition",
      "coordinate blocks covering every axis L times",
      strip_meta(io.family_to_json(pl)),
      {"decide_nr": {"status": "YesExact", "certificate": ["1/2", "1/2", "1/2"], "exact": True},
       "nr_dimension_sum": "Pass"},
      proved={"nr": True})
entry("dimension-deficit",
      "member dimensions summing below N fail norm retrieval",
      family([[e(3, 0)], [e(3, 1)]], 3),
      {"nr_dimension_sum": "Fail",
       "decide_nr": {"status": "NoWithWitness", "rule": "dimension-sum"},
       "decide_pr": {"status": "NoWithWitness", "rule": "dimension-sum"}},
      proved={"nr": False, "pr": False})

allhyp = constructions.hyperplane_family([e(4, i) for i in range(4)], exact=True)
entry("all-basis-hyperplanes-dim4",
      "hyperplanes of a full orthonormal basis",
      strip_meta(io.family_to_json(allhyp)),
      {"decide_nr": {"status": "YesExact", "certificate": ["1/3"] * 4, "exact": True}},
      proved={"nr": True})

entry("orthogonal-triple",
      "mutually orthogonal vectors retrieve norms",
      frame([[1, 1, 0], [1, -1, 0], [0, 0, 2]]),
      {"norm_retrieval_vectors": "YesExact",
       "decide_nr": {"status": "YesExact", "rule": "rank-one-partition"},
       "phase_retrieval_vectors": "NoWithWitness"},
      transform=["lines"],
      proved={"nr": True, "pr": False})
entry("oblique-pair",
      "independent non-orthogonal vectors fail norm retrieval",
      frame([[1, 0], [1, 1]]),
      {"norm_retrieval_vectors": "NoWithWitness",
       "decide_nr": {"status": "NoWithWitness", "rule": "rank-one-partition"},
       "tail_check": {"samples": 20, "all_true": False}},
      transform=["lines"],
      proved={"nr": False, "pr": False})
entry("completion-three-vectors",
      "Parseval completion with 2M - 1 vectors",
      frame([[1, 0], [0, 1], [1, 1]]),
      {"completion": {"count": 5, "parseval": True},
       "tail_check": {"samples": 50, "all_true": True}},
      transform=["lines"],
      proved={"nr": True, "pr": True})
entry("full-spark-five-dim3",
      "full-spark frames of 2N - 1 vectors do phase retrieval",
      frame([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3]]),
      {"spark": 4, "phase_retrieval_vectors": "YesExact",
       "decide_pr": {"status": "YesExact", "rule": "complement-property"}},
      transform=["lines"],
      proved={"nr": True, "pr": True})
entry("four-vectors-dim3",
      "2N - 2 vectors cannot do phase retrieval",
      frame([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]),
      {"phase_retrieval_vectors": "NoWithWitness",
       "decide_pr": {"status": "NoWithWitness", "rule": "complement-property"}},
      transform=["lines"],
      proved={"pr": False})


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for old in OUT.glob("*.json"):
        old.unlink()
    for doc in ENTRIES:
        (OUT / f"{doc['id']}.json").write_text(json.dumps(io.encode(doc), indent=2) + "\n")
    print(f"wrote {len(ENTRIES)} entries to {OUT}")


if __name__ == "__main__":
    main()
