"""Registry of worked instances with expected outcomes, runnable as a regression suite.

Each JSON file in ``corpus_data`` holds one entry::

    {"id": ..., "source": ..., "notes": ...,
     "input": <frame or family JSON>,
     "transform": "lines" | "hyperplanes" | "perp" (optional, applied in order if a list),
     "proved": {"nr": bool, "pr": bool} (optional),
     "expectations": {<operation>: <expected value>, ...}}

``input`` is the raw object; ``transform`` derives the subspace family that
the retrieval operations act on.  Frame-level operations use the raw frame.
"""

from __future__ import annotations

import fnmatch
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from . import constructions, frames, io, retrieval
from .frames import FrameSpec
from .linalg import is_exact, to_float
from .subspaces import SubspaceFamily
from .verdict import replay_witness

__all__ = ["CorpusEntry", "EntryResult", "CorpusReport", "CorpusConfigError", "load_corpus", "run_corpus",
           "OPERATIONS", "subject_family"]


class CorpusConfigError(ValueError):
    """An entry is malformed or names an unknown operation."""


@dataclass
class CorpusEntry:
    id: str
    source: str
    raw: FrameSpec | SubspaceFamily
    transform: tuple = ()
    expectations: dict = field(default_factory=dict)
    proved: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def family(self) -> SubspaceFamily:
        return subject_family(self.raw, self.transform)


@dataclass
class EntryResult:
    id: str
    passed: bool
    mismatches: list = field(default_factory=list)
    seconds: float = 0.0


@dataclass
class CorpusReport:
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def summary(self) -> str:
        lines = []
        for r in self.results:
            lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.id}  ({r.seconds:.2f}s)")
            for op, exp, got in r.mismatches:
                lines.append(f"      {op}: expected {exp!r}, computed {got!r}")
        n_ok = sum(r.passed for r in self.results)
        lines.append(f"{n_ok}/{len(self.results)} entries passed")
        return "\n".join(lines)


def subject_family(raw, transform=()) -> SubspaceFamily:
    obj = raw
    for t in transform:
        if t == "lines":
            obj = SubspaceFamily.lines(obj)
        elif t == "hyperplanes":
            obj = constructions.hyperplane_family(obj)
        elif t == "perp":
            obj = retrieval.perp_family(obj)
        else:
            raise CorpusConfigError(f"unknown transform {t!r}")
    if isinstance(obj, FrameSpec):
        obj = SubspaceFamily.lines(obj)
    return obj


def _corpus_dir():
    return resources.files("normret") / "corpus_data"


def load_corpus(path=None) -> list[CorpusEntry]:
    root = Path(path) if path is not None else _corpus_dir()
    entries = []
    for p in sorted(root.iterdir(), key=lambda q: q.name):
        if not p.name.endswith(".json"):
            continue
        doc = json.loads(p.read_text())
        eid = doc.get("id", p.name)
        try:
            raw = io.parse_input(doc["input"])
        except (KeyError, ValueError) as exc:
            raise CorpusConfigError(f"{eid}: bad input ({exc})") from None
        tr = doc.get("transform", [])
        tr = (tr,) if isinstance(tr, str) else tuple(tr)
        exps = doc.get("expectations", {})
        unknown = sorted(set(exps) - set(OPERATIONS))
        if unknown:
            raise CorpusConfigError(f"{eid}: unknown operation(s) {unknown}")
        entries.append(CorpusEntry(eid, doc.get("source", ""), raw, tr, exps, doc.get("proved", {}),
                                   doc.get("notes", "")))
    return entries


# ---------------------------------------------------------------------------
# operations: each returns (ok, computed)
# ---------------------------------------------------------------------------

def _frac(v):
    return Fraction(v) if isinstance(v, (str, int)) else v


def _same_vector(expected, got, rel=1e-9) -> bool:
    if len(expected) != len(got):
        return False
    for e, g in zip(expected, got):
        e = _frac(e)
        if isinstance(e, Fraction) and isinstance(g, Fraction):
            if e != g:
                return False
        elif abs(float(e) - float(g)) > rel * max(1.0, abs(float(e))):
            return False
    return True


def _verdict_check(v, expected):
    got = {"status": v.status.value, "rule": v.rule}
    ok = got["status"] == expected["status"]
    if "rule" in expected:
        ok &= got["rule"] == expected["rule"]
    if "certificate" in expected:
        got["certificate"] = io.encode(v.certificate)
        ok &= v.certificate is not None and not isinstance(v.certificate, str) and _same_vector(
            expected["certificate"], list(v.certificate))
        if expected.get("exact"):
            ok &= is_exact(np.asarray(v.certificate)) and all(isinstance(c, Fraction) for c in v.certificate)
    if v.witness is not None:
        got["replay"] = v.diagnostics.get("replay", {}).get("ok")
    return ok, got


def _op_decide_nr(e, x):
    return _verdict_check(retrieval.decide_norm_retrieval_projections(e.family), x)


def _op_decide_pr(e, x):
    return _verdict_check(retrieval.decide_phase_retrieval_projections(e.family), x)


def _op_perp_decide_nr(e, x):
    return _verdict_check(retrieval.decide_norm_retrieval_projections(retrieval.perp_family(e.family)), x)


def _op_perp_decide_pr(e, x):
    return _verdict_check(retrieval.decide_phase_retrieval_projections(retrieval.perp_family(e.family)), x)


def _op_identity_certificate(e, x):
    a = retrieval.identity_certificate(e.family)
    got = {"found": a is not None}
    if a is not None:
        got["value"] = io.encode(a)
    ok = got["found"] == x["found"]
    if ok and "value" in x:
        ok = _same_vector(x["value"], list(a))
    return ok, got


def _op_certificates(e, x):
    fam = e.family
    got = {"replay": [], "sums": [], "complement": []}
    for coeffs in x["coefficients"]:
        a = [_frac(c) for c in coeffs]
        got["replay"].append(retrieval.replays_identity(fam, a))
        got["sums"].append(str(sum(a, Fraction(0))))
        b = retrieval.complement_identity_certificate(fam, a) if got["replay"][-1] else None
        got["complement"].append(None if b is None else io.encode(b))
    ok = all(got["replay"]) and [Fraction(s) for s in got["sums"]] == [_frac(s) for s in x["sums"]]
    if "complement_found" in x:
        ok &= [c is not None for c in got["complement"]] == x["complement_found"]
    return ok, got


def _op_nr_dimension_sum(e, x):
    got = "Pass" if retrieval.nr_dimension_sum_test(e.family) is None else "Fail"
    return got == x, got


def _op_pooled_test(e, x):
    got = "Pass" if retrieval.pooled_necessary_nr_test(e.family) is None else "Fail"
    return got == x, got


def _op_explicit_hyperplane_witness(e, x):
    w = constructions.coordinate_hyperplane_witness(e.family.dim, x.get("indices"))
    rep = replay_witness(w, e.family)
    norms = [str(v) for v in w.norms_sq()]
    ok = rep.ok and norms == [str(Fraction(v)) for v in x["norms_sq"]]
    if x.get("exact", True):
        ok &= rep.measurement_dev == 0
    return ok, {"replay": rep.ok, "norms_sq": norms, "measurement_dev": rep.measurement_dev}


def _op_oblique_hyperplane_witness(e, x):
    w = constructions.independent_hyperplane_failure_witness(e.raw)
    rep = replay_witness(w, e.family)
    return rep.ok == x["replay"], {"replay": rep.ok, "gap": rep.gap}


def _raw_frame(e) -> FrameSpec:
    if not isinstance(e.raw, FrameSpec):
        raise CorpusConfigError(f"{e.id}: operation needs a frame input")
    return e.raw


def _op_norm_retrieval_vectors(e, x):
    v = frames.norm_retrieval_vectors(_raw_frame(e))
    return v.status.value == x, v.status.value


def _op_phase_retrieval_vectors(e, x):
    v = frames.phase_retrieval_vectors(_raw_frame(e))
    return v.status.value == x, v.status.value


def _op_classify(e, x):
    flags = frames.classify(_raw_frame(e))
    got = {k: getattr(flags, k) for k in x}
    return got == x, got


def _op_spark(e, x):
    got = frames.spark(_raw_frame(e))
    return got == x, got


def _op_scalability(e, x):
    res = frames.scalability(_raw_frame(e))
    status = type(res).__name__
    got = {"status": status}
    ok = status == x["status"]
    if status == "Feasible":
        got["c"] = [float(c) for c in res.c]
        if "c" in x:
            ok &= _same_vector([float(_frac(c)) for c in x["c"]], got["c"], rel=1e-8)
    return ok, got


def _op_completion(e, x):
    g = constructions.bessel_to_parseval_completion(_raw_frame(e))
    s = to_float(frames.frame_operator(g))
    dev = float(np.linalg.norm(s - np.eye(g.dim)) / np.linalg.norm(np.eye(g.dim)))
    got = {"count": g.count, "parseval": dev <= 1e-9}
    return got == x, got


def _op_naimark_embed(e, x):
    emb = constructions.naimark_embed(_raw_frame(e))
    got = {"ambient": emb.ambient, "trace": round(float(np.trace(emb.projection)), 9)}
    return all(got[k] == v for k, v in x.items()), got


def _op_tail_check(e, x):
    f = _raw_frame(e)
    rng = np.random.default_rng(x.get("seed", 0))
    results = []
    for _ in range(x["samples"]):
        z = rng.standard_normal(f.dim)
        for y in constructions.sign_flip_partners(f, z):
            results.append(constructions.naimark_nr_tail_check(f, z, y))
    got = {"all_true": all(results), "pairs": len(results)}
    return got["all_true"] == x["all_true"], got


OPERATIONS = {
    "decide_nr": _op_decide_nr,
    "decide_pr": _op_decide_pr,
    "perp_decide_nr": _op_perp_decide_nr,
    "perp_decide_pr": _op_perp_decide_pr,
    "identity_certificate": _op_identity_certificate,
    "certificates": _op_certificates,
    "nr_dimension_sum": _op_nr_dimension_sum,
    "pooled_test": _op_pooled_test,
    "explicit_hyperplane_witness": _op_explicit_hyperplane_witness,
    "oblique_hyperplane_witness": _op_oblique_hyperplane_witness,
    "norm_retrieval_vectors": _op_norm_retrieval_vectors,
    "phase_retrieval_vectors": _op_phase_retrieval_vectors,
    "classify": _op_classify,
    "spark": _op_spark,
    "scalability": _op_scalability,
    "completion": _op_completion,
    "naimark_embed": _op_naimark_embed,
    "tail_check": _op_tail_check,
}


def run_entry(e: CorpusEntry) -> EntryResult:
    t0 = time.perf_counter()
    mismatches = []
    for op, expected in e.expectations.items():
        ok, got = OPERATIONS[op](e, expected)
        if not ok:
            mismatches.append((op, expected, got))
    return EntryResult(e.id, not mismatches, mismatches, time.perf_counter() - t0)


def run_corpus(pattern: str | None = None, path=None) -> CorpusReport:
    """Run every entry whose id matches the glob ``pattern`` (all when None)."""
    entries = load_corpus(path)
    if pattern:
        entries = [e for e in entries if fnmatch.fnmatch(e.id, pattern) or pattern in e.id]
    return CorpusReport([run_entry(e) for e in sorted(entries, key=lambda e: e.id)])
