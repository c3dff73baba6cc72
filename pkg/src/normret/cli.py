"""Command-line front end.

Exit codes: 0 completed, 1 usage or input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import constructions, frames, io, linalg, retrieval
from .corpus import CorpusConfigError, run_corpus
from .frames import FrameSpec
from .subspaces import SubspaceFamily
from .verdict import Status, replay_witness

RULE_TEXT = {
    "dimension-sum": "member dimensions sum below N",
    "rank-one-partition": "partition orthogonality of the generating vectors",
    "identity-certificate": "identity certificate",
    "pooled-basis": "pooled orthonormal bases fail norm retrieval",
    "counterexample-search": "counterexample search",
    "norm-counterexample-search": "norm-retrieval counterexample search",
    "search-exhausted": "no certificate, search found no witness",
    "complement-property": "complement property of the generating vectors",
    "complements-span": "member complements do not span",
    "complements-span-after-removal": "member complements do not span after removing members",
    "partition-orthogonality": "partition orthogonality",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_doc(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc})") from None


def _load(path: str, exact: bool):
    return io.parse_input(_read_doc(path), force_exact=exact)


def _family(obj) -> SubspaceFamily:
    return SubspaceFamily.lines(obj) if isinstance(obj, FrameSpec) else obj


def _params(a) -> retrieval.SearchParams:
    return retrieval.SearchParams(starts=a.starts, max_iter=a.max_iter, seed=a.seed)


def _tol(a) -> linalg.Tolerance:
    return linalg.DEFAULT_TOL if a.tol is None else linalg.Tolerance(a.tol, a.tol)


def _fmt(v) -> str:
    return json.dumps(io.encode(v))


def _verdict_text(title, v) -> list[str]:
    lines = [f"{title}: {v.status.value} via {RULE_TEXT.get(v.rule, v.rule)}"]
    if v.certificate is not None:
        cert = v.certificate if isinstance(v.certificate, str) else _fmt(v.certificate)
        lines.append(f"  certificate: {cert}")
    if v.witness is not None:
        w = v.witness
        lines.append(f"  witness x: {_fmt(w.x)}")
        lines.append(f"  witness y: {_fmt(w.y)}")
        lines.append(f"  squared norms: {_fmt(list(w.norms_sq()))}")
    search = v.diagnostics.get("search")
    if v.status is Status.PROBABLY_YES and search:
        lines.append(f"  search: {search['starts_used']} starts, best objective {search['best_objective']:.3e},"
                     f" seed {search['seed']}")
    return lines


def _emit(a, report: dict, text: list[str]):
    if a.json:
        print(io.dumps(report))
    else:
        print("\n".join(text))


def cmd_decide(a, which: str) -> int:
    fam = _family(_load(a.input, a.exact))
    fn = retrieval.decide_norm_retrieval_projections if which == "nr" else retrieval.decide_phase_retrieval_projections
    v = fn(fam, _params(a), _tol(a))
    title = "norm retrieval" if which == "nr" else "phase retrieval"
    _emit(a, io.verdict_to_json(v), _verdict_text(title, v))
    return 0


def cmd_analyze(a) -> int:
    obj = _load(a.input, a.exact)
    fam = _family(obj)
    params, tol = _params(a), _tol(a)
    report, text = {}, []
    if isinstance(obj, FrameSpec):
        flags = frames.classify(obj, tol)
        report["frame"] = flags.__dict__
        text.append(f"frame: N={obj.dim} M={obj.count} bounds=({flags.lower_bound:.6g}, {flags.upper_bound:.6g})"
                    f" tight={flags.tight} parseval={flags.parseval} spark={flags.spark}")
        sc = frames.scalability(obj)
        report["scalability"] = {"status": type(sc).__name__, **{k: io.encode(v) for k, v in sc.__dict__.items()}}
        text.append(f"scalability: {type(sc).__name__}")
    nr = retrieval.decide_norm_retrieval_projections(fam, params, tol)
    pr = retrieval.decide_phase_retrieval_projections(fam, params, tol)
    report["norm_retrieval"] = io.verdict_to_json(nr)
    report["phase_retrieval"] = io.verdict_to_json(pr)
    text += _verdict_text("norm retrieval", nr) + _verdict_text("phase retrieval", pr)
    _emit(a, report, text)
    return 0


def cmd_certify(a) -> int:
    fam = _family(_load(a.input, a.exact))
    cert = retrieval.identity_certificate(fam, _tol(a))
    report = {"identity_certificate": None if cert is None else io.encode(cert)}
    text = ["identity certificate: " + ("not in span" if cert is None else _fmt(cert))]
    if a.complement:
        comp = None if cert is None else retrieval.complement_identity_certificate(fam, cert)
        report["complement_certificate"] = None if comp is None else io.encode(comp)
        why = "no identity certificate" if cert is None else "coefficients sum to 1"
        text.append("complement certificate: " + (why if comp is None else _fmt(comp)))
    _emit(a, report, text)
    return 0


def cmd_scale_check(a) -> int:
    obj = _load(a.input, a.exact)
    if not isinstance(obj, FrameSpec):
        raise UsageError("scale-check needs a frame (a 'vectors' document)")
    res = frames.scalability(obj)
    name = type(res).__name__
    report = {"status": name, **{k: io.encode(v) for k, v in res.__dict__.items()}}
    if name == "Feasible":
        text = [f"Feasible c = {_fmt([round(float(c), 12) for c in res.c])}"]
    else:
        text = [f"Infeasible; separating functional y = {_fmt(res.y)}"]
    _emit(a, report, text)
    return 0


def cmd_naimark(a) -> int:
    obj = _load(a.input, a.exact)
    if not isinstance(obj, FrameSpec):
        raise UsageError("naimark needs a frame (a 'vectors' document)")
    if a.complete:
        g = constructions.bessel_to_parseval_completion(obj)
        doc = io.frame_to_json(g)
        _emit(a, doc, [io.dumps(doc)])
        return 0
    emb = constructions.naimark_embed(obj)
    report = {"ambient": emb.ambient, "projection": emb.projection, "basis": emb.basis}
    text = [f"embedding into R^{emb.ambient}, trace(P) = {np.trace(emb.projection):.12g}", "P =",
            np.array2string(emb.projection, precision=6, suppress_small=True)]
    _emit(a, report, text)
    return 0


def _parse_sets(text: str):
    return [[int(i) for i in part.split(",") if i.strip()] for part in text.split(";")]


def cmd_construct(a) -> int:
    params = {}
    name = a.recipe
    if name in ("three-codim-one", "partition-ln", "k-plus-one", "coordinate-multiplicity"):
        if a.dim is None:
            raise UsageError(f"{name} needs --dim")
        params["dim"] = a.dim
    if name == "partition-ln":
        if not a.sizes:
            raise UsageError("partition-ln needs --sizes")
        params["sizes"] = [int(s) for s in a.sizes.split(",")]
    if name == "k-plus-one":
        if a.k is None:
            raise UsageError("k-plus-one needs --k")
        params["k"] = a.k
    if name == "coordinate-multiplicity":
        if not a.sets:
            raise UsageError("coordinate-multiplicity needs --sets like '0,1;1,2;0,2'")
        params["sets"] = _parse_sets(a.sets)
    if name == "hyperplane-family":
        if not a.vectors:
            raise UsageError("hyperplane-family needs --vectors FILE")
        params["vectors"] = _load(a.vectors, a.exact)
    out = constructions.construct(name, **params)
    doc = io.frame_to_json(out) if isinstance(out, FrameSpec) else io.family_to_json(out)
    print(io.dumps(doc))
    return 0


def cmd_witness(a) -> int:
    doc = _read_doc(a.witness)
    w = io.witness_from_json(doc.get("witness", doc) if isinstance(doc, dict) else doc)
    if a.target:
        target = _load(a.target, a.exact)
    elif isinstance(doc, dict) and "target" in doc:
        target = io.parse_input(doc["target"], force_exact=a.exact)
    else:
        raise UsageError("witness: give a target file or embed a 'target' object")
    rep = replay_witness(w, target)
    report = {"ok": rep.ok, "measurement_dev": rep.measurement_dev, "gap": rep.gap, "reason": rep.reason}
    text = [f"replay {'ok' if rep.ok else 'FAILED: ' + rep.reason}: measurement deviation {rep.measurement_dev:.3e},"
            f" gap {rep.gap:.3e}"]
    _emit(a, report, text)
    return 0


def cmd_corpus(a) -> int:
    report = run_corpus(a.filter)
    doc = {"passed": report.passed,
           "entries": [{"id": r.id, "passed": r.passed,
                        "mismatches": [{"operation": op, "expected": exp, "computed": got}
                                       for op, exp, got in r.mismatches]} for r in report.results]}
    _emit(a, doc, [report.summary()])
    return 0 if report.passed else 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0, help="search seed (unsigned 64-bit)")
    common.add_argument("--tol", type=float, default=None, help="relative rank/orthogonality tolerance")
    common.add_argument("--starts", type=int, default=256, help="random search starts")
    common.add_argument("--max-iter", type=int, default=500, help="local refinement iterations per start")
    common.add_argument("--exact", action="store_true", help="force rational arithmetic; floats are rejected")

    p = _Parser(prog="normret", description="Frame, norm-retrieval and phase-retrieval analysis.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add(name, help, *args):
        sp = sub.add_parser(name, parents=[common], help=help)
        for arg in args:
            sp.add_argument(arg, help="JSON file, or - for standard input")
        return sp

    add("analyze", "classify a frame and decide both retrieval problems", "input")
    add("decide-nr", "decide norm retrieval", "input")
    add("decide-pr", "decide phase retrieval", "input")
    add("certify", "solve for an identity certificate", "input").add_argument(
        "--complement", action="store_true", help="also derive the complement certificate")
    add("scale-check", "nonnegative scalings making the frame Parseval", "input")
    add("naimark", "Naimark embedding of a Parseval frame", "input").add_argument(
        "--complete", action="store_true", help="complete to a Parseval frame of 2M-1 vectors instead")
    c = sub.add_parser("construct", parents=[common], help="emit a named construction")
    c.add_argument("recipe", choices=sorted(constructions.RECIPES))
    c.add_argument("--dim", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--sizes", help="comma-separated block sizes")
    c.add_argument("--sets", help="coordinate index sets, e.g. '0,1;1,2;0,2'")
    c.add_argument("--vectors", help="frame JSON of hyperplane normals")
    w = sub.add_parser("witness", parents=[common], help="replay a witness pair")
    w.add_argument("witness", help="witness JSON, or -")
    w.add_argument("target", nargs="?", help="frame or family JSON the witness refers to")
    cp = sub.add_parser("corpus", parents=[common], help="run the corpus of worked instances")
    cp.add_argument("action", nargs="?", choices=["run"], default="run")
    cp.add_argument("--filter", help="id glob or substring")
    return p


COMMANDS = {
    "analyze": cmd_analyze,
    "decide-nr": lambda a: cmd_decide(a, "nr"),
    "decide-pr": lambda a: cmd_decide(a, "pr"),
    "certify": cmd_certify,
    "scale-check": cmd_scale_check,
    "naimark": cmd_naimark,
    "construct": cmd_construct,
    "witness": cmd_witness,
    "corpus": cmd_corpus,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.verb](args)
    except (UsageError, io.FormatError, CorpusConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
