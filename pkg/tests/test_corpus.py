import json
from fractions import Fraction

import pytest

from normret import corpus
from normret.constructions import coordinate_hyperplane_witness
from normret.corpus import CorpusConfigError, load_corpus, run_corpus
from normret.retrieval import decide_norm_retrieval_projections, replays_identity
from normret.verdict import Status, replay_witness

ENTRIES = {e.id: e for e in load_corpus()}


def test_every_expectation_is_an_operation():
    for e in ENTRIES.values():
        assert e.expectations and set(e.expectations) <= set(corpus.OPERATIONS)
        assert e.source


@pytest.mark.parametrize("entry_id", sorted(ENTRIES))
def test_entry_passes(entry_id):
    report = run_corpus(entry_id)
    assert [r.id for r in report.results] == [entry_id]
    assert report.passed, report.summary()


def test_signed_sum_certificate_is_exact():
    v = decide_norm_retrieval_projections(ENTRIES["coordinate-planes-signed-sum"].family)
    assert v.status is Status.YES_EXACT
    assert list(v.certificate) == [1, 1, -1] and all(type(c) is Fraction for c in v.certificate)


@pytest.mark.parametrize("n, norms", [(3, (3, 4)), (4, (4, Fraction(9, 2)))])
def test_basis_hyperplane_witness_norms(n, norms):
    fam = ENTRIES[f"basis-hyperplanes-missing-one-dim{n}"].family
    assert decide_norm_retrieval_projections(fam).status is Status.NO_WITH_WITNESS
    w = coordinate_hyperplane_witness(n)
    rep = replay_witness(w, fam)
    assert rep.ok and rep.measurement_dev == 0 and w.norms_sq() == norms


def test_two_certificates_sums():
    fam = ENTRIES["coordinate-five-two-certificates"].family
    a, b = [1, 1, 1, 0, 0], [-1, 0, 0, 1, 1]
    assert replays_identity(fam, a) and replays_identity(fam, b)
    assert (sum(a), sum(b)) == (3, 1)


def test_pattern_filter():
    assert {r.id for r in run_corpus("mercedes-benz-*").results} == {"mercedes-benz-parseval", "mercedes-benz-tight"}
    assert run_corpus("no-such-entry").results == []


def test_report_summary_lists_mismatch(tmp_path):
    src = corpus._corpus_dir() / "orthogonal-triple.json"
    doc = json.loads(src.read_text())
    doc["expectations"]["decide_nr"]["status"] = "ProbablyYes"
    (tmp_path / "broken.json").write_text(json.dumps(doc))
    report = run_corpus(path=tmp_path)
    assert not report.passed
    text = report.summary()
    assert "FAIL  orthogonal-triple" in text and "decide_nr" in text and "0/1 entries passed" in text


def test_unknown_operation_names_entry(tmp_path):
    (tmp_path / "x.json").write_text(json.dumps({"id": "weird", "input": {"vectors": [[1]]},
                                                 "expectations": {"telepathy": True}}))
    with pytest.raises(CorpusConfigError, match="weird"):
        load_corpus(tmp_path)


def test_bad_input_names_entry(tmp_path):
    (tmp_path / "x.json").write_text(json.dumps({"id": "broken-input", "input": {"vectors": "nope"},
                                                 "expectations": {}}))
    with pytest.raises(CorpusConfigError, match="broken-input"):
        load_corpus(tmp_path)


def test_unknown_transform(tmp_path):
    (tmp_path / "x.json").write_text(json.dumps({"id": "t", "input": {"vectors": [[1]]}, "transform": "twist",
                                                 "expectations": {"decide_nr": {"status": "YesExact"}}}))
    with pytest.raises(CorpusConfigError, match="twist"):
        run_corpus(path=tmp_path)


def test_frame_operation_on_family_is_config_error(tmp_path):
    doc = json.loads((corpus._corpus_dir() / "dimension-deficit.json").read_text())
    doc["expectations"] = {"spark": 2}
    (tmp_path / "x.json").write_text(json.dumps(doc))
    with pytest.raises(CorpusConfigError, match="frame"):
        run_corpus(path=tmp_path)
