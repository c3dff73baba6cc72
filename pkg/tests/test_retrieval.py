from fractions import Fraction

import numpy as np
import pytest

from gen import orthogonal, random_family, random_frame, random_subspace
from normret import constructions, corpus, frames
from normret.frames import FrameSpec
from normret.retrieval import (SearchParams, complement_identity_certificate, decide_norm_retrieval_projections,
                               decide_phase_retrieval_projections, nonspanning_phase_witness, identity_certificate,
                               nr_counterexample_search, nr_dimension_sum_test, nr_spanning_check,
                               perp_family, pooled_necessary_nr_test, pr_counterexample_search,
                               pr_spanning_check, replays_identity)
from normret.subspaces import Subspace, SubspaceFamily
from normret.verdict import Status, WitnessPair, replay_witness

E3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
SIGNED = SubspaceFamily.from_spans([[E3[0], E3[1]], [E3[1], E3[2]], [E3[1]]])
TWO_HYPERPLANES = constructions.hyperplane_family([E3[0], E3[1]], exact=True)
THREE = constructions.construct("three-codim-one", dim=3)
TWO_BASIS = constructions.construct("two-basis-pr")
FAST = SearchParams(starts=32, max_iter=200)


def hyperplanes_of_basis(n, count):
    return constructions.hyperplane_family([[1 if j == i else 0 for j in range(n)] for i in range(count)], exact=True)


def test_search_params_validation():
    for bad in (dict(starts=0), dict(max_iter=0), dict(seed=-1), dict(seed=1 << 64),
                dict(objective_floor=0.0), dict(witness_margin=-1.0)):
        with pytest.raises(ValueError):
            SearchParams(**bad)


def test_dimension_sum_examples():
    x = nr_dimension_sum_test(SubspaceFamily.from_spans([[[1, 0]]]))
    assert x is not None and x[0] == 0 and x[1] != 0
    assert nr_dimension_sum_test(SIGNED) is None
    normal = nr_dimension_sum_test(hyperplanes_of_basis(4, 1))
    assert list(normal[1:]) == [0, 0, 0] and normal[0] != 0


def test_identity_certificate_examples():
    a = identity_certificate(SIGNED)
    assert list(a) == [1, 1, -1] and all(isinstance(c, Fraction) for c in a)
    assert identity_certificate(THREE) is None
    lines = SubspaceFamily.from_spans([[r] for r in np.eye(5, dtype=int).tolist()])
    assert list(identity_certificate(lines)) == [1] * 5


def test_complement_certificate_examples():
    for n in (2, 3, 5):
        lines = SubspaceFamily.from_spans([[r] for r in np.eye(n, dtype=int).tolist()])
        b = complement_identity_certificate(lines, [1] * n)
        assert list(b) == [Fraction(1, n - 1)] * n
    coord5 = SubspaceFamily.from_spans([[E3[0]], [E3[1]], [E3[2]], [E3[0], E3[1]], [E3[0], E3[2]]])
    assert complement_identity_certificate(coord5, [1, 1, 1, 0, 0]) is not None
    assert complement_identity_certificate(coord5, [-1, 0, 0, 1, 1]) is None
    with pytest.raises(ValueError):
        complement_identity_certificate(coord5, [1, 0, 0, 0, 0])


def test_pooled_test_examples():
    assert pooled_necessary_nr_test(SIGNED) is None
    w = pooled_necessary_nr_test(TWO_HYPERPLANES)
    assert w is not None and replay_witness(w, TWO_HYPERPLANES).ok
    assert pooled_necessary_nr_test(SubspaceFamily((Subspace.full(4),))) is None


def test_nr_spanning_check_examples():
    assert nr_spanning_check(SIGNED, [1, 1, 1])
    assert not nr_spanning_check(TWO_HYPERPLANES, [1, 1, 1])
    fam = SubspaceFamily((Subspace.full(3), Subspace.span([E3[0]])))
    rng = np.random.default_rng(3)
    assert all(nr_spanning_check(fam, rng.standard_normal(3)) for _ in range(20))
    with pytest.raises(ValueError):
        nr_spanning_check(SIGNED, [0, 0, 0])


def test_pr_spanning_check_examples(rng):
    assert all(pr_spanning_check(TWO_BASIS, rng.standard_normal(3)) for _ in range(50))
    assert pr_spanning_check(TWO_BASIS, [0, 0, 1])
    assert not pr_spanning_check(TWO_HYPERPLANES, [0, 0, 1])
    assert not pr_spanning_check(SubspaceFamily((Subspace.full(3),)), [1, 2, 3])
    with pytest.raises(ValueError):
        pr_spanning_check(SIGNED, [0, 0, 0])


def test_nr_search_examples():
    res = nr_counterexample_search(TWO_HYPERPLANES)
    assert res.found and replay_witness(res.witness, TWO_HYPERPLANES).ok
    # the hand-built pair x = (1,1,1), y = sqrt(2)(1,1,0) is accepted by the verifier
    hand = WitnessPair(np.array([1, 1, 1]), np.array([1, 1, 0]), y_scale_sq=2)
    rep = replay_witness(hand, TWO_HYPERPLANES)
    assert rep.ok and rep.measurement_dev == 0 and hand.norms_sq() == (3, 4)
    assert not nr_counterexample_search(SIGNED).found
    pair = SubspaceFamily.lines(FrameSpec.from_vectors([[1, 0], [1, 1]]))
    assert nr_counterexample_search(pair).found


def test_pr_search_examples():
    onb = SubspaceFamily.lines(FrameSpec.from_vectors([[1, 0], [0, 1]]))
    res = pr_counterexample_search(onb)
    assert res.found and replay_witness(res.witness, onb).ok
    assert not pr_counterexample_search(TWO_BASIS, FAST).found
    comp = perp_family(TWO_BASIS)
    res = pr_counterexample_search(comp)
    assert res.found and replay_witness(res.witness, comp).ok


def test_decide_nr_examples():
    v = decide_norm_retrieval_projections(SIGNED)
    assert (v.status, v.rule, list(v.certificate)) == (Status.YES_EXACT, "identity-certificate", [1, 1, -1])
    v = decide_norm_retrieval_projections(THREE)
    assert (v.status, v.rule) == (Status.PROBABLY_YES, "search-exhausted")
    assert {"starts_used", "iterations", "best_objective", "seed"} <= set(v.diagnostics["search"])
    fam = hyperplanes_of_basis(4, 3)
    v = decide_norm_retrieval_projections(fam)
    assert v.status is Status.NO_WITH_WITNESS and v.rule == "pooled-basis"
    assert v.diagnostics["replay"]["ok"]
    w = constructions.coordinate_hyperplane_witness(4)
    assert w.norms_sq() == (4, Fraction(9, 2)) and replay_witness(w, fam).ok


def test_decide_pr_examples(rng):
    from gen import full_spark_frame
    f = full_spark_frame(rng, 3, 5)
    v = decide_phase_retrieval_projections(SubspaceFamily.lines(f))
    assert (v.status, v.rule) == (Status.YES_EXACT, "complement-property")
    v = decide_phase_retrieval_projections(TWO_BASIS, FAST)
    assert v.status is Status.PROBABLY_YES
    v = decide_phase_retrieval_projections(SIGNED)
    assert (v.status, v.rule) == (Status.NO_WITH_WITNESS, "complements-span")
    assert v.witness.exact and replay_witness(v.witness, SIGNED).measurement_dev == 0


def test_perp_family_examples():
    lines = SubspaceFamily.lines(FrameSpec.from_vectors(E3))
    hyp = perp_family(lines)
    assert hyp.dims() == [2, 2, 2]
    back = perp_family(hyp)
    for a, b in zip(lines, back):
        assert (a.projection == b.projection).all()
    for a, b in zip(TWO_BASIS, perp_family(perp_family(TWO_BASIS))):
        assert np.allclose(a.projection, b.projection, atol=1e-12)


def test_every_verdict_replays(rng):
    for _ in range(20):
        n = int(rng.integers(2, 4))
        fam = random_family(rng, n, [int(k) for k in rng.integers(1, n, size=int(rng.integers(1, 4)))])
        for decide in (decide_norm_retrieval_projections, decide_phase_retrieval_projections):
            v = decide(fam, FAST)
            if v.status is Status.NO_WITH_WITNESS:
                assert replay_witness(v.witness, fam).ok
            if v.status is Status.YES_EXACT and v.rule == "identity-certificate":
                assert replays_identity(fam, v.certificate)


def test_monotone_under_appending(rng):
    bases = [SIGNED, hyperplanes_of_basis(3, 3), constructions.construct("k-plus-one", dim=4, k=2),
             constructions.construct("partition-ln", sizes=[2, 2, 2], dim=3)]
    for fam in bases:
        assert decide_norm_retrieval_projections(fam).status is Status.YES_EXACT
        for _ in range(5):
            extra = random_subspace(rng, fam.dim, int(rng.integers(0, fam.dim + 1)))
            v = decide_norm_retrieval_projections(fam.as_float().append(extra), FAST)
            assert v.status is not Status.NO_WITH_WITNESS


def test_rank_one_consistency(rng):
    for _ in range(100):
        n = int(rng.integers(2, 5))
        f = random_frame(rng, n, int(rng.integers(n, 2 * n + 1)))
        if rng.random() < 0.3:
            f = FrameSpec(orthogonal(rng, n) * rng.uniform(0.5, 2, size=n))
        expected = frames.norm_retrieval_vectors(f).status
        assert decide_norm_retrieval_projections(SubspaceFamily.lines(f)).status is expected


def test_unitary_invariance_over_corpus(rng):
    q = orthogonal(rng, 3)
    for entry in corpus.load_corpus():
        fam = entry.family
        if fam.dim != 3:
            continue
        moved = fam.transform(q)
        for decide in (decide_norm_retrieval_projections, decide_phase_retrieval_projections):
            a, b = decide(fam, FAST), decide(moved, FAST)
            assert (a.status, a.rule) == (b.status, b.rule), (entry.id, decide.__name__)


def test_nonspanning_point_implies_phase_search_success(rng):
    fams = [TWO_HYPERPLANES, perp_family(TWO_BASIS), SIGNED]
    for _ in range(10):
        fams.append(random_family(rng, 3, [1, 2, 1]))
    for fam in fams:
        samples = [rng.standard_normal(3) for _ in range(200)]
        bad = [x for x in samples if not pr_spanning_check(fam, x)]
        if bad:
            w = nonspanning_phase_witness(fam, bad[0])
            assert w is not None and replay_witness(w, fam).ok
            assert pr_counterexample_search(fam, SearchParams(starts=64), extra_starts=bad[:1]).found


def test_search_determinism():
    fam = perp_family(TWO_BASIS)
    for search in (nr_counterexample_search, pr_counterexample_search):
        a, b = search(fam, SearchParams(seed=7)), search(fam, SearchParams(seed=7))
        assert a.found == b.found and a.diagnostics == b.diagnostics
        assert np.array_equal(a.witness.x, b.witness.x) and np.array_equal(a.witness.y, b.witness.y)
    a = decide_norm_retrieval_projections(THREE, SearchParams(starts=64, seed=11))
    b = decide_norm_retrieval_projections(THREE, SearchParams(starts=64, seed=11))
    assert a.diagnostics == b.diagnostics


def test_complement_family_verdicts_never_conflict(rng):
    fams = [TWO_BASIS, constructions.construct("cone-example")]
    fams[1] = SubspaceFamily.lines(fams[1])
    for _ in range(5):
        fams.append(random_family(rng, 3, [2, 2, 2, 1, 1]))
    for fam in fams:
        if not decide_phase_retrieval_projections(fam, FAST).yes:
            continue
        comp = perp_family(fam)
        nr = decide_norm_retrieval_projections(comp, FAST).status
        pr = decide_phase_retrieval_projections(comp, FAST).status
        assert {nr, pr} != {Status.YES_EXACT, Status.NO_WITH_WITNESS}


def test_defect_descent_finds_null_set_failures(rng, monkeypatch):
    import normret.retrieval as engine
    monkeypatch.setattr(engine, "_subset_starts", lambda fam: [])
    comp = perp_family(TWO_BASIS)
    for _ in range(5):
        res = nr_counterexample_search(comp.transform(orthogonal(rng, 3)), FAST)
        assert res.found and res.diagnostics["phase"] == "defect-descent"


def test_generic_plane_triples_fail(rng):
    # three generic planes of R^3 fail; the specific three-codim-one family does not
    for _ in range(10):
        fam = random_family(rng, 3, [2, 2, 2])
        v = decide_norm_retrieval_projections(fam, FAST)
        assert v.status is Status.NO_WITH_WITNESS
        x, y = v.witness.x, v.witness.y
        for w in fam:
            q, _ = np.linalg.qr(w.basis)
            assert abs(np.sum((q.T @ x) ** 2) - np.sum((q.T @ y) ** 2)) <= 1e-9 * max(x @ x, y @ y)
        assert abs(x @ x - y @ y) >= 1e-6 * max(x @ x, y @ y)
