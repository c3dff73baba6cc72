import math
from fractions import Fraction

import numpy as np
import pytest

from gen import orthogonal, parseval_frame, random_frame
from normret import frames
from normret.constructions import (bessel_to_parseval_completion, construct, coordinate_hyperplane_witness,
                                   equimodular_vector, hyperplane_family, independent_hyperplane_failure_witness,
                                   naimark_embed, naimark_nr_tail_check, sign_flip_partners)
from normret.frames import FrameSpec
from normret.linalg import to_float
from normret.retrieval import decide_norm_retrieval_projections, replays_identity
from normret.subspaces import SubspaceFamily
from normret.verdict import Status, replay_witness

R3 = math.sqrt(3) / 2
MB_PARSEVAL = FrameSpec(math.sqrt(2 / 3) * np.array([[0.0, -R3, R3], [1.0, -0.5, -0.5]]))


def parseval_dev(f):
    s = to_float(frames.frame_operator(f))
    return np.linalg.norm(s - np.eye(f.dim)) / np.linalg.norm(np.eye(f.dim))


def test_naimark_examples():
    emb = naimark_embed(FrameSpec(np.eye(2)))
    assert emb.ambient == 2 and np.allclose(emb.projection, np.eye(2))
    emb = naimark_embed(MB_PARSEVAL)
    p = emb.projection
    assert emb.ambient == 3 and np.linalg.matrix_rank(p) == 2
    assert np.allclose(p @ p, p) and np.isclose(np.trace(p), 2)
    assert np.allclose(emb.image_frame.vectors, MB_PARSEVAL.vectors, atol=1e-12)
    iso = orthogonal(np.random.default_rng(1), 3)[:2]
    assert np.isclose(np.trace(naimark_embed(FrameSpec(iso)).projection), 2)
    with pytest.raises(ValueError, match="not Parseval"):
        naimark_embed(FrameSpec.from_vectors([[1, 0], [0, 1], [1, 1]]))


def test_naimark_coordinates_preserve_norm(rng):
    for _ in range(20):
        n = int(rng.integers(1, 5))
        emb = naimark_embed(parseval_frame(rng, n, int(rng.integers(n, 9))))
        x = rng.standard_normal(n)
        assert np.isclose(np.linalg.norm(emb.coordinates(x)), np.linalg.norm(x))
        assert np.isclose(np.trace(emb.projection), n)


def test_completion_examples():
    g = bessel_to_parseval_completion(FrameSpec.from_vectors([[1, 0], [0, 1], [1, 1]]))
    assert g.count == 5 and parseval_dev(g) <= 1e-12
    assert np.isclose(g.meta["scale"], 1 / math.sqrt(3))
    added = g.vectors[:, 3]
    assert np.allclose(np.abs(added), math.sqrt(2 / 3) / math.sqrt(2))
    assert added[0] * added[1] < 0 and not g.vectors[:, 4].any()
    g = bessel_to_parseval_completion(FrameSpec(np.eye(3)))
    assert g.count == 5 and not to_float(g.vectors[:, 3:]).any()
    g = bessel_to_parseval_completion(FrameSpec.from_vectors([[1]]))
    assert g.count == 1 and parseval_dev(g) == 0
    with pytest.raises(ValueError):
        bessel_to_parseval_completion(FrameSpec.from_vectors([[1, 0, 0], [0, 1, 0]]))


def test_completion_random(rng):
    for _ in range(100):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(n, 11))
        g = bessel_to_parseval_completion(random_frame(rng, n, m))
        assert g.count == 2 * m - 1 and parseval_dev(g) <= 1e-9
        assert frames.classify(g).parseval


def test_tail_check_examples(rng):
    onb = FrameSpec(np.eye(3))
    for _ in range(10):
        x = rng.standard_normal(3)
        assert all(naimark_nr_tail_check(onb, x, y) for y in sign_flip_partners(onb, x))
    mb = FrameSpec(np.array([[0.0, -R3, R3], [1.0, -0.5, -0.5]]))
    checked = 0
    while checked < 1000:
        x = rng.standard_normal(2)
        for y in sign_flip_partners(mb, x):
            assert naimark_nr_tail_check(mb, x, y)
            checked += 1
    oblique = FrameSpec.from_vectors([[1, 0], [1, 1]])
    assert not all(naimark_nr_tail_check(oblique, x, y) for x in rng.standard_normal((10, 2))
                   for y in sign_flip_partners(oblique, x))


def test_equimodular_examples():
    phi, c = equimodular_vector(FrameSpec(np.eye(2)))
    assert np.allclose(phi / phi[0], [1, 1]) and np.isclose(c, 1)
    phi, c = equimodular_vector(FrameSpec(np.eye(3)))
    assert np.allclose(phi, [1, 1, 1]) and np.isclose(c, 1)
    f = FrameSpec.from_vectors([[1, 0], [1, 1]])
    phi, c = equimodular_vector(f)
    assert c > 0 and np.isclose(abs(phi[0]), abs(phi[0] + phi[1])) and np.isclose(abs(phi[0]), c)
    # the other admissible root gives the hand solution (1, -2)
    assert abs(1 * 1 + (-2) * 1) == abs(1) == 1
    with pytest.raises(ValueError):
        equimodular_vector(FrameSpec.from_vectors([[1, 0], [2, 0]]))
    with pytest.raises(ValueError):
        equimodular_vector(FrameSpec.from_vectors([[1, 0]]))


def test_equimodular_random(rng):
    for _ in range(100):
        n = int(rng.integers(1, 9))
        f = random_frame(rng, n, n)
        phi, c = equimodular_vector(f)
        mods = np.abs(f.vectors.T @ phi)
        assert c > 0 and np.max(np.abs(mods - c)) <= 1e-9 * c


def test_independent_hyperplane_witness_examples():
    w = independent_hyperplane_failure_witness([[1, 0, 0], [0, 1, 0]])
    nx, ny = w.norms_sq()
    assert np.isclose(nx, 1) and ny > 1 + 1e-6
    w = independent_hyperplane_failure_witness([[1, 0]])
    assert np.allclose(np.abs(w.x), [0, 1])
    assert np.isclose(w.norms_sq()[0], 1) and w.norms_sq()[1] > 1
    with pytest.raises(ValueError):
        independent_hyperplane_failure_witness([[1, 0, 0], [2, 0, 0]])
    with pytest.raises(ValueError):
        independent_hyperplane_failure_witness([[1, 1, 0], [0, 1, 0]])


def test_independent_hyperplane_witness_random(rng):
    for _ in range(100):
        n = int(rng.integers(2, 7))
        v = rng.standard_normal((n, n - 1))
        v /= np.linalg.norm(v, axis=0)
        f = FrameSpec(v)
        w = independent_hyperplane_failure_witness(f)
        assert replay_witness(w, hyperplane_family(f)).ok


def test_coordinate_hyperplane_witness():
    for n in range(3, 8):
        w = coordinate_hyperplane_witness(n)
        assert w.norms_sq() == (n, Fraction((n - 1) ** 2, n - 2))
        rep = replay_witness(w, hyperplane_family(np.eye(n, dtype=int)[: n - 1].tolist(), exact=True))
        assert rep.ok and rep.measurement_dev == 0
    with pytest.raises(ValueError):
        coordinate_hyperplane_witness(2)
    with pytest.raises(ValueError):
        coordinate_hyperplane_witness(4, [3])


def test_recipe_examples():
    three = construct("three-codim-one", dim=3)
    assert three.dims() == [2, 2, 2]
    assert decide_norm_retrieval_projections(three).status is Status.PROBABLY_YES
    pl = construct("partition-ln", sizes=[2, 2, 2], dim=3)
    assert pl.dims() == [2, 2, 2] and pl.meta["certificate"] == [Fraction(1, 2)] * 3
    kp = construct("k-plus-one", dim=4, k=2)
    assert kp.dims() == [2, 3, 3] and kp.meta["certificate"] == [-1, 1, 1]
    tb = construct("two-basis-pr")
    rot = np.array(tb.meta["rotation"])
    assert frames.spark(FrameSpec(np.column_stack([np.eye(3), rot]))) == 4
    cone = construct("cone-example")
    assert frames.spark(cone) == 4 and min(to_float(cone.vectors)[2]) >= 0.9
    cm = construct("coordinate-multiplicity", sets=[[0, 1], [1, 2], [0, 2]], dim=3)
    assert cm.meta["multiplicity"] == 2


def test_recipe_certificates_replay():
    fams = [construct("partition-ln", sizes=s, dim=d) for s, d in (([2, 2, 2], 3), ([3, 1, 2, 2], 4), ([1], 1))]
    fams += [construct("k-plus-one", dim=d, k=k) for d in range(1, 6) for k in range(1, d + 1)]
    fams += [construct("coordinate-multiplicity", sets=s, dim=d)
             for s, d in (([[0, 1], [1, 2], [0, 2]], 3), ([[0], [1], [2], [3]], 4), ([[0, 1, 2], [0, 1, 2]], 3))]
    for fam in fams:
        assert replays_identity(fam, fam.meta["certificate"]), fam.meta


def test_full_basis_hyperplanes_certificate():
    # in R^2 the hyperplanes are lines and the rank-one rule fires first
    assert decide_norm_retrieval_projections(hyperplane_family([[1, 0], [0, 1]])).status is Status.YES_EXACT
    for n in range(3, 7):
        fam = hyperplane_family(np.eye(n, dtype=int).tolist(), exact=True)
        v = decide_norm_retrieval_projections(fam)
        assert v.status is Status.YES_EXACT and list(v.certificate) == [Fraction(1, n - 1)] * n


def test_recipe_parameter_errors():
    with pytest.raises(ValueError, match="multiple"):
        construct("partition-ln", sizes=[2, 2], dim=3)
    with pytest.raises(ValueError, match="K"):
        construct("k-plus-one", dim=3, k=4)
    with pytest.raises(ValueError, match="uniform"):
        construct("coordinate-multiplicity", sets=[[0, 1], [1]], dim=2)
    with pytest.raises(ValueError, match="unknown recipe"):
        construct("no-such-recipe")
    with pytest.raises(ValueError, match="bad parameters"):
        construct("two-basis-pr", dim=3)
    with pytest.raises(ValueError):
        construct("three-codim-one", dim=1)


def test_hyperplane_recipe_matches_helper():
    fam = construct("hyperplane-family", vectors=[[1, 0, 0], [0, 1, 1]])
    assert isinstance(fam, SubspaceFamily) and fam.dims() == [2, 2]
