from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import orthogonal, random_family, random_subspace
from normret import constructions
from normret.linalg import to_float
from normret.subspaces import (Subspace, SubspaceFamily, complement, diagonal_basis, pooled_basis,
                               projection_of, sum_and_intersection)

E3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
SIGNED = SubspaceFamily.from_spans([[E3[0], E3[1]], [E3[1], E3[2]], [E3[1]]])


def same_span(a: Subspace, b: Subspace) -> bool:
    if a.dim != b.dim:
        return False
    pa, pb = to_float(a.projection), to_float(b.projection)
    return np.allclose(pa, pb, atol=1e-10)


def test_subspace_validation():
    with pytest.raises(ValueError):
        Subspace(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        Subspace.span([[1, 0], [1, 0, 0]])
    with pytest.raises(ValueError):
        SubspaceFamily((Subspace.span([[1, 0]]), Subspace.span([[1, 0, 0]])))
    w = Subspace.span([[1, 1, 0], [2, 2, 0]])
    assert w.dim == 1 and w.exact and not w.unit


def test_projection_examples():
    assert projection_of(Subspace.span([[1, 0]])).tolist() == [[1, 0], [0, 0]]
    half = Fraction(1, 2)
    assert projection_of(Subspace.span([[1, 1]])).tolist() == [[half, half], [half, half]]
    assert not projection_of(Subspace.trivial(3)).any()
    assert projection_of(Subspace.trivial(3, exact=False)).dtype == float


def test_complement_examples():
    c = complement(Subspace.span([E3[0], E3[1]]))
    assert c.dim == 1 and same_span(c, Subspace.span([E3[2]]))
    assert complement(Subspace.full(3)).dim == 0
    assert same_span(complement(Subspace.span([[1, 1]])), Subspace.span([[1, -1]]))
    assert complement(Subspace.trivial(2)).dim == 2


def test_sum_and_intersection_examples():
    s, i = sum_and_intersection(Subspace.span([E3[0]]), Subspace.span([E3[1]]))
    assert same_span(s, Subspace.span([E3[0], E3[1]])) and i.dim == 0
    s, i = sum_and_intersection(Subspace.span([E3[0], E3[1]]), Subspace.span([E3[1], E3[2]]))
    assert s.dim == 3 and same_span(i, Subspace.span([E3[1]]))
    w = Subspace.span([[1, 2, 3], [0, 1, 1]])
    s, i = sum_and_intersection(w, w)
    assert same_span(s, w) and same_span(i, w)
    with pytest.raises(ValueError):
        sum_and_intersection(Subspace.span([[1, 0]]), w)


def test_pooled_basis_examples():
    f = pooled_basis(SIGNED)
    assert f.count == 5
    assert [tuple(f.vectors[:, j]) for j in range(5)] == [(1, 0, 0), (0, 1, 0), (0, 1, 0), (0, 0, 1), (0, 1, 0)]
    assert f.meta["origins"] == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)]
    full = pooled_basis(SubspaceFamily((Subspace.full(3),)))
    assert full.vectors.tolist() == E3
    three = pooled_basis(constructions.construct("three-codim-one", dim=3))
    assert three.count == 6
    four = pooled_basis(constructions.construct("three-codim-one", dim=4))
    assert four.count == 9
    with pytest.raises(ValueError):
        pooled_basis(SubspaceFamily((Subspace.trivial(2),)))


def test_diagonal_basis_same_subspace():
    w = Subspace.span([E3[0], E3[1]])
    d = diagonal_basis(w)
    assert d.exact and same_span(w, d)
    assert tuple(d.basis[:, 0]) == (1, 1, 0)


def test_family_transform_and_append(rng):
    q = orthogonal(rng, 3)
    moved = SIGNED.transform(q)
    for a, b in zip(SIGNED, moved):
        assert np.allclose(q @ to_float(a.projection) @ q.T, b.projection)
    assert len(SIGNED.append(Subspace.full(3))) == 4
    assert SIGNED.dims() == [2, 2, 1]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.booleans())
def test_projection_idempotent_symmetric(seed, n, exact):
    rng = np.random.default_rng(seed)
    w = random_subspace(rng, n, int(rng.integers(0, n + 1)), exact=exact)
    p = w.projection
    if exact:
        assert ((p @ p) == p).all() and (p.T == p).all()
    else:
        assert np.allclose(p @ p, p, atol=1e-10) and np.allclose(p, p.T, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.booleans())
def test_double_complement(seed, n, exact):
    rng = np.random.default_rng(seed)
    w = random_subspace(rng, n, int(rng.integers(0, n + 1)), exact=exact)
    c = complement(w)
    assert c.dim + w.dim == n
    assert np.allclose(to_float(c.projection), np.eye(n) - to_float(w.projection), atol=1e-10)
    cc = complement(c)
    stacked = np.column_stack([to_float(w.basis), to_float(cc.basis)]) if w.dim else np.zeros((n, 0))
    assert cc.dim == w.dim
    if w.dim:
        assert np.linalg.matrix_rank(stacked, tol=1e-9) == w.dim


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.booleans())
def test_trace_equals_dimension(seed, exact):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    fam = random_family(rng, n, int(rng.integers(1, 6)), exact=exact)
    total = sum(np.trace(p) for p in fam.projections)
    if exact:
        assert total == sum(fam.dims())
    else:
        assert abs(total - sum(fam.dims())) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_dimension_formula(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    a = random_subspace(rng, n, int(rng.integers(0, n + 1)), exact=True)
    b = random_subspace(rng, n, int(rng.integers(0, n + 1)), exact=True)
    s, i = sum_and_intersection(a, b)
    assert s.dim + i.dim == a.dim + b.dim
