"""Subspaces stored by orthogonal bases, and families of them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .frames import FrameSpec
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, is_exact, to_float

__all__ = [
    "Subspace",
    "SubspaceFamily",
    "projection_of",
    "complement",
    "sum_and_intersection",
    "pooled_basis",
    "diagonal_basis",
]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of ``R^N`` held by an orthogonal basis (columns of ``basis``).

    Float bases are orthonormal.  Exact bases are orthogonal but generally not
    unit length (``unit`` is False); nothing downstream depends on unit length.
    Use :meth:`span` to build one from an arbitrary spanning set.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = as_matrix(self.basis) if np.asarray(self.basis).size else self.basis
        b = np.asarray(b)
        if b.ndim != 2 or b.shape[0] < 1:
            raise ValueError(f"basis must be an N x k matrix with N >= 1, got shape {b.shape}")
        if b.shape[1] > b.shape[0]:
            raise ValueError("a subspace basis has at most N columns")
        g = b.T @ b
        if is_exact(b):
            off = any(g[i, j] != 0 for i in range(g.shape[0]) for j in range(g.shape[1]) if i != j)
            if off or any(g[i, i] == 0 for i in range(g.shape[0])):
                raise ValueError("exact basis columns must be nonzero and mutually orthogonal")
        elif b.shape[1]:
            if np.max(np.abs(g - np.eye(g.shape[0]))) > 1e-9:
                raise ValueError("float basis columns must be orthonormal; use Subspace.span")
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors, dim: int | None = None, exact: bool | None = None,
             tol: Tolerance = DEFAULT_TOL) -> Subspace:
        """Subspace spanned by a sequence of vectors (each of length ``N``)."""
        vectors = list(vectors)
        if not vectors:
            if dim is None:
                raise ValueError("the ambient dimension is needed for an empty spanning set")
            return cls.trivial(dim, exact=bool(exact) if exact is not None else True)
        rows = as_matrix(vectors, exact=exact)
        if dim is not None and rows.shape[1] != dim:
            raise ValueError(f"vectors have length {rows.shape[1]}, expected {dim}")
        q, _ = linalg.orthonormalize(rows.T, tol)
        return cls(q)

    @classmethod
    def from_columns(cls, cols, tol: Tolerance = DEFAULT_TOL) -> Subspace:
        cols = as_matrix(cols)
        if cols.shape[1] == 0:
            return cls.trivial(cols.shape[0], exact=is_exact(cols))
        q, _ = linalg.orthonormalize(cols, tol)
        return cls(q)

    @classmethod
    def trivial(cls, dim: int, exact: bool = True) -> Subspace:
        return cls(linalg._zeros((dim, 0), exact))

    @classmethod
    def full(cls, dim: int, exact: bool = True) -> Subspace:
        return cls(linalg._identity(dim, exact))

    @property
    def dim_ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def exact(self) -> bool:
        return is_exact(self.basis)

    @property
    def unit(self) -> bool:
        return not self.exact

    @cached_property
    def projection(self) -> np.ndarray:
        return projection_of(self)

    def vectors(self) -> list[np.ndarray]:
        return [self.basis[:, j] for j in range(self.dim)]


@dataclass(frozen=True, eq=False)
class SubspaceFamily:
    members: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ValueError("a subspace family needs at least one member")
        dims = {w.dim_ambient for w in members}
        if len(dims) != 1:
            raise ValueError(f"members live in different ambient dimensions {sorted(dims)}")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_spans(cls, spans, dim: int | None = None, exact: bool | None = None,
                   meta=None) -> SubspaceFamily:
        """Family from a list of spanning sets, one per member."""
        spans = [list(s) for s in spans]
        if dim is None:
            lens = {len(v) for s in spans for v in s}
            if len(lens) != 1:
                raise ValueError("cannot infer one ambient dimension from the spanning sets")
            dim = lens.pop()
        if exact is None:
            probe = [v for s in spans for v in s]
            exact = linalg.is_exact(as_matrix(probe)) if probe else True
        return cls(tuple(Subspace.span(s, dim=dim, exact=exact) for s in spans), dict(meta or {}))

    @classmethod
    def lines(cls, f: FrameSpec, meta=None) -> SubspaceFamily:
        """Rank-one family ``{span phi_i}`` generated by a frame."""
        return cls(tuple(Subspace.from_columns(f.vectors[:, [i]]) for i in range(f.count)), dict(meta or {}))

    @property
    def dim(self) -> int:
        return self.members[0].dim_ambient

    @property
    def exact(self) -> bool:
        return all(w.exact for w in self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def dims(self) -> list[int]:
        return [w.dim for w in self.members]

    @cached_property
    def projections(self) -> list[np.ndarray]:
        return [w.projection for w in self.members]

    @cached_property
    def float_projections(self) -> np.ndarray:
        """Stack of float projections with shape ``(M, N, N)``."""
        return np.stack([to_float(p) for p in self.projections])

    def as_float(self) -> SubspaceFamily:
        return SubspaceFamily(tuple(Subspace.from_columns(to_float(w.basis)) for w in self), dict(self.meta))

    def transform(self, q) -> SubspaceFamily:
        """Image of every member under an invertible map ``q``.

        A float ``q`` applied to an exact family gives a float family.
        """
        q = as_matrix(q)
        exact = self.exact and is_exact(q)
        conv = (lambda m: m) if exact else to_float
        return SubspaceFamily(tuple(Subspace.from_columns(conv(q) @ conv(w.basis)) for w in self), dict(self.meta))

    def append(self, *extra: Subspace) -> SubspaceFamily:
        return SubspaceFamily(self.members + tuple(extra), dict(self.meta))


def projection_of(w: Subspace) -> np.ndarray:
    """Orthogonal projection ``B (B^T B)^-1 B^T`` onto ``w``.

    Exact bases are orthogonal, so this is ``sum_j b_j b_j^T / (b_j . b_j)``.
    """
    n = w.dim_ambient
    b = w.basis
    if w.dim == 0:
        return linalg._zeros((n, n), w.exact)
    if w.exact:
        p = linalg._zeros((n, n), True)
        for j in range(w.dim):
            c = b[:, j]
            p = p + np.outer(c, c) / np.dot(c, c)
        return p
    return b @ b.T


def complement(w: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Orthogonal complement ``w^⊥``."""
    if w.dim == 0:
        return Subspace.full(w.dim_ambient, w.exact)
    k = linalg.nullspace(w.basis.T, tol)
    return Subspace.from_columns(k, tol)


def sum_and_intersection(a: Subspace, b: Subspace, tol: Tolerance = DEFAULT_TOL) -> tuple[Subspace, Subspace]:
    """``(a + b, a ∩ b)``; the intersection is the complement of ``a^⊥ + b^⊥``."""
    if a.dim_ambient != b.dim_ambient:
        raise ValueError("subspaces live in different ambient dimensions")
    exact = a.exact and b.exact
    conv = (lambda m: m) if exact else to_float
    total = Subspace.from_columns(np.column_stack([conv(a.basis), conv(b.basis)]), tol)
    ca, cb = complement(a, tol), complement(b, tol)
    perp_sum = Subspace.from_columns(np.column_stack([conv(ca.basis), conv(cb.basis)]), tol)
    return total, complement(perp_sum, tol)


def diagonal_basis(w: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Same subspace, re-based so the first vector is the sum of the stored ones.

    Gram-Schmidt over ``[b_1 + ... + b_k, b_1, ..., b_k]``; rational inputs
    stay rational, so this gives a second, rotated orthogonal basis.
    """
    if w.dim < 2:
        return w
    s = w.basis.sum(axis=1).reshape(-1, 1)
    q, _ = linalg.orthonormalize(np.column_stack([s, w.basis]), tol)
    return Subspace(q)


def pooled_basis(fam: SubspaceFamily, rebase=None) -> FrameSpec:
    """All stored basis vectors of all members as one frame.

    Vectors are labelled ``W<i>[<j>]`` (1-based) and ``meta["origins"]`` holds
    the 0-based ``(i, j)`` pairs.  ``rebase`` optionally maps each member to
    another basis of the same subspace first.
    """
    cols, labels, origins = [], [], []
    for i, w in enumerate(fam):
        if rebase is not None:
            w = rebase(w)
        for j in range(w.dim):
            cols.append(w.basis[:, j])
            labels.append(f"W{i + 1}[{j + 1}]")
            origins.append((i, j))
    if not cols:
        raise ValueError("every member is the trivial subspace; nothing to pool")
    exact = fam.exact
    mat = np.column_stack(cols) if exact else to_float(np.column_stack(cols))
    return FrameSpec(mat, labels=tuple(labels), meta={"origins": origins})
