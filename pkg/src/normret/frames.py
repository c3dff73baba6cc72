"""Vector frames and the exact partition tests.

A :class:`FrameSpec` stores its ``M`` vectors as the columns of an ``N x M``
matrix (the synthesis operator).  Phase retrieval of real vectors is decided
by the complement property and norm retrieval by the partition-orthogonality
criterion: for every split ``(I, I^c)`` the orthogonal complements of the two
spans must be orthogonal to each other.  Both enumerate all ``2^(M-1)``
unordered partitions, so exact-mode verdicts are proofs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, is_exact, nullspace, to_float
from .verdict import Status, Verdict, WitnessPair, refute

__all__ = [
    "FrameSpec",
    "FrameFlags",
    "EnumerationGuard",
    "MAX_ENUMERATION",
    "frame_operator",
    "frame_bounds",
    "classify",
    "spark",
    "complement_property",
    "phase_retrieval_vectors",
    "norm_retrieval_vectors",
    "sinv_span_membership",
    "scalability",
    "partitions",
]

MAX_ENUMERATION = 24
CLASSIFY_REL = 1e-9


class EnumerationGuard(ValueError):
    """Raised when an exhaustive enumeration would exceed desk scale."""


@dataclass(frozen=True, eq=False)
class FrameSpec:
    vectors: np.ndarray
    labels: tuple | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = as_matrix(self.vectors)
        if v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError(f"a frame needs N >= 1 and M >= 1, got shape {v.shape}")
        object.__setattr__(self, "vectors", v)
        if self.labels is not None and len(self.labels) != v.shape[1]:
            raise ValueError("one label per vector is required")

    @classmethod
    def from_vectors(cls, vectors, exact: bool | None = None, labels=None, meta=None) -> FrameSpec:
        """Build from a sequence of ``M`` vectors of length ``N``."""
        rows = as_matrix(vectors, exact=exact)
        return cls(rows.T.copy(), labels=tuple(labels) if labels else None, meta=dict(meta or {}))

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def count(self) -> int:
        return self.vectors.shape[1]

    @property
    def exact(self) -> bool:
        return is_exact(self.vectors)

    def __len__(self):
        return self.count

    def __getitem__(self, i):
        return self.vectors[:, i]

    def subset(self, idx) -> np.ndarray:
        return self.vectors[:, list(idx)]

    def as_float(self) -> FrameSpec:
        return FrameSpec(to_float(self.vectors), self.labels, dict(self.meta))

    def transform(self, t) -> FrameSpec:
        """Apply a linear map to every vector."""
        t = as_matrix(t, exact=self.exact if self.exact else False)
        return FrameSpec(t @ self.vectors, self.labels, dict(self.meta))


@dataclass(frozen=True)
class FrameFlags:
    is_frame: bool
    lower_bound: float
    upper_bound: float
    tight: bool
    parseval: bool
    equal_norm: bool
    unit_norm: bool
    spark: int
    full_spark: bool


def frame_operator(f: FrameSpec) -> np.ndarray:
    """``S = sum_i phi_i phi_i^T``, exact in exact mode."""
    v = f.vectors
    return v @ v.T


def frame_bounds(f: FrameSpec) -> tuple[float, float]:
    """Optimal frame bounds: extreme eigenvalues of the frame operator."""
    lam, _ = linalg.symmetric_eigen(frame_operator(f))
    return max(float(lam[-1]), 0.0), float(lam[0])


def _check_guard(m: int):
    if m > MAX_ENUMERATION:
        raise EnumerationGuard(
            f"{m} vectors exceeds the exhaustive enumeration limit of {MAX_ENUMERATION}; "
            "pass an explicit override to run anyway"
        )


def spark(f: FrameSpec, tol: Tolerance = DEFAULT_TOL, override: bool = False) -> int:
    """Size of the smallest linearly dependent subfamily.

    Returns ``N + 1`` when no subfamily of size ``<= N`` is dependent, which
    also covers an independent family with ``M <= N``.
    """
    if not override:
        _check_guard(f.count)
    n, m = f.dim, f.count
    for k in range(1, min(m, n) + 1):
        for idx in itertools.combinations(range(m), k):
            if linalg.rank(f.subset(idx), tol) < k:
                return k
    return n + 1


def classify(f: FrameSpec, tol: Tolerance = DEFAULT_TOL) -> FrameFlags:
    a, b = frame_bounds(f)
    is_frame = linalg.rank(f.vectors, tol) == f.dim
    s = frame_operator(f)
    sq = [np.dot(f[i], f[i]) for i in range(f.count)]
    if f.exact:
        diag = s[0, 0]
        scalar = all(s[i, j] == (diag if i == j else 0) for i in range(f.dim) for j in range(f.dim))
        tight = is_frame and scalar
        parseval = tight and diag == 1
        equal_norm = all(q == sq[0] for q in sq)
        unit_norm = all(q == 1 for q in sq)
    else:
        tight = is_frame and abs(b - a) <= CLASSIFY_REL * b
        parseval = tight and abs(a - 1) <= CLASSIFY_REL and abs(b - 1) <= CLASSIFY_REL
        norms = np.sqrt(np.asarray(sq, dtype=float))
        equal_norm = bool(norms.max() - norms.min() <= CLASSIFY_REL * norms.max())
        unit_norm = bool(np.all(np.abs(norms - 1) <= CLASSIFY_REL))
    sp = spark(f, tol) if f.count <= MAX_ENUMERATION else -1
    return FrameFlags(
        is_frame=bool(is_frame),
        lower_bound=a,
        upper_bound=b,
        tight=bool(tight),
        parseval=bool(parseval),
        equal_norm=bool(equal_norm),
        unit_norm=bool(unit_norm),
        spark=sp,
        full_spark=sp == f.dim + 1,
    )


def partitions(m: int):
    """Yield ``(index, I, I^c)`` for the ``2^(m-1)`` unordered splits of ``range(m)``.

    The last index always lies in ``I^c``; index 0 is the split with ``I`` empty.
    """
    for mask in range(1 << (m - 1)):
        side = [k for k in range(m - 1) if mask >> k & 1]
        rest = [k for k in range(m) if not (mask >> k & 1) or k == m - 1]
        yield mask, side, rest


def _perp(f: FrameSpec, idx, tol) -> np.ndarray:
    """Basis of the orthogonal complement of ``span{phi_k : k in idx}``."""
    if not idx:
        return linalg._identity(f.dim, f.exact)
    return nullspace(f.subset(idx).T, tol)


def _unit(v: np.ndarray) -> np.ndarray:
    v = to_float(v)
    return v / np.linalg.norm(v)


def _scaled_exact(v: np.ndarray) -> np.ndarray:
    """Rescale an exact vector by a positive rational so it has integer entries."""
    den = 1
    for e in v:
        den = den * e.denominator // gcd(den, e.denominator)
    ints = [int(e * den) for e in v]
    g = 0
    for e in ints:
        g = gcd(g, e)
    return np.array([Fraction(e, g or 1) for e in ints], dtype=object)


def complement_property(f: FrameSpec, tol: Tolerance = DEFAULT_TOL, override: bool = False) -> Verdict:
    """Check that every split leaves one side spanning ``R^N``.

    On failure the witness is ``(u + v, u - v)`` with ``u`` orthogonal to one
    side and ``v`` orthogonal to the other; every ``|<., phi_k>|`` agrees while
    the two vectors are not sign multiples of each other.
    """
    if not override:
        _check_guard(f.count)
    n = f.dim
    checked = 0
    for mask, side, rest in partitions(f.count):
        checked += 1
        if (side and linalg.rank(f.subset(side), tol) == n) or linalg.rank(f.subset(rest), tol) == n:
            continue
        u = _perp(f, side, tol)[:, 0]
        v = _perp(f, rest, tol)[:, 0]
        if f.exact:
            u, v = _scaled_exact(u), _scaled_exact(v)
        else:
            u, v = _unit(u), _unit(v)
        w = WitnessPair(u + v, u - v, kind="phase")
        diag = {"partitions_checked": checked, "partition": {"I": side, "Ic": rest}}
        return refute(w, f, "complement-property", diag)
    return Verdict(
        Status.YES_EXACT,
        "complement-property",
        certificate=f"every one of {checked} splits has a spanning side",
        diagnostics={"partitions_checked": checked, "exact": f.exact},
    )


def phase_retrieval_vectors(f: FrameSpec, tol: Tolerance = DEFAULT_TOL, override: bool = False) -> Verdict:
    """Real phase retrieval by vectors; equivalent to the complement property."""
    return complement_property(f, tol, override)


def norm_retrieval_vectors(f: FrameSpec, tol: Tolerance = DEFAULT_TOL, override: bool = False) -> Verdict:
    """Decide norm retrieval of a vector family by partition orthogonality.

    For each split ``(I, I^c)`` let ``U1`` and ``U2`` be the orthogonal
    complements of the spans of the two sides.  The family retrieves norms iff
    ``U1 ⊥ U2`` for every split.  A violating split yields ``x in U1``,
    ``y in U2`` with ``<x, y> != 0``; then ``x + y`` and ``x - y`` have the same
    measurements and different norms.
    """
    if not override:
        _check_guard(f.count)
    checked = 0
    worst = 0.0
    for mask, side, rest in partitions(f.count):
        checked += 1
        u1 = _perp(f, side, tol)
        if u1.shape[1] == 0:
            continue
        u2 = _perp(f, rest, tol)
        if u2.shape[1] == 0:
            continue
        g = u1.T @ u2
        if f.exact:
            if all(e == 0 for e in g.ravel()):
                continue
            i, j = max(np.ndindex(g.shape), key=lambda ij: (abs(g[ij]), -ij[0], -ij[1]))
            x, y = _scaled_exact(u1[:, i]), _scaled_exact(u2[:, j])
        else:
            # nullspace columns are orthonormal here, so g holds cosines
            uu, s, vt = np.linalg.svd(g)
            worst = max(worst, float(s[0]))
            if s[0] <= tol.orth_rel:
                continue
            x, y = u1 @ uu[:, 0], u2 @ vt[0]
            if x @ y < 0:
                y = -y
        w = WitnessPair(x + y, x - y, kind="norm")
        diag = {"partitions_checked": checked, "partition": {"I": side, "Ic": rest}}
        verdict = refute(w, f, "partition-orthogonality", diag)
        if verdict.status is Status.NO_WITH_WITNESS or f.exact:
            return verdict
        # the float violation is too small to exhibit a replayable witness
        return Verdict(Status.UNKNOWN, "partition-orthogonality", diagnostics=verdict.diagnostics)
    return Verdict(
        Status.YES_EXACT,
        "partition-orthogonality",
        certificate=f"complements orthogonal across all {checked} splits",
        diagnostics={"partitions_checked": checked, "exact": f.exact, "max_cosine": worst},
    )


def sinv_span_membership(f: FrameSpec, side, x, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``x`` lies in ``span{S^-1 phi_i : i not in side}``.

    Requires ``x`` orthogonal to every ``phi_i`` with ``i`` in ``side``.
    """
    side = sorted(set(side))
    x = linalg.as_vector(x, exact=f.exact if f.exact else False)
    s = frame_operator(f)
    if linalg.rank(s, tol) < f.dim:
        raise ValueError("frame operator is singular; the vectors do not span")
    for i in side:
        ip = np.dot(x, f[i])
        if f.exact:
            bad = ip != 0
        else:
            bad = abs(ip) > tol.orth_rel * np.linalg.norm(x) * np.linalg.norm(to_float(f[i]))
        if bad:
            raise ValueError(f"x is not orthogonal to vector {i}")
    rest = [i for i in range(f.count) if i not in side]
    if not rest:
        return linalg.rank(x.reshape(-1, 1), tol) == 0
    if f.exact:
        g = np.column_stack([linalg.solve_linear(s, f[i]).x for i in rest])
    else:
        g = np.linalg.solve(to_float(s), to_float(f.subset(rest)))
    base = linalg.rank(g, tol)
    aug = np.column_stack([g, x])
    return linalg.rank(aug, tol) == base


def scalability(f: FrameSpec):
    """Nonnegative ``c`` with ``sum_i c_i phi_i phi_i^T = I``, or a separating certificate.

    ``c_i`` are the squared scalings making ``{sqrt(c_i) phi_i}`` Parseval.
    """
    v = to_float(f.vectors)
    cols = [linalg.sym_coords(np.outer(v[:, i], v[:, i])) for i in range(f.count)]
    a = np.column_stack(cols)
    b = linalg.sym_coords(np.eye(f.dim))
    return linalg.nonnegative_feasibility(a, b)
