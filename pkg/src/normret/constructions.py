"""Explicit frames and subspace families together with their failure witnesses.

Naimark embedding and Parseval completion live here alongside the named
families used by the corpus and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .frames import FrameSpec, frame_operator, spark
from .linalg import DEFAULT_TOL, Tolerance, to_float
from .subspaces import Subspace, SubspaceFamily, complement
from .verdict import WitnessPair, replay_witness

__all__ = [
    "NaimarkEmbedding",
    "naimark_embed",
    "bessel_to_parseval_completion",
    "naimark_nr_tail_check",
    "sign_flip_partners",
    "equimodular_vector",
    "independent_hyperplane_failure_witness",
    "coordinate_hyperplane_witness",
    "hyperplane_family",
    "ConstructionRecipe",
    "RECIPES",
    "construct",
    "rotation_xz",
    "CONE_PARAMETERS",
]

PARSEVAL_REL = 1e-9


@dataclass(frozen=True, eq=False)
class NaimarkEmbedding:
    """A Parseval frame realised as the projection of the standard basis of ``R^M``.

    ``basis`` is an ``M x M`` orthogonal matrix whose first ``N`` columns span
    the embedded copy of ``R^N``; ``projection`` is the orthogonal projection
    onto that copy, so ``projection[:, i]`` is the image of ``e_i``.
    ``image_frame`` holds those images in the coordinates of the copy, which
    reproduce the input frame.
    """

    ambient: int
    basis: np.ndarray
    projection: np.ndarray
    image_frame: FrameSpec

    @property
    def isometry(self) -> np.ndarray:
        """``R^N -> R^M``, ``x -> (<x, phi_i>)_i``."""
        return self.basis[:, : self.image_frame.dim]

    def coordinates(self, x) -> np.ndarray:
        return self.isometry @ to_float(linalg.as_vector(x))


def _parseval_deviation(f: FrameSpec) -> float:
    s = to_float(frame_operator(f))
    return float(np.linalg.norm(s - np.eye(f.dim)) / math.sqrt(f.dim))


def naimark_embed(parseval: FrameSpec) -> NaimarkEmbedding:
    """Embed a Parseval frame ``{phi_i}`` of ``R^N`` into ``R^M``.

    The synthesis rows are orthonormal; completing them to an orthogonal
    ``M x M`` matrix gives the big basis, and ``P = Phi^T Phi`` satisfies
    ``P e_i = Phi^T phi_i``.  Computed in floating point.
    """
    dev = _parseval_deviation(parseval)
    if dev > PARSEVAL_REL:
        raise ValueError(f"frame is not Parseval: |S - I|_F / sqrt(N) = {dev:.3e}")
    phi = to_float(parseval.vectors)
    n, m = phi.shape
    rest = linalg.nullspace(phi)
    basis = np.column_stack([phi.T, rest])
    proj = phi.T @ phi
    image = FrameSpec(basis[:, :n].T @ proj, labels=parseval.labels, meta=dict(parseval.meta))

    scale = max(1.0, float(np.abs(phi).max()))
    if np.linalg.norm(basis.T @ basis - np.eye(m)) > 1e-9 * m:
        raise ArithmeticError("completed basis is not orthogonal")
    if np.linalg.norm(proj @ proj - proj) > 1e-9 * m or abs(np.trace(proj) - n) > 1e-9 * n:
        raise ArithmeticError("embedded projection is not a rank-N projection")
    if np.abs(image.vectors - phi).max() > 1e-9 * scale:
        raise ArithmeticError("P e_i does not reproduce the frame vectors")
    return NaimarkEmbedding(m, basis, proj, image)


def bessel_to_parseval_completion(f: FrameSpec) -> FrameSpec:
    """Complete ``f`` to a Parseval frame with exactly ``2M - 1`` vectors.

    ``f`` is first scaled so its largest frame-operator eigenvalue is 1, then
    ``sqrt(1 - lambda_j) g_j`` is appended for the remaining eigenpairs and
    zero vectors pad the total to ``2M - 1``.  ``meta["scale"]`` records the
    scale factor and ``meta["original_count"]`` the value of ``M``.
    """
    n, m = f.dim, f.count
    if m < n:
        raise ValueError(f"completion needs M >= N (got M = {m}, N = {n}): only M - 1 slots exist for N - 1 completions")
    phi = to_float(f.vectors)
    lam, g = linalg.symmetric_eigen(phi @ phi.T)
    if lam[0] <= 0:
        raise ValueError("all frame vectors are zero")
    scale = 1.0 / math.sqrt(lam[0])
    lam = np.clip(lam / lam[0], 0.0, 1.0)
    extra = [math.sqrt(1.0 - lam[j]) * g[:, j] for j in range(1, n)]
    pad = [np.zeros(n)] * (2 * m - 1 - m - len(extra))
    out = np.column_stack([scale * phi] + extra + pad) if extra or pad else scale * phi
    labels = None
    if f.labels is not None:
        labels = tuple(f.labels) + tuple(f"completion[{j}]" for j in range(1, 2 * m - m))
    meta = dict(f.meta, scale=scale, original_count=m)
    res = FrameSpec(out, labels=labels, meta=meta)
    dev = _parseval_deviation(res)
    if dev > PARSEVAL_REL:
        raise ArithmeticError(f"completion is not Parseval (deviation {dev:.3e})")
    return res


def naimark_nr_tail_check(f: FrameSpec, x, y, rel: float = 1e-9) -> bool:
    """Whether matching head moduli force matching tail norms for ``x, y``.

    ``f`` is completed to a Parseval frame of ``2M - 1`` vectors and embedded;
    the first ``M`` embedded coordinates are the head and the rest the tail.
    Returns True when the head moduli differ (nothing to check) or when the
    tail norms agree within ``rel``.
    """
    emb = naimark_embed(bessel_to_parseval_completion(f))
    cx, cy = emb.coordinates(x), emb.coordinates(y)
    m = f.count
    scale = max(np.linalg.norm(cx), np.linalg.norm(cy), 1e-300)
    if np.max(np.abs(np.abs(cx[:m]) - np.abs(cy[:m])), initial=0.0) > rel * scale:
        return True
    return abs(np.linalg.norm(cx[m:]) - np.linalg.norm(cy[m:])) <= rel * scale


def sign_flip_partners(f: FrameSpec, x, rel: float = 1e-9):
    """All ``y`` with ``<y, phi_i> = eps_i <x, phi_i>`` for some sign pattern ``eps``.

    Patterns whose target coefficients are not in the range of the analysis
    operator are skipped.  Each unordered pattern pair ``eps, -eps`` is
    visited once.
    """
    phi = to_float(f.vectors)
    x = to_float(linalg.as_vector(x))
    coef = phi.T @ x
    m = f.count
    if m > 20:
        raise ValueError("too many vectors to enumerate sign patterns")
    out = []
    for bits in range(1 << (m - 1)):
        eps = np.array([-1.0 if bits >> i & 1 else 1.0 for i in range(m)])
        target = eps * coef
        y, *_ = np.linalg.lstsq(phi.T, target, rcond=None)
        if np.linalg.norm(phi.T @ y - target) <= rel * max(np.linalg.norm(coef), 1e-300):
            out.append(y)
    return out


def equimodular_vector(f: FrameSpec, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """A vector with ``|<phi, phi_i>| = c > 0`` for ``N`` independent vectors.

    Built one input at a time: after handling ``phi_1..phi_{k-1}`` the
    current vector lies in their span; it is extended by ``lam * psi`` with
    ``psi`` the unit direction of ``phi_k`` orthogonal to that span, and
    ``lam`` solves ``<phi, phi_k> + lam <psi, phi_k> = +-c``.  The root of
    smaller magnitude is kept (ties go to the positive one).
    """
    if f.count != f.dim:
        raise ValueError(f"need exactly N = {f.dim} vectors, got {f.count}")
    vecs = to_float(f.vectors)
    if linalg.rank(vecs, tol) < f.dim:
        raise ValueError("input vectors are linearly dependent")
    n = f.dim
    first = vecs[:, 0]
    phi = first / np.linalg.norm(first)
    c = float(phi @ first)
    q = [phi.copy()]
    for k in range(1, n):
        v = vecs[:, k]
        psi = v.copy()
        for _ in range(2):
            for b in q:
                psi -= (b @ psi) * b
        psi /= np.linalg.norm(psi)
        q.append(psi)
        a, b = float(phi @ v), float(psi @ v)
        roots = [(c - a) / b, (-c - a) / b]
        roots.sort(key=lambda r: (round(abs(r), 12), -r))
        phi = phi + roots[0] * psi
    mods = np.abs(vecs.T @ phi)
    if np.max(np.abs(mods - c)) > 1e-9 * c:
        raise ArithmeticError("equimodular construction lost accuracy")
    return phi, c


def hyperplane_family(vectors, exact: bool | None = None) -> SubspaceFamily:
    """Member-wise orthogonal complements ``{phi_i^⊥}`` of the given vectors."""
    f = vectors if isinstance(vectors, FrameSpec) else FrameSpec.from_vectors(vectors, exact=exact)
    return SubspaceFamily(tuple(complement(Subspace.from_columns(f.vectors[:, [i]])) for i in range(f.count)),
                          {"recipe": "hyperplane-family"})


def independent_hyperplane_failure_witness(vectors) -> WitnessPair:
    """Norm-retrieval witness for the hyperplanes of ``N - 1`` independent unit vectors.

    ``x`` is a unit vector orthogonal to every ``phi_i`` and ``phi`` a unit
    vector of their span with ``|<phi, phi_i>| = c``.  With ``y = c x + phi``
    every hyperplane measurement is 1 while ``|y|^2 = 1 + c^2``.
    """
    f = vectors if isinstance(vectors, FrameSpec) else FrameSpec.from_vectors(vectors)
    n, k = f.dim, f.count
    if k != n - 1 or n < 2:
        raise ValueError(f"need N - 1 = {n - 1} vectors in R^{n}, got {k}")
    phis = to_float(f.vectors)
    norms = np.linalg.norm(phis, axis=0)
    if np.max(np.abs(norms - 1)) > 1e-9:
        raise ValueError("input vectors must have unit norm")
    if linalg.rank(phis) < k:
        raise ValueError("input vectors are linearly dependent")
    x = linalg.nullspace(phis.T)[:, 0]
    q, _ = np.linalg.qr(phis)
    inner, _ = equimodular_vector(FrameSpec(q.T @ phis))
    phi = q @ inner
    phi /= np.linalg.norm(phi)
    c = float(abs(phi @ phis[:, 0]))
    y = c * x + phi
    w = WitnessPair(x, y, kind="norm")
    if not replay_witness(w, hyperplane_family(FrameSpec(phis))).ok:
        raise ArithmeticError("hyperplane witness failed replay")
    return w


def coordinate_hyperplane_witness(n: int, indices=None) -> WitnessPair:
    """Exact witness for ``{e_j^⊥ : j in indices}`` with ``indices ⊆ {0..N-2}``.

    ``x = (1, ..., 1)`` and ``y = sqrt((N-1)/(N-2)) (1, ..., 1, 0)``: each
    hyperplane sees ``N - 1`` for both, while ``|x|^2 = N`` and
    ``|y|^2 = (N-1)^2/(N-2)``.  The square root is carried in ``y_scale_sq``.
    """
    if n < 3:
        raise ValueError("needs N >= 3")
    indices = range(n - 1) if indices is None else indices
    if any(not 0 <= j < n - 1 for j in indices):
        raise ValueError("hyperplane indices must avoid the last coordinate")
    x = np.array([Fraction(1)] * n, dtype=object)
    y = np.array([Fraction(1)] * (n - 1) + [Fraction(0)], dtype=object)
    return WitnessPair(x, y, kind="norm", y_scale_sq=Fraction(n - 1, n - 2))


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstructionRecipe:
    name: str
    parameters: dict = field(default_factory=dict)


def _e(n: int, i: int) -> list:
    return [1 if j == i else 0 for j in range(n)]


def _expected(**kw) -> dict:
    return {k: v for k, v in kw.items() if v is not None}


def _three_codim_one(dim: int = 3):
    if dim < 2:
        raise ValueError("three-codim-one needs dim >= 2")
    normals = [_e(dim, 0), _e(dim, 1), [1, -1] + [0] * (dim - 2)]
    fam = hyperplane_family(normals, exact=True)
    return SubspaceFamily(fam.members, {"recipe": "three-codim-one", "normals": normals,
                                        "expected": _expected(nr="ProbablyYes")})


def _partition_ln(sizes, dim: int):
    sizes = [int(k) for k in sizes]
    if dim < 1 or any(k < 1 or k > dim for k in sizes):
        raise ValueError("every block size must lie in 1..dim")
    total = sum(sizes)
    if total % dim:
        raise ValueError(f"block sizes sum to {total}, not a multiple of dim = {dim}")
    layers = total // dim
    spans, start = [], 0
    for k in sizes:
        spans.append([_e(dim, (start + j) % dim) for j in range(k)])
        start += k
    cert = [Fraction(1, layers)] * len(sizes)
    fam = SubspaceFamily.from_spans(spans, dim=dim, exact=True)
    return SubspaceFamily(fam.members, {"recipe": "partition-ln", "layers": layers, "certificate": cert,
                                        "expected": _expected(nr="YesExact")})


def _k_plus_one(dim: int, k: int):
    if not 1 <= k <= dim:
        raise ValueError(f"K must satisfy 1 <= K <= N (got K = {k}, N = {dim})")
    base = [_e(dim, i) for i in range(dim - k)]
    spans = [base] + [base + [_e(dim, dim - k + i)] for i in range(k)]
    cert = [Fraction(-(k - 1))] + [Fraction(1)] * k
    fam = SubspaceFamily.from_spans(spans, dim=dim, exact=True)
    return SubspaceFamily(fam.members, {"recipe": "k-plus-one", "certificate": cert,
                                        "expected": _expected(nr="YesExact")})


def rotation_xz(alpha: float, beta: float) -> np.ndarray:
    """``Rz(alpha) Rx(beta) Rz(alpha)``.

    Two elementary factors always leave a zero entry in the product, so the
    z axis is used twice to make every entry generic.
    """
    ca, sa, cb, sb = math.cos(alpha), math.sin(alpha), math.cos(beta), math.sin(beta)
    rz = np.array([[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])
    rx = np.array([[1.0, 0.0, 0.0], [0.0, cb, -sb], [0.0, sb, cb]])
    return rz @ rx @ rz


def _two_basis_pr():
    alpha, beta = 1.0, math.sqrt(2.0)
    for attempt in range(11):
        rot = rotation_xz(alpha + 0.1 * attempt, beta + 0.1 * attempt)
        union = FrameSpec(np.column_stack([np.eye(3), rot]))
        if spark(union) == 4:
            break
    else:
        raise ArithmeticError("no full-spark rotation found")
    e = np.eye(3)
    members = (
        Subspace.from_columns(e[:, [0, 2]]),
        Subspace.from_columns(e[:, [1, 2]]),
        Subspace.from_columns(e[:, [2]]),
        Subspace.from_columns(rot[:, [0]]),
        Subspace.from_columns(rot[:, [1]]),
    )
    meta = {"recipe": "two-basis-pr", "rotation": rot.tolist(), "attempts": attempt + 1,
            "expected": _expected(pr="ProbablyYes", complement_nr="NoWithWitness")}
    return SubspaceFamily(members, meta)


# (s, t) pairs mapped to the sphere by inverse stereographic projection;
# every image has third coordinate >= 0.9.
CONE_PARAMETERS = (
    (Fraction(1, 5), Fraction(1, 10)),
    (Fraction(-1, 5), Fraction(1, 10)),
    (Fraction(1, 10), Fraction(-1, 5)),
    (Fraction(-1, 10), Fraction(-1, 5)),
    (Fraction(0), Fraction(1, 5)),
)


def _cone_vector(s: Fraction, t: Fraction):
    d = 1 + s * s + t * t
    return [2 * s / d, 2 * t / d, (1 - s * s - t * t) / d]


def _cone_example():
    vecs = [_cone_vector(s, t) for s, t in CONE_PARAMETERS]
    f = FrameSpec.from_vectors(vecs, exact=True,
                               meta={"recipe": "cone-example",
                                     "expected": _expected(pr="YesExact", identity_certificate="NotInSpan",
                                                           scalability="Infeasible")})
    if spark(f) != 4:
        raise ArithmeticError("cone vectors are not full spark")
    return f


def _coordinate_multiplicity(sets, dim: int):
    sets = [sorted({int(i) for i in s}) for s in sets]
    if any(not 0 <= i < dim for s in sets for i in s):
        raise ValueError(f"coordinate indices must lie in 0..{dim - 1}")
    counts = [sum(i in s for s in sets) for i in range(dim)]
    if len(set(counts)) != 1 or counts[0] == 0:
        raise ValueError(f"multiplicity not uniform: coordinate counts {counts}")
    m = counts[0]
    spans = [[_e(dim, i) for i in s] for s in sets]
    fam = SubspaceFamily.from_spans(spans, dim=dim, exact=True)
    return SubspaceFamily(fam.members, {"recipe": "coordinate-multiplicity", "multiplicity": m,
                                        "certificate": [Fraction(1, m)] * len(sets),
                                        "expected": _expected(nr="YesExact")})


def _hyperplanes(vectors):
    return hyperplane_family(vectors)


RECIPES = {
    "three-codim-one": _three_codim_one,
    "partition-ln": _partition_ln,
    "k-plus-one": _k_plus_one,
    "hyperplane-family": _hyperplanes,
    "two-basis-pr": _two_basis_pr,
    "cone-example": _cone_example,
    "coordinate-multiplicity": _coordinate_multiplicity,
}


def construct(recipe: ConstructionRecipe | str, **parameters):
    """Build a named family (or frame, for ``cone-example``).

    Recipes and their parameters:

    ``three-codim-one``          ``dim``
    ``partition-ln``             ``sizes``, ``dim``
    ``k-plus-one``               ``dim``, ``k``
    ``hyperplane-family``        ``vectors``
    ``two-basis-pr``             (none)
    ``cone-example``             (none)
    ``coordinate-multiplicity``  ``sets``, ``dim``
    """
    if isinstance(recipe, str):
        recipe = ConstructionRecipe(recipe, parameters)
    try:
        build = RECIPES[recipe.name]
    except KeyError:
        raise ValueError(f"unknown recipe {recipe.name!r}; choose from {sorted(RECIPES)}") from None
    try:
        return build(**recipe.parameters)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {recipe.name}: {exc}") from None
