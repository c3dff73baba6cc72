"""Norm and phase retrieval decisions for families of subspaces.

Each decision runs exact tests first, both refuting and certifying, and
only then a seeded multi-start search for counterexamples.  A family that survives every
refutation attempt without a certificate is reported as ``ProbablyYes``;
the engine never upgrades such a family to ``YesExact``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .frames import (
    MAX_ENUMERATION,
    EnumerationGuard,
    FrameSpec,
    _scaled_exact,
    complement_property,
    norm_retrieval_vectors,
)
from .linalg import DEFAULT_TOL, Tolerance, is_exact, sym_coords, to_float
from .subspaces import SubspaceFamily, complement, diagonal_basis, pooled_basis
from .verdict import Status, Verdict, WitnessPair, refute, replay_witness

__all__ = [
    "SearchParams",
    "SearchResult",
    "nr_dimension_sum_test",
    "identity_certificate",
    "certificate_residual",
    "complement_identity_certificate",
    "pooled_necessary_nr_test",
    "nr_spanning_check",
    "pr_spanning_check",
    "nr_counterexample_search",
    "pr_counterexample_search",
    "decide_norm_retrieval_projections",
    "decide_phase_retrieval_projections",
    "perp_family",
    "nonspanning_phase_witness",
]

CERT_REL = 1e-10
MAX_COMPLEMENT_SUBSETS = 1 << 16
MAX_START_SUBSETS = 1 << 10


@dataclass(frozen=True)
class SearchParams:
    starts: int = 256
    max_iter: int = 500
    seed: int = 0
    objective_floor: float = 1e-18
    witness_margin: float = 1e-6

    def __post_init__(self):
        if self.starts < 1 or self.max_iter < 1:
            raise ValueError("starts and max_iter must be positive")
        if self.seed < 0 or self.seed >= 1 << 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not (self.objective_floor > 0 and self.witness_margin > 0):
            raise ValueError("objective_floor and witness_margin must be positive")


@dataclass
class SearchResult:
    found: bool
    witness: WitnessPair | None = None
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# exact necessary tests and certificates
# ---------------------------------------------------------------------------

def _stacked_bases(fam: SubspaceFamily, members=None) -> np.ndarray:
    ws = [fam[i] for i in (range(len(fam)) if members is None else members)]
    cols = [w.basis for w in ws if w.dim]
    exact = all(w.exact for w in ws)
    if not cols:
        return linalg._zeros((fam.dim, 0), exact)
    out = np.column_stack(cols)
    return out if exact else to_float(out)


def nr_dimension_sum_test(fam: SubspaceFamily, tol: Tolerance = DEFAULT_TOL):
    """Return a nonzero vector orthogonal to every member, or None.

    Such a vector exists exactly when the member dimensions sum to less than
    ``N``; all of its measurements vanish, so norm retrieval fails.
    """
    if sum(fam.dims()) >= fam.dim:
        return None
    b = _stacked_bases(fam)
    if b.shape[1] == 0:
        return linalg._identity(fam.dim, fam.exact)[:, 0]
    return linalg.nullspace(b.T, tol)[:, 0]


def _identity_system(fam: SubspaceFamily):
    exact = fam.exact
    projs = fam.projections if exact else [to_float(p) for p in fam.projections]
    a = np.column_stack([sym_coords(p) for p in projs])
    eye = linalg._identity(fam.dim, exact)
    return a, sym_coords(eye), projs, eye


def certificate_residual(fam: SubspaceFamily, a):
    """``sum_i a_i P_i - I``; exact when both family and coefficients are exact."""
    exact = fam.exact and is_exact(linalg.as_vector(a))
    if exact:
        coeffs = linalg.as_vector(a, exact=True)
        total = linalg._zeros((fam.dim, fam.dim), True)
        for c, p in zip(coeffs, fam.projections):
            total = total + c * p
        return total - linalg._identity(fam.dim, True)
    coeffs = to_float(linalg.as_vector(a))
    return np.einsum("i,ijk->jk", coeffs, fam.float_projections) - np.eye(fam.dim)


def replays_identity(fam: SubspaceFamily, a) -> bool:
    if len(a) != len(fam):
        return False
    r = certificate_residual(fam, a)
    if is_exact(r):
        return linalg.is_zero(r)
    return float(np.linalg.norm(r)) <= CERT_REL * math.sqrt(fam.dim)


def identity_certificate(fam: SubspaceFamily, tol: Tolerance = DEFAULT_TOL):
    """Coefficients ``a`` with ``sum_i a_i P_i = I``, or None when ``I`` is not in the span.

    When the solution is not unique the free coefficients are set to zero.
    The certificate is replayed before it is returned.
    """
    a, b, _, _ = _identity_system(fam)
    sol = linalg.solve_linear(a, b, tol)
    if isinstance(sol, linalg.Infeasible):
        return None
    coeffs = sol.x if isinstance(sol, linalg.Unique) else sol.x0
    if not replays_identity(fam, coeffs):
        return None
    return coeffs


def complement_identity_certificate(fam: SubspaceFamily, a):
    """Turn ``sum a_i P_i = I`` into ``sum b_i (I - P_i) = I``.

    Returns ``b = a / (sum(a) - 1)``, or None when ``sum(a) == 1``.
    """
    if not replays_identity(fam, a):
        raise ValueError("the given coefficients do not satisfy sum a_i P_i = I")
    exact = fam.exact and is_exact(linalg.as_vector(a))
    coeffs = linalg.as_vector(a, exact=True) if exact else to_float(linalg.as_vector(a))
    total = sum(coeffs, Fraction(0) if exact else 0.0)
    if (total == 1) if exact else abs(total - 1) <= CERT_REL:
        return None
    bcoef = coeffs / (total - 1)
    comp = perp_family(fam)
    if not replays_identity(comp, bcoef):
        raise ArithmeticError("complement certificate failed replay")
    return bcoef


def pooled_necessary_nr_test(fam: SubspaceFamily, tol: Tolerance = DEFAULT_TOL):
    """Norm-retrieval test on pooled member bases; returns a witness or None.

    If the family retrieves norms, then so does the union of *any* choice of
    orthogonal bases of its members.  The test pools the stored bases and a
    second, re-based choice; any failing pool refutes the family.  Passing is
    only necessary evidence.
    """
    count = sum(fam.dims())
    if count > MAX_ENUMERATION:
        raise EnumerationGuard(f"{count} pooled vectors exceed the enumeration limit of {MAX_ENUMERATION}")
    if count == 0:
        return None
    for rebase in (None, diagonal_basis):
        if rebase is not None and all(w.dim < 2 for w in fam):
            break
        pooled = pooled_basis(fam, rebase)
        v = norm_retrieval_vectors(pooled, tol)
        if v.status is Status.NO_WITH_WITNESS:
            return v.witness
    return None


def _as_family_vector(fam: SubspaceFamily, x):
    x = linalg.as_vector(x)
    if len(x) != fam.dim:
        raise ValueError(f"vector has length {len(x)}, expected {fam.dim}")
    if is_exact(x) and linalg.is_zero(x) or not is_exact(x) and not np.any(x):
        raise ValueError("x must be nonzero")
    if fam.exact and is_exact(x):
        return x, fam.projections
    return to_float(x), list(fam.float_projections)


def nr_spanning_check(fam: SubspaceFamily, x, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``x`` lies in ``span{P_i x}``.

    Norm retrieval fails exactly when some ``u`` lies outside the span of its
    own projections: a vector ``v`` orthogonal to every ``P_i u`` but not to
    ``u`` gives the pair ``u + v``, ``u - v`` with equal measurements and
    different norms.
    """
    x, projs = _as_family_vector(fam, x)
    a = np.column_stack([p @ x for p in projs])
    return linalg.rank(np.column_stack([a, x]), tol) == linalg.rank(a, tol)


def pr_spanning_check(fam: SubspaceFamily, x, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``{P_i x}`` spans ``R^N``."""
    x, projs = _as_family_vector(fam, x)
    a = np.column_stack([p @ x for p in projs])
    return linalg.rank(a, tol) == fam.dim


def nonspanning_phase_witness(fam: SubspaceFamily, u, tol: Tolerance = DEFAULT_TOL) -> WitnessPair | None:
    """Phase witness from a vector whose projections fail to span.

    With ``v`` orthogonal to every ``P_i u`` the pair ``(u + v, u - v)`` has
    equal measurements and is not a sign multiple pair.
    """
    u, projs = _as_family_vector(fam, u)
    rows = np.vstack([(p @ u).reshape(1, -1) for p in projs])
    ker = linalg.nullspace(rows, tol)
    if ker.shape[1] == 0:
        return None
    v = ker[:, 0]
    if is_exact(u) and is_exact(v):
        u, v = _scaled_exact(u), _scaled_exact(v)
    else:
        u, v = to_float(u), to_float(v)
        u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
    return WitnessPair(u + v, u - v, kind="phase")


def perp_family(fam: SubspaceFamily, tol: Tolerance = DEFAULT_TOL) -> SubspaceFamily:
    """Member-wise orthogonal complements."""
    return SubspaceFamily(tuple(complement(w, tol) for w in fam), dict(fam.meta))


# ---------------------------------------------------------------------------
# counterexample searches
# ---------------------------------------------------------------------------

def _subset_starts(fam: SubspaceFamily):
    """Unit vectors orthogonal to the sum, or inside the intersection, of member subsets.

    Counterexamples often sit where several projections vanish or act as the
    identity at once; such points form a null set that random starts miss,
    and unlike coordinate vectors they move with the family under rotations.
    """
    n, m = fam.dim, len(fam)
    bases = [to_float(w.basis) for w in fam]
    comps = [np.linalg.svd(b.T)[2][b.shape[1]:].T if b.shape[1] else np.eye(n) for b in bases]
    if (1 << m) <= MAX_START_SUBSETS:
        subsets = itertools.chain.from_iterable(itertools.combinations(range(m), k) for k in range(2, m + 1))
    else:
        subsets = itertools.combinations(range(m), 2)
    out = []
    for sub in subsets:
        for mats in ([bases[i] for i in sub], [comps[i] for i in sub]):
            stacked = np.column_stack(mats)
            if stacked.shape[1] == 0:
                continue
            _, sv, vt = np.linalg.svd(stacked.T)
            r = int(np.count_nonzero(sv > 1e-10 * max(sv[0], 1.0)))
            out.extend(vt[r:])
    return out


def _starts(fam: SubspaceFamily, params: SearchParams, extra=None):
    n = fam.dim
    det = [np.eye(n)[:, i] for i in range(n)]
    for w in fam:
        for j in range(w.dim):
            det.append(to_float(w.basis[:, j]))
    det.extend(_subset_starts(fam))
    if extra is not None:
        det = [to_float(np.asarray(e)) for e in extra] + det
    kept = []
    for d in det:
        nd = np.linalg.norm(d)
        if nd == 0:
            continue
        d = d / nd
        if all(abs(abs(d @ k) - 1) > 1e-12 for k in kept):
            kept.append(d)
    det = kept
    rng = np.random.default_rng(params.seed)
    rand = rng.standard_normal((params.starts, n))
    rand /= np.linalg.norm(rand, axis=1, keepdims=True)
    return det, rand


def _span_residual(projs: np.ndarray, u: np.ndarray, tol: Tolerance):
    a = (projs @ u).T
    q, s, vt = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return u.copy(), np.zeros(projs.shape[0]), 0, q[:, :0]
    r = int(np.count_nonzero(s > tol.rank_rel * s[0] * max(a.shape)))
    q = q[:, :r]
    qu = q.T @ u
    w = u - q @ qu
    c = vt[:r].T @ (qu / s[:r])
    return w, c, r, q


def _refine_nr(u, projs, params: SearchParams, tol: Tolerance):
    """Projected gradient ascent of ``dist(u, span{P_i u})^2`` on the sphere."""
    w, c, r, q = _span_residual(projs, u, tol)
    g = float(w @ w)
    iters = 0
    rank_jump = False
    if g <= 1e-24:
        return u, w, q, iters, rank_jump
    step = 0.5
    for iters in range(1, params.max_iter + 1):
        if g >= 0.25:
            break
        grad = 2.0 * (w - (projs @ w).T @ c)
        grad -= (u @ grad) * u
        gn = np.linalg.norm(grad)
        if gn < 1e-14:
            break
        moved = False
        while step > 1e-12:
            un = u + step * grad / gn
            un /= np.linalg.norm(un)
            wn, cn, rn, qn = _span_residual(projs, un, tol)
            if rn != r:
                rank_jump = True
                step *= 0.5
                continue
            gnew = float(wn @ wn)
            if gnew > g * (1 + 1e-12):
                u, w, c, q, g = un, wn, cn, qn, gnew
                step = min(2 * step, 1.0)
                moved = True
                break
            step *= 0.5
        if not moved:
            break
    return u, w, q, iters, rank_jump


def _norm_witness(fam: SubspaceFamily, projs: np.ndarray, u: np.ndarray, v: np.ndarray, margin: float):
    """Polish ``<P_i u, v> = 0`` and turn the pair into a replayed norm witness."""
    u, v = _polish_pair(projs, u / np.linalg.norm(u), v / np.linalg.norm(v))
    gap = float(u @ v)
    if gap < 0:
        v, gap = -v, -gap
    if gap <= margin:
        return None
    t = 1.0 if gap < 1 - 1e-9 else 0.5
    wp = WitnessPair(u + t * v, u - t * v, kind="norm")
    return wp if replay_witness(wp, fam).ok else None


def _dual_step(projs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Rows ``y`` minimising ``sum_i <P_i x, y>^2`` subject to ``<x, y> = 1``.

    With ``G = sum_i (P_i x)(P_i x)^T`` the minimiser is ``G^+ x / (x^T G^+ x)``;
    tiny eigenvalues are floored so a direction of ``x`` outside the range
    of ``G`` dominates ``y``, which is exactly the failure being sought.
    """
    a = np.einsum("mij,sj->sim", projs, x)
    lam, vec = np.linalg.eigh(a @ a.transpose(0, 2, 1))
    c = np.einsum("sik,si->sk", vec, x)
    floor = 1e-13 * np.maximum(lam[:, -1:], 1e-300)
    y = np.einsum("sik,sk->si", vec, c / np.maximum(lam, floor))
    return y / np.einsum("si,si->s", x, y)[:, None]


def _defect_descent(projs: np.ndarray, starts: np.ndarray, params: SearchParams):
    """Alternating minimisation of ``sum_i <P_i u, v>^2`` with ``<u, v> = 1``, batched.

    Both half-steps are exact, so the objective never increases.  Returns
    unit ``u``, unit ``v``, the normalised objective and the cosine
    ``<u, v>`` per start, plus the number of sweeps.
    """
    u = starts.copy()
    prev = np.full(len(u), np.inf)
    sweeps = 0
    for sweeps in range(1, params.max_iter + 1):
        v = _dual_step(projs, u)
        u = _dual_step(projs, v)
        nu = np.linalg.norm(u, axis=1, keepdims=True)
        u, v = u / nu, v * nu
        obj = np.sum(np.einsum("mij,sj,si->sm", projs, u, v) ** 2, axis=1)
        if np.all((obj <= params.objective_floor) | (obj >= prev * (1 - 1e-6))):
            break
        prev = obj
    nv = np.linalg.norm(v, axis=1)
    return u, v / nv[:, None], obj / nv ** 2, 1.0 / nv, sweeps


def nr_counterexample_search(fam: SubspaceFamily, params: SearchParams = SearchParams(),
                             tol: Tolerance = DEFAULT_TOL, extra_starts=None) -> SearchResult:
    """Multi-start search for a norm-retrieval counterexample.

    Phase one: for a unit start ``u`` the component ``w`` of ``u`` orthogonal
    to ``U = span{P_i u}`` is maximised by projected gradient ascent.  Once
    ``|w|`` exceeds ``witness_margin`` the pair ``u + w/|w|``, ``u - w/|w|``
    has equal measurements (``<P_i u, w> = 0``) and norms differing by
    ``4 |w|``.

    Phase two handles families where ``w`` vanishes on an open set and the
    failures form a null set: from every start, ``sum_i <P_i u, v>^2`` with
    ``<u, v> = 1`` is driven down by alternating exact minimisation, and a
    pair reaching ``objective_floor`` with ``<u, v>`` above the margin is
    polished into a witness.  In both phases the lowest start index wins.

    Deterministic starts (``extra_starts``, coordinate vectors, stored basis
    vectors, subset-derived vectors) precede the seeded random ones.
    """
    projs = fam.float_projections
    det, rand = _starts(fam, params, extra_starts)
    best, total_iters, jumps = 0.0, 0, 0
    for idx, u0 in enumerate(itertools.chain(det, rand)):
        u, w, q, iters, jumped = _refine_nr(u0, projs, params, tol)
        total_iters += iters
        jumps += jumped
        gap = float(np.linalg.norm(w))
        best = max(best, gap)
        if gap > params.witness_margin:
            wp = _norm_witness(fam, projs, u, w / gap, params.witness_margin)
            if wp is not None:
                diag = _search_diag(params, idx + 1, len(det), total_iters, best, jumps)
                diag.update(start_index=idx, phase="span-ascent")
                return SearchResult(True, wp, diag)
    starts = np.vstack([np.array(det).reshape(-1, fam.dim), rand])
    us, vs, defect, cosine, sweeps = _defect_descent(projs, starts, params)
    total_iters += sweeps
    hits = np.flatnonzero((defect <= params.objective_floor) & (cosine > params.witness_margin))
    for idx in hits:
        wp = _norm_witness(fam, projs, us[idx], vs[idx], params.witness_margin)
        if wp is not None:
            diag = _search_diag(params, len(starts), len(det), total_iters, best, jumps)
            diag.update(start_index=int(idx), phase="defect-descent", min_defect=float(defect.min()))
            return SearchResult(True, wp, diag)
    diag = _search_diag(params, len(starts), len(det), total_iters, best, jumps)
    diag["min_defect"] = float(defect.min())
    return SearchResult(False, None, diag)


def _search_diag(params, used, det, iters, best, jumps):
    return {
        "starts_used": used,
        "deterministic_starts": det,
        "iterations": iters,
        "best_objective": best,
        "rank_jumps": jumps,
        "seed": params.seed,
        "witness_margin": params.witness_margin,
    }


def _polish_pair(projs: np.ndarray, u: np.ndarray, v: np.ndarray, steps: int = 30):
    """Gauss-Newton on ``<P_i u, v> = 0`` jointly in unit ``u`` and ``v``.

    Minimum-norm steps move the pair as little as possible, so a candidate
    found up to rank-truncation error becomes exact to rounding.
    """
    n = u.size

    def resid(u, v):
        return (projs @ u) @ v

    r = resid(u, v)
    for _ in range(steps):
        if np.max(np.abs(r)) <= 1e-16:
            break
        jac = np.vstack([np.hstack([projs @ v, projs @ u]),
                         np.concatenate([u, np.zeros(n)])[None, :],
                         np.concatenate([np.zeros(n), v])[None, :]])
        d, *_ = np.linalg.lstsq(jac, -np.concatenate([r, [0.0, 0.0]]), rcond=None)
        un, vn = u + d[:n], v + d[n:]
        un, vn = un / np.linalg.norm(un), vn / np.linalg.norm(vn)
        rn = resid(un, vn)
        if np.linalg.norm(rn) >= np.linalg.norm(r):
            break
        u, v, r = un, vn, rn
    return u, v


def _pr_objective(projs: np.ndarray, u: np.ndarray):
    rows = projs @ u  # (M, N), row i is P_i u
    m, n = rows.shape
    _, s, vt = np.linalg.svd(rows, full_matrices=True)
    v = vt[-1]
    sigma = 0.0 if m < n else float(s[-1])
    return sigma * sigma, v, rows


def _gn_step(projs, u, v, rows):
    r = rows @ v
    ju = projs @ v  # row i is P_i v
    n = u.size
    jac = np.vstack([np.hstack([ju, rows]),
                     np.concatenate([u, np.zeros(n)])[None, :],
                     np.concatenate([np.zeros(n), v])[None, :]])
    rhs = -np.concatenate([r, [0.0, 0.0]])
    d, *_ = np.linalg.lstsq(jac, rhs, rcond=None)
    return d[:n]


def _refine_pr(u, projs, params: SearchParams, polish: int = 0):
    f, v, rows = _pr_objective(projs, u)
    iters = 0
    extra = 0
    for iters in range(1, params.max_iter + 1):
        if f <= params.objective_floor:
            if extra >= polish or f == 0.0:
                break
            extra += 1
        du = _gn_step(projs, u, v, rows)
        alpha = 1.0
        moved = False
        while alpha > 1e-10:
            un = u + alpha * du
            un /= np.linalg.norm(un)
            fn, vn, rn = _pr_objective(projs, un)
            if fn < f:
                stalled = fn > f * (1 - 1e-9)
                u, f, v, rows = un, fn, vn, rn
                moved = not stalled
                break
            alpha *= 0.5
        if not moved:
            break
    return u, v, f, iters


def pr_counterexample_search(fam: SubspaceFamily, params: SearchParams = SearchParams(),
                             tol: Tolerance = DEFAULT_TOL, extra_starts=None) -> SearchResult:
    """Multi-start search for ``u, v`` with ``<P_i u, v> = 0`` for every ``i``.

    Minimises ``f(u) = min_v sum_i <P_i u, v>^2``, the squared smallest
    singular value of the rows ``P_i u``, by Gauss-Newton steps on the joint
    bilinear system with ``v`` re-optimised exactly after every step.  A pair
    reaching ``objective_floor`` is polished and converted into the phase
    witness ``(u + v, u - v)``.
    """
    projs = fam.float_projections
    det, rand = _starts(fam, params, extra_starts)
    best, total_iters = math.inf, 0
    for idx, u0 in enumerate(itertools.chain(det, rand)):
        u, v, f, iters = _refine_pr(u0, projs, params)
        total_iters += iters
        best = min(best, f)
        if f <= params.objective_floor:
            u, v, f, more = _refine_pr(u, projs, params, polish=8)
            u, v = _polish_pair(projs, u, v)
            total_iters += more
            wp = WitnessPair(u + v, u - v, kind="phase")
            if replay_witness(wp, fam).ok:
                diag = _search_diag(params, idx + 1, len(det), total_iters, best, 0)
                diag.update(start_index=idx, u=u.tolist(), v=v.tolist(), objective=f)
                return SearchResult(True, wp, diag)
    return SearchResult(False, None, _search_diag(params, len(det) + len(rand), len(det), total_iters, best, 0))


# ---------------------------------------------------------------------------
# decision pipelines
# ---------------------------------------------------------------------------

def _rank_one_frame(fam: SubspaceFamily) -> FrameSpec | None:
    if any(w.dim > 1 for w in fam):
        return None
    cols = [w.basis for w in fam if w.dim == 1]
    if not cols:
        return None
    mat = np.column_stack(cols)
    return FrameSpec(mat if fam.exact else to_float(mat))


def _dimension_witness(fam, x, kind):
    x = _scaled_exact(x) if is_exact(x) else to_float(x) / np.linalg.norm(to_float(x))
    return WitnessPair(x, 2 * x, kind=kind)


def decide_norm_retrieval_projections(fam: SubspaceFamily, params: SearchParams = SearchParams(),
                                      tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Decide norm retrieval of ``fam``; every status names the rule that fired.

    Order: dimension count, exact partition test for families of lines,
    identity certificate, pooled-basis test, counterexample search.
    """
    diag: dict = {"exact": fam.exact, "steps": []}
    x = nr_dimension_sum_test(fam, tol)
    diag["steps"].append("dimension-sum")
    if x is not None:
        return refute(_dimension_witness(fam, x, "norm"), fam, "dimension-sum", diag)

    lines = _rank_one_frame(fam)
    if lines is not None and lines.count <= MAX_ENUMERATION:
        diag["steps"].append("rank-one-partition")
        v = norm_retrieval_vectors(lines, tol)
        diag["rank_one"] = v.diagnostics
        if v.status is Status.YES_EXACT:
            return Verdict(Status.YES_EXACT, "rank-one-partition", certificate=v.certificate, diagnostics=diag)
        if v.status is Status.NO_WITH_WITNESS:
            return refute(v.witness, fam, "rank-one-partition", diag)

    diag["steps"].append("identity-certificate")
    a = identity_certificate(fam, tol)
    if a is not None:
        return Verdict(Status.YES_EXACT, "identity-certificate", certificate=a, diagnostics=diag)

    diag["steps"].append("pooled-basis")
    try:
        w = pooled_necessary_nr_test(fam, tol)
    except EnumerationGuard as exc:
        diag["pooled_skipped"] = str(exc)
        w = None
    if w is not None:
        return refute(w, fam, "pooled-basis", diag)
    diag["pooled"] = "pass"

    diag["steps"].append("counterexample-search")
    res = nr_counterexample_search(fam, params, tol)
    diag["search"] = res.diagnostics
    if res.found:
        return refute(res.witness, fam, "counterexample-search", diag)
    return Verdict(Status.PROBABLY_YES, "search-exhausted", diagnostics=diag)


def _complement_span_checks(fam: SubspaceFamily, tol: Tolerance, diag: dict):
    """Necessary conditions for phase retrieval via complements.

    For every ``I`` with ``|I| <= N - 2`` the complements of the members
    outside ``I`` must span ``R^N``; ``I`` empty is the plain complement-span
    condition.  Returns ``(rule, x)`` with ``x`` in the common intersection of
    the remaining members, or None.
    """
    n, m = fam.dim, len(fam)
    comps = [complement(w, tol) for w in fam]
    total = sum(math.comb(m, k) for k in range(0, min(n - 2, m) + 1))
    if total > MAX_COMPLEMENT_SUBSETS:
        diag["complement_subsets_skipped"] = total
        sizes = [0]
    else:
        sizes = range(0, max(min(n - 2, m), 0) + 1)
    checked = 0
    for k in sizes:
        for drop in itertools.combinations(range(m), k):
            keep = [i for i in range(m) if i not in drop]
            checked += 1
            cols = [comps[i].basis for i in keep if comps[i].dim]
            exact = all(comps[i].exact for i in keep)
            if cols:
                c = np.column_stack(cols)
                c = c if exact else to_float(c)
                if linalg.rank(c, tol) == n:
                    continue
                x = linalg.nullspace(c.T, tol)[:, 0]
            else:
                x = linalg._identity(n, exact)[:, 0]
            diag["complement_subsets_checked"] = checked
            rule = "complements-span" if k == 0 else "complements-span-after-removal"
            diag["removed"] = list(drop)
            return rule, x
    diag["complement_subsets_checked"] = checked
    return None


def decide_phase_retrieval_projections(fam: SubspaceFamily, params: SearchParams = SearchParams(),
                                       tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Decide phase retrieval of ``fam`` (real case).

    Families of lines are decided exactly by the complement property.  For
    general families a failure of any necessary complement-span condition or
    a successful counterexample search refutes; otherwise ``ProbablyYes``.
    """
    diag: dict = {"exact": fam.exact, "steps": []}
    diag["steps"].append("dimension-sum")
    x = nr_dimension_sum_test(fam, tol)
    if x is not None:
        return refute(_dimension_witness(fam, x, "phase"), fam, "dimension-sum", diag)

    lines = _rank_one_frame(fam)
    if lines is not None and lines.count <= MAX_ENUMERATION:
        diag["steps"].append("complement-property")
        v = complement_property(lines, tol)
        diag["rank_one"] = v.diagnostics
        if v.status is Status.YES_EXACT:
            return Verdict(Status.YES_EXACT, "complement-property", certificate=v.certificate, diagnostics=diag)
        if v.status is Status.NO_WITH_WITNESS:
            return refute(v.witness, fam, "complement-property", diag)

    diag["steps"].append("complements-span")
    hit = _complement_span_checks(fam, tol, diag)
    if hit is not None:
        rule, x = hit
        w = nonspanning_phase_witness(fam, x, tol)
        if w is not None:
            return refute(w, fam, rule, diag)

    diag["steps"].append("counterexample-search")
    res = pr_counterexample_search(fam, params, tol)
    diag["search"] = res.diagnostics
    if res.found:
        return refute(res.witness, fam, "counterexample-search", diag)

    diag["steps"].append("norm-counterexample-search")
    res = nr_counterexample_search(fam, params, tol)
    diag["norm_search"] = res.diagnostics
    if res.found:
        w = res.witness
        return refute(WitnessPair(w.x, w.y, kind="phase"), fam, "norm-counterexample-search", diag)
    return Verdict(Status.PROBABLY_YES, "search-exhausted", diagnostics=diag)
