"""Small dense linear algebra in two scalar modes.

Matrices are plain numpy arrays.  An array of ``dtype=object`` holding
:class:`fractions.Fraction` entries is *exact* mode; a ``float64`` array is
*float* mode.  Rank decisions run exactly
whenever the input is rational, and every float comparison goes through a
:class:`Tolerance`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational, Real

import numpy as np
from scipy.optimize import nnls

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "ModeError",
    "Unique",
    "Affine",
    "Infeasible",
    "Feasible",
    "Separated",
    "as_matrix",
    "as_vector",
    "is_exact",
    "to_float",
    "to_exact",
    "rank",
    "nullspace",
    "orthonormalize",
    "symmetric_eigen",
    "solve_linear",
    "nonnegative_feasibility",
    "sym_coords",
    "is_zero",
]


class ModeError(ValueError):
    """Exact and float entries were mixed in one matrix."""


@dataclass(frozen=True)
class Tolerance:
    rank_rel: float = 1e-10
    orth_rel: float = 1e-10

    def __post_init__(self):
        if not (self.rank_rel > 0 and self.orth_rel > 0):
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


# ---------------------------------------------------------------------------
# construction and mode handling
# ---------------------------------------------------------------------------

def _parse_entry(v):
    """Return ``(value, kind)`` with kind in {'int', 'exact', 'float'}."""
    if isinstance(v, (bool, np.bool_)):
        raise TypeError(f"boolean entry {v!r} is not a number")
    if isinstance(v, (Integral, np.integer)):
        return Fraction(int(v)), "int"
    if isinstance(v, Rational):
        return Fraction(v), "exact"
    if isinstance(v, str):
        try:
            return Fraction(v.strip()), "exact"
        except ValueError:
            raise ValueError(f"cannot parse {v!r} as a rational number") from None
    if isinstance(v, (Real, np.floating)):
        return float(v), "float"
    raise TypeError(f"unsupported matrix entry {v!r}")


def as_matrix(data, exact: bool | None = None) -> np.ndarray:
    """Build a mode-homogeneous 2-D matrix.

    ``exact=None`` infers the mode: any float entry makes a float matrix, all
    integer/rational entries make an exact one; mixing floats with explicit
    rationals (``Fraction`` or ``"p/q"`` strings) raises :class:`ModeError`.
    ``exact=True`` rejects float entries, ``exact=False`` converts everything
    to float.
    """
    if isinstance(data, np.ndarray) and data.ndim == 2:
        if data.dtype != object:
            if exact:
                if data.dtype.kind in "iu":
                    return _from_ints(data)
                raise ModeError("float entries cannot be used in exact mode")
            if data.dtype.kind in "iub" and exact is None:
                return _from_ints(data)
            return np.asarray(data, dtype=float)
        if exact is False:
            return to_float(data)
    arr = np.array(data, dtype=object)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got {arr.ndim} dimension(s)")
    flat = [_parse_entry(v) for v in arr.ravel()]
    kinds = {k for _, k in flat}
    if exact is False:
        return np.array([float(v) for v, _ in flat], dtype=float).reshape(arr.shape)
    if "float" in kinds:
        if exact:
            raise ModeError("float entries cannot be used in exact mode")
        if "exact" in kinds:
            raise ModeError("matrix mixes rational and float entries")
        return np.array([float(v) for v, _ in flat], dtype=float).reshape(arr.shape)
    out = np.empty(arr.shape, dtype=object)
    out.ravel()[:] = [v for v, _ in flat]
    if out.size == 0 and exact is not True:
        return np.zeros(arr.shape, dtype=float)
    return out


def _from_ints(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=object)
    out.ravel()[:] = [Fraction(int(v)) for v in a.ravel()]
    return out


def as_vector(data, exact: bool | None = None) -> np.ndarray:
    """1-D counterpart of :func:`as_matrix`."""
    m = as_matrix([list(np.asarray(data, dtype=object).ravel())], exact=exact)
    return m[0]


def is_exact(m: np.ndarray) -> bool:
    return np.asarray(m).dtype == object


def to_float(m) -> np.ndarray:
    m = np.asarray(m)
    if m.dtype == object:
        return np.array([float(v) for v in m.ravel()], dtype=float).reshape(m.shape)
    return np.asarray(m, dtype=float)


def to_exact(m) -> np.ndarray:
    """Convert to exact mode; floats are converted by their binary value."""
    m = np.asarray(m)
    if m.dtype == object:
        return m
    out = np.empty(m.shape, dtype=object)
    out.ravel()[:] = [Fraction(v) if m.dtype.kind == "f" else Fraction(int(v)) for v in m.ravel()]
    return out


def _zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=float)


def is_zero(m) -> bool:
    """Exact zero test for exact arrays (no tolerance involved)."""
    return all(v == 0 for v in np.asarray(m).ravel())


def sym_coords(m: np.ndarray) -> np.ndarray:
    """Upper-triangular entries (diagonal included) of a square matrix."""
    iu = np.triu_indices(m.shape[0])
    return m[iu]


# ---------------------------------------------------------------------------
# exact elimination
# ---------------------------------------------------------------------------

def _bareiss_rank(m: np.ndarray) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination on integer rows."""
    rows = []
    for r in m:
        den = 1
        for v in r:
            den = den * v.denominator // math.gcd(den, v.denominator)
        rows.append([int(v * den) for v in r])
    nr, nc = len(rows), (len(rows[0]) if rows else 0)
    prev = 1
    rk = 0
    for c in range(nc):
        if rk == nr:
            break
        piv = max(range(rk, nr), key=lambda i: (abs(rows[i][c]), -i))
        if rows[piv][c] == 0:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        p = rows[rk][c]
        for i in range(rk + 1, nr):
            ri = rows[i]
            f = ri[c]
            rows[i] = [(p * ri[j] - f * rows[rk][j]) // prev for j in range(nc)]
        prev = p
        rk += 1
    return rk


def _rref(m: np.ndarray) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q with largest-magnitude pivoting."""
    a = [[Fraction(v) for v in row] for row in m]
    nr = len(a)
    nc = m.shape[1]
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        piv = max(range(r, nr), key=lambda i: (abs(a[i][c]), -i))
        if a[piv][c] == 0:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [v / p for v in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


# ---------------------------------------------------------------------------
# rank / nullspace / orthonormalization
# ---------------------------------------------------------------------------

def _float_cutoff(s: np.ndarray, shape, tol: Tolerance) -> float:
    return tol.rank_rel * s[0] * max(shape)


def rank(m, tol: Tolerance = DEFAULT_TOL) -> int:
    """Rank of ``m``; exact over Q in exact mode, relative SVD cutoff in float."""
    m = as_matrix(m)
    if m.size == 0:
        return 0
    if is_exact(m):
        return _bareiss_rank(m)
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > _float_cutoff(s, m.shape, tol)))


def nullspace(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Columns spanning ``{v : m v = 0}``.

    Exact mode returns the RREF basis (one column per free variable); float
    mode returns orthonormal right singular vectors below the rank cutoff.
    """
    m = as_matrix(m)
    ncols = m.shape[1]
    if is_exact(m):
        if m.shape[0] == 0:
            return _identity(ncols, True)
        a, pivots = _rref(m)
        free = [c for c in range(ncols) if c not in pivots]
        out = _zeros((ncols, len(free)), True)
        for k, f in enumerate(free):
            out[f, k] = Fraction(1)
            for i, p in enumerate(pivots):
                out[p, k] = -a[i][f]
        return out
    if m.shape[0] == 0 or ncols == 0:
        return np.eye(ncols)
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    if s.size == 0 or s[0] == 0:
        return np.eye(ncols)
    r = int(np.count_nonzero(s > _float_cutoff(s, m.shape, tol)))
    return vt[r:].T.copy()


def _identity(n: int, exact: bool) -> np.ndarray:
    out = _zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def orthonormalize(vectors, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, bool]:
    """Gram-Schmidt on the columns of ``vectors``; dependent columns are dropped.

    Returns ``(basis, unit)``.  Float mode runs modified Gram-Schmidt with one
    re-orthogonalization pass and returns orthonormal columns (``unit=True``).
    Exact mode returns an exactly orthogonal, generally non-unit basis
    (``unit=False``) because normalizing would leave the rationals.
    """
    v = as_matrix(vectors)
    n, k = v.shape
    if is_exact(v):
        basis: list[np.ndarray] = []
        sq: list[Fraction] = []
        for j in range(k):
            w = v[:, j].copy()
            for b, bb in zip(basis, sq):
                w = w - (np.dot(b, w) / bb) * b
            if not is_zero(w):
                basis.append(w)
                sq.append(np.dot(w, w))
        out = _zeros((n, len(basis)), True)
        for j, b in enumerate(basis):
            out[:, j] = b
        return out, False

    scale = max((np.linalg.norm(v[:, j]) for j in range(k)), default=0.0)
    cut = tol.rank_rel * max(n, k, 1) * scale
    cols: list[np.ndarray] = []
    for j in range(k):
        w = v[:, j].astype(float).copy()
        for _ in range(2):
            for q in cols:
                w -= np.dot(q, w) * q
        nw = np.linalg.norm(w)
        if nw > cut and nw > 0:
            cols.append(w / nw)
    if not cols:
        return np.zeros((n, 0)), True
    return np.column_stack(cols), True


# ---------------------------------------------------------------------------
# symmetric eigenproblem (cyclic Jacobi)
# ---------------------------------------------------------------------------

def symmetric_eigen(s, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues sorted in
    descending order and eigenvectors as orthonormal columns.
    """
    a = to_float(as_matrix(s)).copy()
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"symmetric_eigen needs a square matrix, got {a.shape}")
    n = a.shape[0]
    scale = np.linalg.norm(a)
    v = np.eye(n)
    if n == 0 or scale == 0:
        return np.zeros(n), v
    if np.linalg.norm(a - a.T) > 1e-12 * scale:
        raise ValueError("symmetric_eigen: input is not symmetric")
    a = 0.5 * (a + a.T)
    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= eps * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= eps * eps * scale:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                sn = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - sn * cq
                a[:, q] = sn * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - sn * rq
                a[q, :] = sn * rp + c * rq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - sn * vq
                v[:, q] = sn * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


# ---------------------------------------------------------------------------
# linear systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Unique:
    x: np.ndarray
    residual: float = 0.0


@dataclass(frozen=True)
class Affine:
    x0: np.ndarray
    kernel: np.ndarray
    residual: float = 0.0


@dataclass(frozen=True)
class Infeasible:
    residual: float


def solve_linear(a, b, tol: Tolerance = DEFAULT_TOL) -> Unique | Affine | Infeasible:
    """Classify and solve ``a x = b``.

    Exact mode classifies the solution set exactly (free variables of the
    particular solution are set to zero).  Float mode takes the least-squares
    solution and reports :class:`Infeasible` when its residual exceeds the
    relative rank tolerance.
    """
    a = as_matrix(a)
    exact = is_exact(a)
    b = as_vector(b, exact=exact if exact else False)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"system has {a.shape[0]} rows but right-hand side has {b.shape[0]}")
    n = a.shape[1]
    if exact:
        aug = np.empty((a.shape[0], n + 1), dtype=object)
        aug[:, :n] = a
        aug[:, n] = b
        rr, pivots = _rref(aug)
        if n in pivots:
            xf, *_ = np.linalg.lstsq(to_float(a), to_float(b), rcond=None)
            res = float(np.linalg.norm(to_float(a) @ xf - to_float(b))) if n else float(np.linalg.norm(to_float(b)))
            return Infeasible(residual=res)
        x = _zeros(n, True)
        for i, p in enumerate(pivots):
            x[p] = rr[i][n]
        kern = nullspace(a, tol)
        if kern.shape[1] == 0:
            return Unique(x)
        return Affine(x, kern)

    if n == 0:
        res = float(np.linalg.norm(b))
        return Unique(np.zeros(0), res) if res <= tol.rank_rel else Infeasible(res)
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    res = float(np.linalg.norm(a @ x - b))
    scale = max(np.linalg.norm(b), np.linalg.norm(a) * np.linalg.norm(x), 1e-300)
    if res > tol.rank_rel * max(a.shape) * scale:
        return Infeasible(residual=res)
    kern = nullspace(a, tol)
    if kern.shape[1] == 0:
        return Unique(x, res)
    return Affine(x, kern, res)


@dataclass(frozen=True)
class Feasible:
    c: np.ndarray
    residual: float


@dataclass(frozen=True)
class Separated:
    """Farkas certificate: ``y @ a <= 0`` componentwise and ``y @ b > 0``."""
    y: np.ndarray
    residual: float


FEASIBILITY_REL = 1e-8


def nonnegative_feasibility(a, b, maxiter: int | None = None) -> Feasible | Separated:
    """Decide whether ``a c = b`` has a solution with ``c >= 0``.

    Solves the nonnegative least-squares problem with the Lawson-Hanson active
    set method.  At the optimum the residual ``y = b - a c`` satisfies
    ``a.T y <= 0`` and ``y.b = |y|^2``, so when the problem is infeasible the
    residual itself separates ``b`` from the cone generated by the columns.
    """
    a = to_float(as_matrix(a))
    b = to_float(np.asarray(b, dtype=object) if not isinstance(b, np.ndarray) else b).ravel()
    bn = float(np.linalg.norm(b))
    if a.shape[1] == 0 or bn == 0.0:
        c = np.zeros(a.shape[1])
        if bn == 0.0:
            return Feasible(c, 0.0)
        return Separated(b / bn, bn)
    c, rnorm = nnls(a, b, maxiter=maxiter or 50 * a.shape[1])
    if rnorm <= FEASIBILITY_REL * bn:
        return Feasible(c, float(rnorm))
    y = b - a @ c
    ya = y @ a
    an = np.linalg.norm(a)
    slack = 1e-10 * an * np.linalg.norm(y)
    if np.max(ya) > slack or y @ b <= slack * bn:
        raise ArithmeticError(
            f"separating certificate failed verification (max y.A = {np.max(ya):.3e}, y.b = {y @ b:.3e})"
        )
    return Separated(y / np.linalg.norm(y), float(rnorm))
