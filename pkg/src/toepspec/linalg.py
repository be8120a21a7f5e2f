"""Dense complex linear-algebra kernels behind a small, stable surface.

Determinants are always carried as (log magnitude, unit phase) pairs: the
determinants met here span thousands of orders of magnitude, so they are
never exponentiated internally.  Singular values follow the nondecreasing
convention s_1 <= ... <= s_n.  The heavy factorizations delegate to
LAPACK through numpy/scipy; the smallest-singular-value fast path is a
two-sided inverse iteration with LU reuse, falling back to a full SVD when
it stagnates.  All kernels are reentrant and deterministic.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import ConvergenceError, ShapeError


def _lu_factor_quiet(a):
    # exactly singular factors are an expected, handled branch here
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        return sla.lu_factor(a, check_finite=False)


# Fixed Philox keys for the deterministic start vectors of the iterative kernels.
_SMIN_KEY = 0x5EEDC0DE
_EIGVEC_KEY = 0x5EEDBEEF

_SMIN_MAX_ITER = 50
_SMIN_RTOL = 1e-10

# start vectors cached per (key, n): generator construction would otherwise
# dominate the many small solves on pseudospectrum grids
_START_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _start_vector(key: int, n: int) -> np.ndarray:
    cached = _START_CACHE.get((key, n))
    if cached is None:
        rng = np.random.Generator(np.random.Philox(key=key))
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        cached = v / np.linalg.norm(v)
        _START_CACHE[(key, n)] = cached
    return cached.copy()


def _require_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class LogDet:
    """det = exp(log_abs) * phase; log_abs = -inf and phase = 0 flag singularity."""

    log_abs: float
    phase: complex


def lu_logdet(m: np.ndarray) -> LogDet:
    """Log-determinant from a partial-pivoted LU factorization."""
    m = _require_square(m)
    if m.shape[0] == 0:
        return LogDet(0.0, 1.0 + 0j)
    lu, piv = _lu_factor_quiet(m)
    diag = np.diag(lu)
    if np.any(diag == 0):
        return LogDet(-math.inf, 0j)
    log_abs = float(np.sum(np.log(np.abs(diag))))
    phase = complex(np.prod(diag / np.abs(diag)))
    swaps = int(np.sum(piv != np.arange(len(piv))))
    if swaps % 2:
        phase = -phase
    return LogDet(log_abs, phase)


def eigenvalues(m: np.ndarray) -> np.ndarray:
    """All n eigenvalues with multiplicity (Hessenberg reduction + shifted QR)."""
    m = _require_square(m)
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc


@dataclass(frozen=True)
class SVDResult:
    """Singular triplets with values sorted nondecreasing.

    When vectors are requested, right_vectors[:, i] = e_i and
    left_vectors[:, i] = f_i satisfy A e_i = s_i f_i and A* f_i = s_i e_i.
    """

    singular_values: np.ndarray
    left_vectors: np.ndarray | None = None
    right_vectors: np.ndarray | None = None


def svd(m: np.ndarray, want_vectors: bool = False) -> SVDResult:
    m = _require_square(m)
    try:
        if not want_vectors:
            s = np.linalg.svd(m, compute_uv=False)
            return SVDResult(singular_values=s[::-1].copy())
        u, s, vh = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD iteration failed: {exc}") from exc
    order = slice(None, None, -1)
    return SVDResult(
        singular_values=s[order].copy(),
        left_vectors=u[:, order].copy(),
        right_vectors=vh.conj().T[:, order].copy(),
    )


def smallest_singular(m: np.ndarray) -> float:
    """s_min(m) via inverse iteration on (A A*)^{-1} with LU reuse.

    Exactly singular matrices return 0.  Stagnation falls back to the full
    SVD, so the result always agrees with :func:`svd` up to the iteration
    tolerance.
    """
    m = _require_square(m)
    n = m.shape[0]
    if n == 1:
        return float(abs(m[0, 0]))
    if n <= 24:
        # at this size the direct SVD beats factor-plus-iterate, and near-tied
        # smallest singular values (Voronoi boundaries of normal matrices)
        # cannot stall the iteration
        return float(np.linalg.svd(m, compute_uv=False)[-1])
    try:
        lu, piv = _lu_factor_quiet(m)
    except ValueError:
        return float(svd(m).singular_values[0])
    diag = np.abs(np.diag(lu))
    if diag.min() == 0.0:
        return 0.0
    v = _start_vector(_SMIN_KEY, n)
    s_prev = math.inf
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(_SMIN_MAX_ITER):
            u = sla.lu_solve((lu, piv), v, trans=0, check_finite=False)
            w = sla.lu_solve((lu, piv), u, trans=2, check_finite=False)
            nw = np.linalg.norm(w)
            if not np.isfinite(nw):
                # the solve overflowed: numerically singular
                return 0.0
            if nw == 0.0:
                return float(svd(m).singular_values[0])
            f = w / nw
            s_est = float(np.linalg.norm(m.conj().T @ f))
            if abs(s_est - s_prev) <= _SMIN_RTOL * max(s_est, 1e-300):
                return s_est
            s_prev = s_est
            v = f
    return float(svd(m).singular_values[0])


def eigenvector(m: np.ndarray, lam: complex, max_iter: int = 50) -> np.ndarray:
    """Unit right eigenvector for a computed eigenvalue, by shifted inverse iteration.

    The residual contract is ||(m - lam I) v|| <= 1e-6 ||m||; stagnation above
    that raises :class:`ConvergenceError` with the best iterate attached.
    """
    m = _require_square(m)
    n = m.shape[0]
    # ||m||_F / sqrt(n) lower-bounds the spectral norm, so the residual
    # contract is met without an extra O(n^3) norm computation per call
    scale = float(np.linalg.norm(m)) / math.sqrt(n)
    shift = complex(lam)
    a = m - shift * np.eye(n)
    try:
        lu, piv = _lu_factor_quiet(a)
        if np.abs(np.diag(lu)).min() == 0.0:
            raise np.linalg.LinAlgError("exact singularity")
    except (ValueError, np.linalg.LinAlgError):
        # nudge off the exact eigenvalue so the factorization exists
        shift = shift + 1e-13 * max(scale, 1.0)
        a = m - shift * np.eye(n)
        lu, piv = _lu_factor_quiet(a)
    v = _start_vector(_EIGVEC_KEY, n)
    tol = 1e-6 * max(scale, 1e-300)
    best = v
    best_res = math.inf
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(max_iter):
            w = sla.lu_solve((lu, piv), v, trans=0, check_finite=False)
            nw = np.linalg.norm(w)
            if not np.isfinite(nw) or nw == 0.0:
                break
            v = w / nw
            res = float(np.linalg.norm(m @ v - lam * v))
            if res < best_res:
                best, best_res = v, res
            if res <= tol:
                return v
    if best_res <= tol:
        return best
    raise ConvergenceError(
        f"inverse iteration stagnated at residual {best_res:.3e} (tol {tol:.3e})",
        partial=best,
    )
