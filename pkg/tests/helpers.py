"""Shared test utilities: independent oracles kept deliberately simple."""

from __future__ import annotations

import numpy as np

from toepspec import matrixgen
from toepspec.symbol import LaurentSymbol


def ks_distance(xs, ys) -> float:
    """Two-sample Kolmogorov-Smirnov distance between empirical CDFs."""
    xs = np.sort(np.asarray(xs, dtype=float))
    ys = np.sort(np.asarray(ys, dtype=float))
    allv = np.concatenate([xs, ys])
    fx = np.searchsorted(xs, allv, side="right") / len(xs)
    fy = np.searchsorted(ys, allv, side="right") / len(ys)
    return float(np.max(np.abs(fx - fy)))


def det_orders_by_interpolation(symbol: LaurentSymbol, z: complex, e: np.ndarray, delta: float):
    """All coupling-order terms of det(T(a - z) + delta e) at once.

    det(T + x e) is a polynomial of degree n in x; sampling it on a circle of
    radius delta in x and taking an FFT recovers the coefficients c_k, and the
    order-k term is c_k delta^k.  Completely independent of the subset
    enumeration route.
    """
    n = e.shape[0]
    t = matrixgen.toeplitz(symbol, n) - z * np.eye(n)
    m = 2 * (n + 1)
    nodes = delta * np.exp(2j * np.pi * np.arange(m) / m)
    vals = np.array([np.linalg.det(t + x * e) for x in nodes])
    # vals_j = sum_k (c_k delta^k) w^{jk}, so a forward FFT recovers c_k delta^k
    terms = np.fft.fft(vals) / m
    return terms[: n + 1]


def sample_widom_checkable(rng, max_n: int = 40, max_band: int = 4):
    """A random (symbol, z, n) where the LU determinant oracle is reliable.

    z is rejected until it sits off the exceptional set, at winding number 0,
    and at distance >= 0.05 from the symbol curve: there T_n(a - z) stays
    well conditioned, so the double-precision LU log-determinant carries the
    full 1e-8 comparison accuracy.  At nonzero winding the matrix is
    exponentially ill conditioned and the LU side, not the root formula,
    breaks down.
    """
    from toepspec.symbol import (
        curve_samples,
        near_bad_set,
        random_symbol,
        root_profile,
        winding_number,
    )

    while True:
        sym = random_symbol(rng, max_band=max_band)
        curve = curve_samples(sym, 1024)
        z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        if float(np.min(np.abs(curve - z))) < 0.05:
            continue
        if near_bad_set(sym, z, 1e-3).any():
            continue
        prof = root_profile(sym, z)
        if prof.on_circle or prof.infinite:
            continue
        if winding_number(sym, z) != 0:
            continue
        n = int(rng.integers(2, max_n + 1))
        return sym, z, n


def brute_permutation_sign(subset, n) -> int:
    """Sign of the permutation placing `subset` first, by explicit inversion count."""
    rest = [i for i in range(n) if i not in set(subset)]
    perm = list(subset) + rest
    inversions = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1
