"""Deterministic matrix constructions and reproducible noise ensembles.

Matrices are plain dense ``numpy`` arrays of ``complex128``.  Noise sampling
uses the counter-based Philox generator keyed by a 64-bit seed, so a sample
is a pure function of (spec, n, seed) regardless of how callers schedule the
work; independent tasks derive their own streams through :func:`task_seed`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, ShapeError, UnderflowError
from .symbol import LaurentSymbol

NOISE_KINDS = ("complex_gaussian", "real_gaussian", "rademacher", "uniform_pm")
PERT_KINDS = ("none", "poly", "exp", "superexp", "macro")

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def task_seed(master_seed: int, task_index: int) -> int:
    """Derive the seed for one parallel task from a master seed.

    A splitmix64 hash of (master, index) keeps task streams independent and
    identical whatever the thread scheduling.
    """
    return _splitmix64(_splitmix64(master_seed & _MASK64) ^ (task_index & _MASK64))


@dataclass(frozen=True)
class NoiseSpec:
    """An i.i.d. noise ensemble, centered with unit variance per entry."""

    kind: str = "complex_gaussian"

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ConfigError(f"unknown noise kind {self.kind!r}; choose from {NOISE_KINDS}")


@dataclass(frozen=True)
class PerturbationSpec:
    """Coupling-strength schedule delta_N for the additive noise.

    kinds: ``none``; ``poly`` delta = n^-gamma; ``exp`` delta = r^n;
    ``superexp`` delta = exp(-c n log n); ``macro`` delta = sigma n^{-1/2}.
    Only the parameter of the chosen kind is read.
    """

    kind: str = "none"
    gamma: float | None = None
    r: float | None = None
    c: float | None = None
    sigma: float | None = None

    def __post_init__(self):
        if self.kind not in PERT_KINDS:
            raise ConfigError(f"unknown perturbation kind {self.kind!r}; choose from {PERT_KINDS}")
        if self.kind == "poly" and (self.gamma is None):
            raise ConfigError("poly perturbation needs gamma")
        if self.kind == "exp" and (self.r is None or not 0 < self.r < 1):
            raise ConfigError("exp perturbation needs r in (0, 1)")
        if self.kind == "superexp" and (self.c is None or self.c <= 0):
            raise ConfigError("superexp perturbation needs c > 0")
        if self.kind == "macro" and (self.sigma is None or self.sigma <= 0):
            raise ConfigError("macro perturbation needs sigma > 0")

    def coupling(self, n: int) -> float:
        if n < 1:
            raise DomainError("matrix size must be positive")
        if self.kind == "none":
            return 0.0
        if self.kind == "poly":
            delta = float(n) ** -self.gamma
        elif self.kind == "exp":
            delta = self.r**n
        elif self.kind == "superexp":
            delta = math.exp(-self.c * n * math.log(n)) if n > 1 else 1.0
        else:
            delta = self.sigma / math.sqrt(n)
        if delta <= 0.0:
            raise UnderflowError(f"coupling for kind={self.kind!r} underflowed at n={n}")
        return delta

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for name in ("gamma", "r", "c", "sigma"):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "PerturbationSpec":
        if not isinstance(d, dict) or "kind" not in d:
            raise ConfigError("perturbation spec must be a mapping with a 'kind'")
        known = {"kind", "gamma", "r", "c", "sigma"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown perturbation fields: {sorted(extra)}")
        return cls(**d)

    @classmethod
    def parse(cls, text: str) -> "PerturbationSpec":
        """Parse the CLI grammar poly:<gamma> | exp:<r> | superexp:<c> | macro:<sigma> | none."""
        text = text.strip()
        if text == "none":
            return cls("none")
        try:
            kind, val = text.split(":")
            x = float(val)
        except ValueError as exc:
            raise ConfigError(f"cannot parse perturbation {text!r}") from exc
        if kind == "poly":
            return cls("poly", gamma=x)
        if kind == "exp":
            return cls("exp", r=x)
        if kind == "superexp":
            return cls("superexp", c=x)
        if kind == "macro":
            return cls("macro", sigma=x)
        raise ConfigError(f"unknown perturbation kind {kind!r}")


def toeplitz(symbol: LaurentSymbol, n: int) -> np.ndarray:
    """The n x n Toeplitz matrix with entry (i, j) = a_{i-j}."""
    if n < 1:
        raise DomainError("matrix size must be positive")
    m = np.zeros((n, n), dtype=complex)
    idx = np.arange(n)
    diff = idx[:, None] - idx[None, :]
    for k, c in symbol.coeffs.items():
        m[diff == k] = c
    return m


def circulant(symbol: LaurentSymbol, n: int) -> np.ndarray:
    """The circulant with entry (i, j) = a_{(i-j) mod n}, representative in the band.

    Its eigenvalues are a(omega^k) at the n-th roots of unity, which makes it
    the normal-matrix oracle throughout the test suite.
    """
    if n <= symbol.kmax - symbol.kmin:
        raise ShapeError(f"band [{symbol.kmin}, {symbol.kmax}] too wide for a {n} x {n} circulant")
    m = np.zeros((n, n), dtype=complex)
    idx = np.arange(n)
    diff = (idx[:, None] - idx[None, :]) % n
    for k, c in symbol.coeffs.items():
        m[diff == (k % n)] = c
    return m


def jordan(n: int) -> np.ndarray:
    """The nilpotent Jordan block: ones on the first superdiagonal."""
    if n < 2:
        raise DomainError("Jordan block needs n >= 2")
    return np.diag(np.ones(n - 1, dtype=complex), 1)


def corner(n: int, eps: complex) -> np.ndarray:
    """The matrix with single entry eps in the bottom-left corner."""
    if n < 2:
        raise DomainError("corner perturbation needs n >= 2")
    m = np.zeros((n, n), dtype=complex)
    m[n - 1, 0] = eps
    return m


def shifted_symbol(symbol: LaurentSymbol, z: complex, nbar_plus: int) -> LaurentSymbol:
    """The reindexed symbol whose Toeplitz matrices embed T_n(a - z) transposed.

    With a'_j = a_j - z [j = 0], the coefficient a'_j is moved to index
    -(j + nbar_plus - nplus_eff); the result has support inside
    [-nbar_plus, nbar_minus].
    """
    nt = symbol.band
    if not 0 <= nbar_plus <= nt:
        raise DomainError(f"nbar_plus must lie in [0, {nt}]")
    shifted: dict[int, complex] = {}
    npl = symbol.nplus_eff
    for j in range(-symbol.nminus_eff, npl + 1):
        c = symbol.coeffs.get(j, 0j) - (z if j == 0 else 0)
        if c != 0:
            shifted[-(j + nbar_plus - npl)] = c
    return LaurentSymbol(shifted)


def shifted_symbol_toeplitz(symbol: LaurentSymbol, z: complex, n: int, nbar_plus: int) -> np.ndarray:
    """Toeplitz matrix of the shifted symbol; see :func:`shifted_symbol`.

    Satisfies the embedding identity
    ``toeplitz(a - z, N).T == shifted_symbol_toeplitz(a, z, N + nm, band)[:N, nm:]``
    with nm = nminus_eff and band = nminus_eff + nplus_eff.
    """
    if n <= symbol.band:
        raise ShapeError("matrix size must exceed the band width")
    return toeplitz(shifted_symbol(symbol, z, nbar_plus), n)


def sample_noise(spec: NoiseSpec, n: int, seed: int) -> np.ndarray:
    """An n x n draw of i.i.d. unit-variance noise, a pure function of (spec, n, seed)."""
    if n < 1:
        raise DomainError("matrix size must be positive")
    rng = np.random.Generator(np.random.Philox(key=seed & _MASK64))
    if spec.kind == "complex_gaussian":
        g = rng.standard_normal((2, n, n))
        return (g[0] + 1j * g[1]) / math.sqrt(2)
    if spec.kind == "real_gaussian":
        return rng.standard_normal((n, n)).astype(complex)
    if spec.kind == "rademacher":
        return (2.0 * rng.integers(0, 2, size=(n, n)) - 1.0).astype(complex)
    # uniform_pm: uniform on [-sqrt(3), sqrt(3)], variance 1
    return (rng.uniform(-math.sqrt(3), math.sqrt(3), size=(n, n))).astype(complex)


def perturbed(
    symbol: LaurentSymbol,
    n: int,
    pert: PerturbationSpec,
    noise: NoiseSpec,
    seed: int,
) -> np.ndarray:
    """toeplitz(symbol, n) + delta_n * sample_noise(noise, n, seed)."""
    base = toeplitz(symbol, n)
    if pert.kind == "none":
        return base
    delta = pert.coupling(n)
    return base + delta * sample_noise(noise, n, seed)
