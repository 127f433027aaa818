"""Dual pairs of vectors and functionals on finite-dimensional l^p spaces.

A :class:`DualPair` stores ``n`` vectors ``tau_j`` as the rows of ``vectors``
and ``n`` functionals ``f_j`` as the coefficient rows of ``functionals``.
Functionals act bilinearly, ``f(x) = sum_i f[i] * x[i]`` with no complex
conjugation; the Hilbert case is obtained with :func:`hilbert_embed`, which
stores the conjugated coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, InvalidPair, WrongExponent

REAL_TOL = 1e-12


@dataclass(frozen=True)
class LpSpace:
    """``K^dim`` with the l^p norm; ``p = math.inf`` is the max norm."""

    dim: int
    p: float = 2.0
    field: str = "complex"

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")
        if not (self.p >= 1):
            raise ValueError(f"p must lie in [1, inf], got {self.p!r}")
        if self.field not in ("real", "complex"):
            raise ValueError(f"field must be 'real' or 'complex', got {self.field!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "p", float(self.p))

    @property
    def q(self) -> float:
        """Conjugate exponent, ``1/p + 1/q = 1``."""
        if self.p == 1.0:
            return math.inf
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)

    @property
    def is_complex(self) -> bool:
        return self.field == "complex"

    def norm(self, x) -> np.ndarray:
        """l^p norm along the last axis."""
        return lp_norm(x, self.p)

    def dual_norm(self, f) -> np.ndarray:
        return lp_norm(f, self.q)


def lp_norm(x, p: float) -> np.ndarray:
    a = np.abs(np.asarray(x))
    if math.isinf(p):
        return np.max(a, axis=-1)
    if p == 1.0:
        return np.sum(a, axis=-1)
    # scale by the largest entry so a**p cannot overflow
    top = np.max(a, axis=-1, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    return np.squeeze(safe, -1) * np.sum((a / safe) ** p, axis=-1) ** (1.0 / p)


def _coerce_rows(rows, dim: int, field: str, what: str) -> np.ndarray:
    try:
        a = np.array(rows, dtype=complex)  # copy: the stored array is frozen
    except (TypeError, ValueError) as exc:
        raise InvalidPair(f"{what}: cannot read as a numeric array ({exc})") from exc
    if a.ndim == 1 and a.size == 0:
        a = a.reshape(0, dim)
    if a.ndim != 2:
        raise InvalidPair(f"{what}: expected an n x d array, got shape {a.shape}")
    if a.shape[1] != dim:
        raise DimensionMismatch(f"{what}: rows have length {a.shape[1]}, space has dim {dim}")
    if not np.all(np.isfinite(a)):
        raise InvalidPair(f"{what}: entries must be finite")
    if field == "real":
        if np.any(np.abs(a.imag) > REAL_TOL):
            raise InvalidPair(f"{what}: real field but entries have imaginary parts")
        a = a.real.astype(complex)
    return a


@dataclass(frozen=True, eq=False)
class DualPair:
    """Vectors ``tau_j`` (rows of ``vectors``) and functionals ``f_j`` in the dual.

    Both arrays are stored as complex ``n x d`` arrays and are made read-only.
    """

    space: LpSpace
    vectors: np.ndarray
    functionals: np.ndarray

    def __post_init__(self):
        v = _coerce_rows(self.vectors, self.space.dim, self.space.field, "vectors")
        f = _coerce_rows(self.functionals, self.space.dim, self.space.field, "functionals")
        if v.shape != f.shape:
            raise DimensionMismatch(
                f"{v.shape[0]} vectors but {f.shape[0]} functionals; counts must match"
            )
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "functionals", f)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def d(self) -> int:
        return self.space.dim

    def scaled(self, c: complex) -> "DualPair":
        """The pair ``(c f_j, tau_j / c)``, which has the same Gram matrix."""
        return DualPair(self.space, self.vectors / c, self.functionals * c)


class Tightness(NamedTuple):
    tight: bool
    lam: complex


class NormalizationReport(NamedTuple):
    max_vec_norm_dev: float
    max_fun_norm_dev: float
    max_pairing_dev: float

    @property
    def worst(self) -> float:
        return max(self)


def pairing(pair: DualPair, j: int, k: int) -> complex:
    """``f_j(tau_k)``; indices are zero-based."""
    n = pair.n
    if not (0 <= j < n and 0 <= k < n):
        raise IndexOutOfRange(f"indices ({j}, {k}) outside 0..{n - 1}")
    return complex(np.dot(pair.functionals[j], pair.vectors[k]))


def gram(pair: DualPair) -> np.ndarray:
    """``G[j, k] = f_j(tau_k)``, i.e. analysis composed with synthesis."""
    return pair.functionals @ pair.vectors.T


def frame_operator(pair: DualPair) -> np.ndarray:
    """Matrix of ``x -> sum_j f_j(x) tau_j``, i.e. synthesis composed with analysis."""
    return pair.vectors.T @ pair.functionals


def analysis(pair: DualPair, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (pair.d,):
        raise DimensionMismatch(f"expected a vector of length {pair.d}, got shape {x.shape}")
    return pair.functionals @ x


def synthesis(pair: DualPair, a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (pair.n,):
        raise DimensionMismatch(f"expected {pair.n} coefficients, got shape {a.shape}")
    return pair.vectors.T @ a


def trace_S(pair: DualPair) -> complex:
    """Trace of the frame operator, computed as ``sum_j f_j(tau_j)``."""
    return complex(np.sum(np.einsum("ji,ji->j", pair.functionals, pair.vectors)))


def trace_S2(pair: DualPair) -> complex:
    """Trace of the squared frame operator, ``sum_{j,k} f_j(tau_k) f_k(tau_j)``."""
    g = gram(pair)
    return complex(np.sum(g * g.T))


def tightness(pair: DualPair, tol: float = 1e-8) -> Tightness:
    s = frame_operator(pair)
    lam = trace_S(pair) / pair.d
    dev = np.max(np.abs(s - lam * np.eye(pair.d)))
    return Tightness(bool(dev <= tol * max(1.0, abs(lam))), lam)


def normalization_report(pair: DualPair) -> NormalizationReport:
    vec = pair.space.norm(pair.vectors)
    fun = pair.space.dual_norm(pair.functionals)
    diag = np.einsum("ji,ji->j", pair.functionals, pair.vectors)
    if pair.n == 0:
        return NormalizationReport(0.0, 0.0, 0.0)
    return NormalizationReport(
        float(np.max(np.abs(vec - 1.0))),
        float(np.max(np.abs(fun - 1.0))),
        float(np.max(np.abs(diag - 1.0))),
    )


def is_normalized(pair: DualPair, tol: float = 1e-9) -> bool:
    """Whether ``f_j(tau_j) = 1`` for every j (norms are not consulted)."""
    return normalization_report(pair).max_pairing_dev <= tol


def hilbert_embed(vectors, space: LpSpace | None = None) -> DualPair:
    """Pair each vector with ``h -> <h, tau_j>``, stored as conjugated coordinates."""
    v = np.asarray(vectors, dtype=complex)
    if space is None:
        field = "complex" if np.any(v.imag != 0) else "real"
        space = LpSpace(v.shape[-1], 2.0, field)
    if space.p != 2.0:
        raise WrongExponent(f"Hilbert embedding needs p = 2, got p = {space.p}")
    return DualPair(space, v, v.conj())


def is_hilbert_embedded(pair: DualPair, tol: float = 1e-12) -> bool:
    if pair.space.p != 2.0:
        return False
    scale = max(1.0, float(np.max(np.abs(pair.vectors), initial=0.0)))
    return bool(np.all(np.abs(pair.functionals - pair.vectors.conj()) <= tol * scale))
