"""Small dense linear algebra used by every other module.

Nothing here knows about frames: matrices in, eigenvalues/traces/ranks out.
All functions are pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NegativeSpectrum, NonSquare, NumericalFailure


@dataclass(frozen=True)
class ToleranceConfig:
    """Relative tolerances for the numerical stand-ins of spectral hypotheses.

    ``eig_imag_tol`` and ``nonneg_tol`` are relative to the spectral radius,
    ``rank_tol`` to the largest singular value.  ``diag_cond_max`` caps the
    condition number of the eigenvector matrix for a matrix to count as
    diagonalizable.
    """

    eig_imag_tol: float = 1e-9
    nonneg_tol: float = 1e-9
    rank_tol: float = 1e-10
    diag_cond_max: float = 1e8

    def __post_init__(self):
        for name in ("eig_imag_tol", "nonneg_tol", "rank_tol", "diag_cond_max"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")


DEFAULT_TOLERANCES = ToleranceConfig()


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a square matrix plus conditioning information.

    ``zero_padding`` counts additional eigenvalues known to be exactly zero
    that are not stored (used when the spectrum of a large operator is read
    off a smaller matrix sharing its nonzero eigenvalues).
    """

    eigenvalues: np.ndarray
    eigvec_condition: float
    max_imag: float
    zero_padding: int = 0

    @property
    def spectral_radius(self) -> float:
        if self.eigenvalues.size == 0:
            return 0.0
        return float(np.max(np.abs(self.eigenvalues)))

    @property
    def order(self) -> int:
        return int(self.eigenvalues.size + self.zero_padding)

    def full(self) -> np.ndarray:
        """Stored eigenvalues followed by the implicit zeros."""
        pad = np.zeros(self.zero_padding, dtype=complex)
        return np.concatenate([self.eigenvalues.astype(complex), pad])


class SpectralVerdict(NamedTuple):
    diagonalizable: bool
    nonneg: bool

    @property
    def ok(self) -> bool:
        return self.diagonalizable and self.nonneg


def as_square(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise NonSquare(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericalFailure("matrix has non-finite entries")
    return a


def _sort_eigenvalues(w: np.ndarray) -> np.ndarray:
    # descending real part, ties broken by ascending imaginary part
    return np.lexsort((w.imag, -w.real))


def eigen(m) -> Spectrum:
    """Eigenvalues of a square matrix, sorted by descending real part.

    Hermitian input goes through ``eigh`` (orthonormal eigenvectors, condition
    exactly 1); anything else through ``eig`` with the 2-norm condition number
    of the normalized eigenvector matrix as the diagonalizability proxy.
    """
    a = as_square(m)
    scale = max(float(np.max(np.abs(a))), 1e-300)
    try:
        if np.allclose(a, a.conj().T, rtol=0.0, atol=1e-14 * scale):
            w = np.linalg.eigvalsh((a + a.conj().T) / 2).astype(complex)
            cond = 1.0
        else:
            w, v = np.linalg.eig(a)
            w = w.astype(complex)
            s = np.linalg.svd(v, compute_uv=False)
            cond = float(s[0] / s[-1]) if s[-1] > 0 else float("inf")
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(str(exc)) from exc
    w = w[_sort_eigenvalues(w)]
    return Spectrum(w, cond, float(np.max(np.abs(w.imag))))


def spectral_verdict(s: Spectrum, t: ToleranceConfig = DEFAULT_TOLERANCES) -> SpectralVerdict:
    diagonalizable = bool(s.eigvec_condition <= t.diag_cond_max)
    rho = s.spectral_radius
    if rho == 0.0:
        return SpectralVerdict(diagonalizable, True)
    w = s.eigenvalues
    nonneg = bool(
        np.all(np.abs(w.imag) <= t.eig_imag_tol * rho)
        and np.all(w.real >= -t.nonneg_tol * rho)
    )
    return SpectralVerdict(diagonalizable, nonneg)


def trace(m) -> complex:
    return complex(np.trace(as_square(m)))


def trace_power(s: Spectrum, r: float, t: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """Sum of ``lambda**r`` over a non-negative spectrum.

    Real parts are clamped at zero first, so eigenvalues that are zero up to
    rounding contribute nothing even for ``r < 1``.
    """
    if not r > 0:
        raise ValueError(f"exponent must be positive, got {r!r}")
    if not spectral_verdict(s, t).nonneg:
        raise NegativeSpectrum("trace power needs a non-negative real spectrum")
    lam = np.clip(s.eigenvalues.real, 0.0, None)
    return float(np.sum(lam**r))


def hadamard_power(g, m: int) -> np.ndarray:
    if int(m) != m or m < 1:
        raise ValueError(f"Hadamard exponent must be a positive integer, got {m!r}")
    return np.asarray(g) ** int(m)


def numerical_rank(m, t: ToleranceConfig = DEFAULT_TOLERANCES) -> int:
    a = np.asarray(m)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > t.rank_tol * s[0]))
