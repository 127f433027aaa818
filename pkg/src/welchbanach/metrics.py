"""Cross-pairing statistics of a dual pair: correlation, RMS, pseudo potential."""
from __future__ import annotations

import math

import numpy as np

from .asf import DualPair, gram
from .continuous import Equiangularity
from .errors import NegativeRadicand, TooFewVectors


def _offdiag(n: int) -> np.ndarray:
    return ~np.eye(n, dtype=bool)


def frame_correlation(pair: DualPair) -> float:
    """``max_{j != k} |f_j(tau_k)|``."""
    if pair.n < 2:
        raise TooFewVectors("frame correlation needs n >= 2")
    return float(np.max(np.abs(gram(pair))[_offdiag(pair.n)]))


def rms_cross(pair: DualPair) -> float:
    """Root mean square of ``f_j(tau_k) f_k(tau_j)`` over ``j != k``."""
    n = pair.n
    if n < 2:
        raise TooFewVectors("RMS cross relation needs n >= 2")
    g = gram(pair)
    mean = complex(np.sum((g * g.T)[_offdiag(n)])) / (n * (n - 1))
    if mean.real < 0:
        raise NegativeRadicand(
            f"mean cross product {mean.real:.3g} is negative; the spectral hypothesis fails"
        )
    return math.sqrt(mean.real)


def pseudo_frame_potential(pair: DualPair) -> float:
    """``sum_{j,k} f_j(tau_k) f_k(tau_j)``, which is also ``Tra(S^2)``."""
    g = gram(pair)
    return float(np.sum(g * g.T).real)


def equiangularity(pair: DualPair, tol: float = 1e-9) -> Equiangularity:
    if pair.n < 2:
        raise TooFewVectors("equiangularity needs n >= 2")
    sq = np.abs(gram(pair))[_offdiag(pair.n)] ** 2
    gamma = float(np.mean(sq))
    dev = float(np.max(np.abs(sq - gamma)))
    return Equiangularity(dev <= tol, gamma, dev)
