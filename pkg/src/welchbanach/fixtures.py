"""Reference dual pairs with known Gram matrices, plus random generators."""
from __future__ import annotations

import math

import numpy as np

from .asf import DualPair, LpSpace, hilbert_embed


def dual_basis(d: int, p: float = 2.0, field: str = "real") -> DualPair:
    """Standard basis with its coordinate functionals; ``S = I``, ``G = I``."""
    eye = np.eye(d)
    return DualPair(LpSpace(d, p, field), eye, eye)


def mercedes_benz() -> DualPair:
    """Three unit vectors at 120 degrees in R^2, Hilbert embedded."""
    angles = np.pi / 2 + 2 * np.pi * np.arange(3) / 3
    v = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return hilbert_embed(v, LpSpace(2, 2.0, "real"))


def sic_qubit() -> DualPair:
    """The four tetrahedral qubit states; ``|<tau_j, tau_k>|^2 = 1/3`` off the diagonal."""
    rows = [[1.0, 0.0]]
    for k in range(3):
        phase = np.exp(2j * np.pi * k / 3)
        rows.append([1 / math.sqrt(3), math.sqrt(2 / 3) * phase])
    return hilbert_embed(np.array(rows, dtype=complex), LpSpace(2, 2.0, "complex"))


def hesse_sic() -> DualPair:
    """Nine-element SIC in C^3 from the Weyl-Heisenberg orbit of ``(0, 1, -1)/sqrt 2``."""
    w = np.exp(2j * np.pi / 3)
    fid = np.array([0.0, 1.0, -1.0], dtype=complex) / math.sqrt(2)
    shift = np.roll(np.eye(3), 1, axis=0)
    clock = np.diag(w ** np.arange(3))
    rows = []
    for a in range(3):
        for b in range(3):
            op = np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
            rows.append(op @ fid)
    return hilbert_embed(np.array(rows), LpSpace(3, 2.0, "complex"))


def duplicated_pair() -> DualPair:
    """``{e1, e1, e2}`` with dual functionals in R^2; ``S = diag(2, 1)``."""
    v = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    return DualPair(LpSpace(2, 2.0, "real"), v, v)


def collinear_pair(n: int = 3) -> DualPair:
    """``n`` copies of e1 in R^2; the Gram matrix is all ones, of rank one."""
    v = np.tile([1.0, 0.0], (n, 1))
    return DualPair(LpSpace(2, 2.0, "real"), v, v)


def jordan_pair() -> DualPair:
    """A pair whose frame operator and Gram are both the Jordan block ``[[1,1],[0,1]]``."""
    v = np.eye(2)
    f = np.array([[1.0, 1.0], [0.0, 1.0]])
    return DualPair(LpSpace(2, 2.0, "real"), v, f)


def _gaussian(rng: np.random.Generator, shape, field: str) -> np.ndarray:
    a = rng.standard_normal(shape)
    if field == "complex":
        a = a + 1j * rng.standard_normal(shape)
    return a


def random_pair(rng, n: int, d: int, p: float = 2.0, field: str = "complex") -> DualPair:
    """Independent Gaussian vectors and functionals, unit norm in l^p / l^q."""
    space = LpSpace(d, p, field)
    v = _gaussian(rng, (n, d), field)
    f = _gaussian(rng, (n, d), field)
    v = v / space.norm(v)[:, None]
    f = f / space.dual_norm(f)[:, None]
    return DualPair(space, v, f)


def random_hilbert_pair(rng, n: int, d: int, field: str = "complex", unit: bool = True) -> DualPair:
    v = _gaussian(rng, (n, d), field)
    if unit:
        v = v / np.linalg.norm(v, axis=1, keepdims=True)
    return hilbert_embed(v, LpSpace(d, 2.0, field))
