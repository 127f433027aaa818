"""Symmetric tensor powers of a dual pair.

The m-th symmetric power turns every pairing value into its m-th power, so
on the Gram side the lift is simply the entrywise power ``G**m``.  The bounds
module works with that ``n x n`` matrix; :func:`explicit_lift` builds the
lifted vectors in the monomial basis of ``Sym^m(K^d)`` and exists to
cross-check the shortcut.
"""
from __future__ import annotations

import math
import sys
from itertools import combinations_with_replacement

import numpy as np

from .asf import DualPair, LpSpace, gram
from .errors import LiftTooLarge, Overflow
from .numkernel import Spectrum, eigen, hadamard_power

LIFT_CAP = 4096


def sym_dim(d: int, m: int) -> int:
    """Dimension of the space of symmetric m-tensors over a d-dimensional space."""
    if d < 1 or m < 1:
        raise ValueError(f"need d >= 1 and m >= 1, got d={d}, m={m}")
    # C(d+m-1, k) with k = min(m, d-1), built from increasing partial binomials
    # so the loop can stop as soon as the value leaves the machine range
    k = min(m, d - 1)
    value = 1
    for i in range(1, k + 1):
        value = value * (d + m - 1 - k + i) // i
        if value > sys.maxsize:
            raise Overflow(f"C({d + m - 1}, {m}) does not fit in a machine count")
    return value


def sym_basis(d: int, m: int) -> list[tuple[int, ...]]:
    """Exponent tuples ``alpha`` with ``sum(alpha) == m``, in lexicographic order."""
    out = []
    for combo in combinations_with_replacement(range(d), m):
        alpha = [0] * d
        for i in combo:
            alpha[i] += 1
        out.append(tuple(alpha))
    out.sort()
    return out


def multinomial(alpha) -> int:
    out = math.factorial(sum(alpha))
    for a in alpha:
        out //= math.factorial(a)
    return out


def lifted_gram(g, m: int) -> np.ndarray:
    """Gram matrix of the m-th symmetric lift: ``f_j(tau_k) ** m`` entrywise."""
    return hadamard_power(g, m)


def _monomials(rows: np.ndarray, basis, weights: np.ndarray) -> np.ndarray:
    out = np.ones((rows.shape[0], len(basis)), dtype=complex)
    for col, alpha in enumerate(basis):
        for i, a in enumerate(alpha):
            if a:
                out[:, col] *= rows[:, i] ** a
    return out * weights


def explicit_lift(pair: DualPair, m: int) -> DualPair:
    """The pair ``(f_j^{(x)m}, tau_j^{(x)m})`` in coordinates on ``Sym^m``.

    The coordinate at exponent ``alpha`` is ``sqrt(multinomial(alpha)) *
    prod_i x[i]**alpha[i]`` for both vectors and functionals, so that
    ``lift(f)(lift(tau)) == f(tau)**m``.
    """
    big = sym_dim(pair.d, m)
    if big > LIFT_CAP:
        raise LiftTooLarge(f"Sym^{m} of dimension {pair.d} has dimension {big} > {LIFT_CAP}")
    if m == 1:
        return pair
    basis = sym_basis(pair.d, m)
    w = np.sqrt([float(multinomial(a)) for a in basis])
    space = LpSpace(big, pair.space.p, pair.space.field)
    return DualPair(
        space,
        _monomials(pair.vectors, basis, w),
        _monomials(pair.functionals, basis, w),
    )


def lifted_frame_spectrum(pair: DualPair, m: int) -> Spectrum:
    """Spectrum of the frame operator on ``Sym^m``, read off the lifted Gram.

    The ``n`` eigenvalues of ``G**m`` are returned; when ``Sym^m`` is larger
    than ``n`` the remaining eigenvalues are zero and are counted in
    ``zero_padding``.
    """
    s = eigen(lifted_gram(gram(pair), m))
    pad = max(sym_dim(pair.d, m) - pair.n, 0)
    return Spectrum(s.eigenvalues, s.eigvec_condition, s.max_imag, pad)


def is_flat(s: Spectrum, big: int, tol: float = 1e-8) -> bool:
    """Whether a spectrum is that of ``lam * I`` on a space of dimension ``big``.

    The ``big`` largest eigenvalues (implicit zeros included) must coincide
    and any others must vanish, all relative to the spectral radius.
    """
    w = s.full()
    w = w[np.lexsort((w.imag, -w.real))]
    rho = float(np.max(np.abs(w))) if w.size else 0.0
    if big > w.size:
        return False
    if rho == 0.0:
        return True
    top, rest = w[:big], w[big:]
    lam = np.mean(top)
    return bool(
        np.all(np.abs(top - lam) <= tol * rho) and np.all(np.abs(rest) <= tol * rho)
    )


def lifted_tightness(pair: DualPair, m: int, tol: float = 1e-8) -> bool:
    """Tightness of the lifted pair on ``Sym^m`` without building it."""
    return is_flat(lifted_frame_spectrum(pair, m), sym_dim(pair.d, m), tol)
