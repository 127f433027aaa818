"""Continuous dual families over finite atomic measures.

A measure is a list of atoms with positive weights; integrals become
weighted sums and the diagonal of the product space has mass
``sum_a w_a**2``.  With all weights equal to one every quantity here reduces
to its discrete counterpart in :mod:`welchbanach.bounds`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, NamedTuple, Sequence

import numpy as np

from .asf import DualPair, gram
from .bounds import (
    EQ_TOL,
    BoundRecord,
    _check_normalized,
    _hypothesis_notes,
    _max_forms,
    _real_part,
    _sum_form,
    _tightness_note,
    _trace_power_record,
    diagnose,
    make_record,
)
from .errors import DegenerateCount, DegenerateMeasure, DimensionMismatch, NonPositiveMass
from .numkernel import DEFAULT_TOLERANCES, ToleranceConfig
from .symlift import lifted_gram, sym_dim


@dataclass(frozen=True, eq=False)
class FiniteMeasure:
    atoms: tuple
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        atoms = tuple(self.atoms)
        if len(atoms) != w.size:
            raise DimensionMismatch(f"{len(atoms)} atoms but {w.size} weights")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise NonPositiveMass("atom weights must be finite and strictly positive")
        w.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", w)

    @classmethod
    def counting(cls, n: int) -> "FiniteMeasure":
        return cls(tuple(range(n)), np.ones(n))

    @classmethod
    def uniform(cls, n: int, weight: float) -> "FiniteMeasure":
        return cls(tuple(range(n)), np.full(n, float(weight)))

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def diag_mass(self) -> float:
        """Product measure of the diagonal, ``sum w_a^2``."""
        return float(np.sum(self.weights**2))

    @property
    def offdiag_mass(self) -> float:
        # sum_{a != b} w_a w_b, computed without cancellation
        w = self.weights
        return float(np.sum(w * (np.sum(w) - w)))


@dataclass(frozen=True, eq=False)
class ContinuousASF:
    """Row ``a`` of ``pair`` holds ``(f_a, tau_a)`` for atom ``a`` of ``measure``."""

    measure: FiniteMeasure
    pair: DualPair

    def __post_init__(self):
        if self.measure.size != self.pair.n:
            raise DimensionMismatch(
                f"measure has {self.measure.size} atoms but the pair has {self.pair.n} rows"
            )

    @property
    def d(self) -> int:
        return self.pair.d


def counting(pair: DualPair) -> ContinuousASF:
    return ContinuousASF(FiniteMeasure.counting(pair.n), pair)


def cont_frame_operator(casf: ContinuousASF) -> np.ndarray:
    w = casf.measure.weights
    return casf.pair.vectors.T @ (w[:, None] * casf.pair.functionals)


def cont_trace(casf: ContinuousASF) -> complex:
    return complex(np.sum(casf.measure.weights * np.diag(gram(casf.pair))))


def cont_trace2(casf: ContinuousASF) -> complex:
    w = casf.measure.weights
    g = gram(casf.pair)
    return complex(np.sum(np.outer(w, w) * g * g.T))


def weighted_lifted_gram(casf: ContinuousASF, m: int) -> np.ndarray:
    """``W^{1/2} G^{(m)} W^{1/2}``; its nonzero spectrum is that of the lifted frame operator."""
    r = np.sqrt(casf.measure.weights)
    return r[:, None] * lifted_gram(gram(casf.pair), m) * r[None, :]


def cont_welch_check(
    casf: ContinuousASF, m: int = 1, tol: float = EQ_TOL, t: ToleranceConfig = DEFAULT_TOLERANCES
) -> tuple[BoundRecord, BoundRecord, BoundRecord]:
    """Sum form plus the product and single sup forms of the continuous Welch bound."""
    mu = casf.measure
    if mu.size < 2:
        raise DegenerateMeasure("a single atom leaves the off-diagonal with zero mass")
    g = gram(casf.pair)
    big = sym_dim(casf.d, m)
    _, lhs_c, _, sum_rhs = _sum_form(g, m, big, mu.weights)
    diag = diagnose(weighted_lifted_gram(casf, m), t, max(big - mu.size, 0))
    notes = _hypothesis_notes(diag, f"lifted continuous operator (m={m})")
    lhs, real_ok = _real_part(lhs_c, notes, max(1.0, abs(sum_rhs)))
    hyp = diag.diagonalizable and diag.nonneg and real_ok
    sum_rec = _tightness_note(
        make_record(f"cont_welch_sum[m={m}]", lhs, sum_rhs, hyp, notes, tol), diag, big, tol
    )
    diag_term = float(np.sum(mu.weights**2 * np.abs(np.diag(g)) ** (2 * m)))
    prod, single = _max_forms(g, m, sum_rhs, diag_term, mu.offdiag_mass, hyp,
                              _hypothesis_notes(diag, f"lifted continuous operator (m={m})"),
                              tol, "cont_welch")
    return sum_rec, prod, single


def cont_trace_power_check(
    casf: ContinuousASF, r: float, tol: float = EQ_TOL, t: ToleranceConfig = DEFAULT_TOLERANCES
) -> BoundRecord:
    return _trace_power_record(f"cont_trace_power[r={r:g}]", cont_frame_operator(casf),
                               cont_trace(casf), casf.d, r, tol, t)


def cont_p_check(
    casf: ContinuousASF, p: float, tol: float = EQ_TOL, t: ToleranceConfig = DEFAULT_TOLERANCES
) -> BoundRecord:
    """Weighted ``|pairing products|^{p/2}`` integral against its Hoelder floor."""
    if not (2 < p < math.inf):
        raise ValueError(f"p must lie in (2, inf), got {p!r}")
    _check_normalized(casf.pair)
    mu = casf.measure
    if mu.size < 2:
        raise DegenerateMeasure("a single atom leaves the off-diagonal with zero mass")
    base = mu.total_mass**2 / casf.d - mu.diag_mass
    if base < -1e-12 * mu.total_mass**2:
        raise DegenerateCount("mu(Omega)^2 / d is below the diagonal mass; the floor is undefined")
    base = max(base, 0.0)
    g = gram(casf.pair)
    w = mu.weights
    lhs = float(np.sum(np.outer(w, w) * np.abs(g * g.T) ** (p / 2)))
    rhs = base ** (p / 2) / mu.offdiag_mass ** (p / 2 - 1) + mu.diag_mass
    diag = diagnose(cont_frame_operator(casf), t)
    notes = _hypothesis_notes(diag, "frame operator")
    return make_record(f"cont_p_sum[p={p:g}]", lhs, rhs, diag.diagonalizable and diag.nonneg,
                       notes, tol)


def partition_construction(pair: DualPair, masses: Sequence[float], atoms: Sequence[Any] | None = None) -> ContinuousASF:
    """Spread each ``(g_j, omega_j)`` over a cell of mass ``masses[j]``.

    Rows are divided by ``sqrt(mass)`` so the weighted frame operator equals the
    discrete one.
    """
    masses = np.asarray(masses, dtype=float).reshape(-1)
    if masses.size != pair.n:
        raise DimensionMismatch(f"{masses.size} masses for {pair.n} elements")
    if np.any(~np.isfinite(masses)) or np.any(masses <= 0):
        raise NonPositiveMass("partition cells need strictly positive mass")
    root = np.sqrt(masses)[:, None]
    lifted = DualPair(pair.space, pair.vectors / root, pair.functionals / root)
    labels = tuple(range(pair.n)) if atoms is None else tuple(atoms)
    return ContinuousASF(FiniteMeasure(labels, masses), lifted)


class Equiangularity(NamedTuple):
    flag: bool
    gamma: float
    max_dev: float


class ContinuousMetrics(NamedTuple):
    crms: float
    cpfp: float
    correlation: float
    equiangular: Equiangularity


def cont_metrics(casf: ContinuousASF, tol: float = 1e-9) -> ContinuousMetrics:
    """Continuous RMS cross relation, pseudo frame potential and frame correlation.

    ``crms`` is ``nan`` when the off-diagonal integral is negative (the
    spectral hypothesis must have failed).
    """
    mu = casf.measure
    if mu.size < 2:
        raise DegenerateMeasure("metrics need at least two atoms")
    g = gram(casf.pair)
    w = mu.weights
    ww = np.outer(w, w)
    prod = ww * g * g.T
    off = ~np.eye(mu.size, dtype=bool)
    cpfp = float(np.sum(prod).real)
    cross = float(np.sum(prod[off]).real) / mu.offdiag_mass
    crms = math.sqrt(cross) if cross >= 0 else float("nan")
    mags = np.abs(g)[off]
    sq = mags**2
    gamma = float(np.mean(sq))
    dev = float(np.max(np.abs(sq - gamma)))
    return ContinuousMetrics(crms, cpfp, float(np.max(mags)), Equiangularity(dev <= tol, gamma, dev))
