"""Welch-type inequalities for dual pairs, evaluated and reported.

Every check measures its spectral hypothesis instead of assuming it and
returns a :class:`BoundRecord`.  A record with ``holds=False`` is only an
alarm when ``hypothesis_ok`` is also true.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .asf import DualPair, frame_operator, gram, is_hilbert_embedded, is_normalized, trace_S
from .errors import DegenerateCount, NegativeSpectrum, NotNormalized, TooFewVectors
from .numkernel import (
    DEFAULT_TOLERANCES,
    Spectrum,
    ToleranceConfig,
    eigen,
    numerical_rank,
    spectral_verdict,
    trace_power,
)
from .symlift import is_flat, lifted_gram, sym_dim

EQ_TOL = 1e-8
IMAG_TOL = 1e-8


@dataclass(frozen=True)
class BoundRecord:
    """One evaluated inequality ``lhs >= rhs`` (or ``lhs <= rhs``).

    ``slack`` is the margin in the tested direction, so a valid inequality
    always has ``slack >= 0`` up to tolerance.
    """

    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    equality: bool
    hypothesis_ok: bool
    notes: str = ""
    direction: str = ">="

    @property
    def violated(self) -> bool:
        """An asserted inequality failed: hypothesis verified yet bound broken."""
        return self.hypothesis_ok and not self.holds

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "equality": self.equality,
            "hypothesis_ok": self.hypothesis_ok,
            "direction": self.direction,
            "notes": self.notes,
        }


def make_record(
    name: str,
    lhs: float,
    rhs: float,
    hypothesis_ok: bool,
    notes: Sequence[str] = (),
    tol: float = EQ_TOL,
    direction: str = ">=",
) -> BoundRecord:
    lhs, rhs = float(lhs), float(rhs)
    notes = list(notes)
    if direction == ">=":
        slack = lhs - rhs
    elif direction == "<=":
        slack = rhs - lhs
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if math.isnan(slack):
        holds = equality = False
        notes.append("not evaluated")
    else:
        band = tol * max(1.0, abs(rhs))
        holds = slack >= -band
        equality = abs(slack) <= band
    if rhs < 0:
        notes.append("vacuous: rhs < 0")
    if not hypothesis_ok and not holds:
        notes.append("bound not asserted: hypothesis failed")
    return BoundRecord(name, lhs, rhs, slack, bool(holds), bool(equality), bool(hypothesis_ok),
                       "; ".join(notes), direction)


class SpectralDiagnostic(NamedTuple):
    spectrum: Spectrum
    diagonalizable: bool
    nonneg: bool

    def as_dict(self) -> dict:
        w = self.spectrum.eigenvalues
        return {
            "eigenvalues": [[float(z.real), float(z.imag)] for z in w],
            "zero_padding": self.spectrum.zero_padding,
            "eigvec_condition": self.spectrum.eigvec_condition,
            "diagonalizable": self.diagonalizable,
            "nonneg": self.nonneg,
        }


def diagnose(matrix, t: ToleranceConfig = DEFAULT_TOLERANCES, padding: int = 0) -> SpectralDiagnostic:
    s = eigen(matrix)
    if padding:
        s = Spectrum(s.eigenvalues, s.eigvec_condition, s.max_imag, padding)
    v = spectral_verdict(s, t)
    return SpectralDiagnostic(s, v.diagonalizable, v.nonneg)


def _hypothesis_notes(diag: SpectralDiagnostic, what: str) -> list[str]:
    notes = []
    if not diag.diagonalizable:
        notes.append(f"{what} not diagonalizable (eigvec cond {diag.spectrum.eigvec_condition:.3g})")
    if not diag.nonneg:
        notes.append(f"{what} has eigenvalues off the non-negative axis")
    return notes


def _real_part(z: complex, notes: list[str], scale: float) -> tuple[float, bool]:
    """Real part of a sum that theory says is real; flags a large imaginary residue."""
    ok = abs(z.imag) <= IMAG_TOL * max(abs(z.real), scale)
    if z.imag != 0.0:
        notes.append(f"imaginary residue {z.imag:.3g}")
    if not ok:
        notes.append("sum is not real")
    return z.real, ok


# -- order-m Welch bounds -------------------------------------------------------


def welch_rhs(n: int, d: int, m: int = 1) -> float:
    """``(n / dim Sym^m - 1) / (n - 1)``; negative values are returned unchanged."""
    if n < 2:
        raise TooFewVectors(f"need at least two vectors, got {n}")
    return (n / sym_dim(d, m) - 1.0) / (n - 1.0)


def _sum_form(g: np.ndarray, m: int, denom: int, weights: np.ndarray | None = None):
    gm = lifted_gram(g, m)
    if weights is None:
        lhs = complex(np.sum(gm * gm.T))
        tr = complex(np.trace(gm))
    else:
        ww = np.outer(weights, weights)
        lhs = complex(np.sum(ww * gm * gm.T))
        tr = complex(np.sum(weights * np.diag(gm)))
    return gm, lhs, tr, tr.real**2 / denom


def discrete_welch_sum_check(
    pair: DualPair, m: int = 1, tol: float = EQ_TOL, t: ToleranceConfig = DEFAULT_TOLERANCES
) -> BoundRecord:
    """``sum_{j,k} f_j(tau_k)^m f_k(tau_j)^m >= (sum_j f_j(tau_j)^m)^2 / dim Sym^m``."""
    big = sym_dim(pair.d, m)
    gm, lhs_c, _, rhs = _sum_form(gram(pair), m, big)
    diag = diagnose(gm, t, max(big - pair.n, 0))
    notes = _hypothesis_notes(diag, f"lifted operator (m={m})")
    lhs, real_ok = _real_part(lhs_c, notes, max(1.0, abs(rhs)))
    hyp = diag.diagonalizable and diag.nonneg and real_ok
    rec = make_record(f"welch_sum[m={m}]", lhs, rhs, hyp, notes, tol)
    return _tightness_note(rec, diag, big, tol)


def _tightness_note(rec: BoundRecord, diag: SpectralDiagnostic, big: int, tol: float) -> BoundRecord:
    if not rec.hypothesis_ok:
        return rec
    tight = is_flat(diag.spectrum, big, tol)
    extra = "lifted pair tight" if tight else "lifted pair not tight"
    if tight != rec.equality:
        extra += " (equality flag disagrees)"
    notes = "; ".join(x for x in (rec.notes, extra) if x)
    return BoundRecord(rec.name, rec.lhs, rec.rhs, rec.slack, rec.holds, rec.equality,
                       rec.hypothesis_ok, notes, rec.direction)


def _max_forms(g, m, sum_rhs, diag_mass_term, offdiag_mass, hyp, notes, tol, prefix):
    n = g.shape[0]
    off = ~np.eye(n, dtype=bool)
    rhs = (sum_rhs - diag_mass_term) / offdiag_mass
    prod = np.abs(g * g.T)[off]
    product_lhs = float(np.max(prod)) ** m
    single_lhs = float(np.max(np.abs(g)[off])) ** (2 * m)
    return (
        make_record(f"{prefix}_max_product[m={m}]", product_lhs, rhs, hyp, notes, tol),
        make_record(f"{prefix}_max_single[m={m}]", single_lhs, rhs, hyp, notes, tol),
    )


def discrete_welch_max_check(
    pair: DualPair, m: int = 1, tol: float = EQ_TOL, t: ToleranceConfig = DEFAULT_TOLERANCES
) -> tuple[BoundRecord, BoundRecord]:
    """Product form ``max |f_j(tau_k) f_k(tau_j)|^m`` and single form ``max |f_j(tau_k)|^{2m}``.

    Both are compared with ``(sum_rhs - sum_j |f_j(tau_j)|^{2m}) / (n^2 - n)``,
    which is ``welch_rhs(n, d, m)`` for normalized pairs.
    """
    n = pair.n
    if n < 2:
        raise TooFewVectors(f"max forms need n >= 2, got {n}")
    g = gram(pair)
    big = sym_dim(pair.d, m)
    gm, lhs_c, _, sum_rhs = _sum_form(g, m, big)
    diag = diagnose(gm, t, max(big - n, 0))
    notes = _hypothesis_notes(diag, f"lifted operator (m={m})")
    _, real_ok = _real_part(lhs_c, [], max(1.0, abs(sum_rhs)))
    hyp = diag.diagonalizable and diag.nonneg and real_ok
    diag_term = float(np.sum(np.abs(np.diag(g)) ** (2 * m)))
    return _max_forms(g, m, sum_rhs, diag_term, n * n - n, hyp, notes, tol, "welch")


def hadamard_rank_check(
    pair: DualPair, m: int = 1, tol: float = EQ_TOL, t: ToleranceConfig = DEFAULT_TOLERANCES
) -> tuple[BoundRecord, BoundRecord]:
    """Welch sum and product-max forms with ``dim Sym^m`` replaced by ``rank(G**m)``."""
    g = gram(pair)
    gm = lifted_gram(g, m)
    r = numerical_rank(gm, t)
    prefix = "gram_rank" if m == 1 else "hadamard_rank"
    diag = diagnose(gm, t)
    what = "Gram matrix" if m == 1 else f"Hadamard power (m={m})"
    notes = _hypothesis_notes(diag, what) + [f"rank {r}"]
    if r == 0:
        notes.append("zero Gram matrix")
        nan = float("nan")
        rec = make_record(f"{prefix}_sum[m={m}]", nan, nan, False, notes, tol)
        return rec, make_record(f"{prefix}_max_product[m={m}]", nan, nan, False, notes, tol)
    _, lhs_c, _, rhs = _sum_form(g, m, r)
    lhs, real_ok = _real_part(lhs_c, notes, max(1.0, abs(rhs)))
    hyp = diag.diagonalizable and diag.nonneg and real_ok
    sum_rec = make_record(f"{prefix}_sum[m={m}]", lhs, rhs, hyp, notes, tol)
    n = pair.n
    if n < 2:
        return sum_rec, make_record(f"{prefix}_max_product[m={m}]", float("nan"), float("nan"),
                                    False, notes + ["n < 2"], tol)
    diag_term = float(np.sum(np.abs(np.diag(g)) ** (2 * m)))
    prod, _ = _max_forms(g, m, rhs, diag_term, n * n - n, hyp, notes, tol, prefix)
    return sum_rec, prod


def gram_rank_check(
    pair: DualPair, tol: float = EQ_TOL, t: ToleranceConfig = DEFAULT_TOLERANCES
) -> tuple[BoundRecord, BoundRecord]:
    return hadamard_rank_check(pair, 1, tol, t)


# -- real exponents --------------------------------------------------------------


def _trace_power_record(name, s_matrix, trace_value, d, r, tol, t):
    if not r > 0:
        raise ValueError(f"exponent must be positive, got {r!r}")
    diag = diagnose(s_matrix, t)
    notes = _hypothesis_notes(diag, "frame operator")
    if not diag.nonneg:
        raise NegativeSpectrum("frame operator spectrum is not real and non-negative; "
                               + "; ".join(notes))
    lhs = trace_power(diag.spectrum, r, t)
    base, real_ok = _real_part(complex(trace_value), notes, 1.0)
    rhs = max(base, 0.0) ** r / d ** (r - 1)
    direction = ">=" if r >= 1 else "<="
    notes.append(f"tested Tra(S^r) {direction} (Tra S)^r / d^(r-1)")
    hyp = diag.diagonalizable and real_ok
    return make_record(name, lhs, rhs, hyp, notes, tol, direction)


def trace_power_check(
    pair: DualPair, r: float, tol: float = EQ_TOL, t: ToleranceConfig = DEFAULT_TOLERANCES
) -> BoundRecord:
    """Jensen bound on ``Tra(S^r)``; the inequality reverses for ``0 < r < 1``."""
    return _trace_power_record(f"trace_power[r={r:g}]", frame_operator(pair), trace_S(pair),
                               pair.d, r, tol, t)


def _check_normalized(pair: DualPair):
    if not is_normalized(pair, 1e-9):
        raise NotNormalized("this bound needs f_j(tau_j) = 1 for every j")


def p_sum_check(
    pair: DualPair, p: float, tol: float = EQ_TOL, t: ToleranceConfig = DEFAULT_TOLERANCES
) -> BoundRecord:
    """``sum_{j,k} |f_j(tau_k) f_k(tau_j)|^{p/2} >= n(n-1) base^{p/2} + n``, ``base = (n-d)/(d(n-1))``."""
    if not (2 < p < math.inf):
        raise ValueError(f"p must lie in (2, inf), got {p!r}")
    _check_normalized(pair)
    n, d = pair.n, pair.d
    if n < d or n < 2:
        raise DegenerateCount(f"needs n >= d and n >= 2 (got n={n}, d={d}); the base is negative")
    g = gram(pair)
    lhs = float(np.sum(np.abs(g * g.T) ** (p / 2)))
    base = (n - d) / (d * (n - 1))
    rhs = n * (n - 1) * base ** (p / 2) + n
    diag = diagnose(frame_operator(pair), t)
    notes = _hypothesis_notes(diag, "frame operator")
    return make_record(f"p_sum[p={p:g}]", lhs, rhs, diag.diagonalizable and diag.nonneg, notes, tol)


# -- classical Hilbert-space comparison bounds --------------------------------------


def gerzon(d: int, field: str = "complex") -> int:
    """Maximal number of equiangular lines: ``d^2`` over C, ``d(d+1)/2`` over R."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    return d * d if field == "complex" else d * (d + 1) // 2


class ClassicalBound(NamedTuple):
    name: str
    value: float
    applicable: bool
    note: str = ""

    def as_dict(self) -> dict:
        return dict(self._asdict())


def classical_bounds(n: int, d: int, field: str = "complex") -> list[ClassicalBound]:
    """Lower bounds on ``max |<tau_j, tau_k>|`` for unit vectors in ``K^d``.

    Values are computed only where the formula's gate holds; otherwise the
    entry is marked inapplicable with ``nan``.
    """
    if n < 2:
        raise TooFewVectors(f"need n >= 2, got {n}")
    half = 1.0 if field == "complex" else 0.5
    nan = float("nan")
    out = []

    if n > d:
        z = gerzon(n - d, field)
        val = z / (n * (1 + half * (n - d - 1) * math.sqrt(1 / half + n - d)) - z)
        out.append(ClassicalBound("bukh_cox", val, True))
    else:
        out.append(ClassicalBound("bukh_cox", nan, False, "needs n > d"))

    zd = gerzon(d, field)
    if n > zd:
        out.append(ClassicalBound("orthoplex", 1 / math.sqrt(d), True))
        num = n * (half + 1) - d * (half * d + 1)
        out.append(ClassicalBound("levenstein", math.sqrt(num / ((n - d) * (half * d + 1))), True))
    else:
        gate = f"needs n > Gerzon bound {zd}"
        out.append(ClassicalBound("orthoplex", nan, False, gate))
        out.append(ClassicalBound("levenstein", nan, False, gate))

    if d >= 2:
        out.append(ClassicalBound("exponential", 1 - 2 * n ** (-1 / (d - 1)), True))
    else:
        out.append(ClassicalBound("exponential", nan, False, "degenerate dimension d = 1"))
    return out


# -- aggregation ------------------------------------------------------------------------


@dataclass
class BoundReport:
    n: int
    d: int
    normalized: bool
    records: list[BoundRecord] = field(default_factory=list)
    diagnostics: dict[int, SpectralDiagnostic] = field(default_factory=dict)
    classical: list[ClassicalBound] = field(default_factory=list)
    classical_note: str = ""

    @property
    def violations(self) -> list[BoundRecord]:
        return [r for r in self.records if r.violated]

    def as_dict(self) -> dict:
        return {
            "pair": {"n": self.n, "d": self.d, "normalized": self.normalized},
            "records": [r.as_dict() for r in self.records],
            "diagnostics": {str(m): dg.as_dict() for m, dg in sorted(self.diagnostics.items())},
            "classical": [c.as_dict() for c in self.classical],
            "classical_note": self.classical_note,
        }


DEFAULT_POWERS = (0.5, 1.0, 2.0, 3.0)


def full_report(
    pair: DualPair,
    orders: Sequence[int] = (1,),
    p_list: Sequence[float] = (),
    r_list: Sequence[float] = DEFAULT_POWERS,
    tol: float = EQ_TOL,
    t: ToleranceConfig = DEFAULT_TOLERANCES,
) -> BoundReport:
    """Run every applicable check; records come out in a fixed order."""
    normalized = is_normalized(pair)
    rep = BoundReport(pair.n, pair.d, normalized)
    for m in orders:
        big = sym_dim(pair.d, m)
        rep.diagnostics[m] = diagnose(lifted_gram(gram(pair), m), t, max(big - pair.n, 0))
        rep.records.append(discrete_welch_sum_check(pair, m, tol, t))
        if pair.n >= 2:
            rep.records.extend(discrete_welch_max_check(pair, m, tol, t))
        rep.records.extend(hadamard_rank_check(pair, m, tol, t))
    for r in r_list:
        try:
            rep.records.append(trace_power_check(pair, r, tol, t))
        except NegativeSpectrum as exc:
            nan = float("nan")
            rep.records.append(make_record(f"trace_power[r={r:g}]", nan, nan, False, [str(exc)], tol))
    for p in p_list:
        try:
            rep.records.append(p_sum_check(pair, p, tol, t))
        except (NotNormalized, DegenerateCount) as exc:
            nan = float("nan")
            rep.records.append(make_record(f"p_sum[p={p:g}]", nan, nan, False, [str(exc)], tol))
    if pair.n >= 2:
        rep.classical = classical_bounds(pair.n, pair.d, pair.space.field)
        if not is_hilbert_embedded(pair):
            rep.classical_note = "Hilbert reference"
    return rep
