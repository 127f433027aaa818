"""Numerical search for extremal dual pairs.

Three objectives share one driver:

* ``correlation`` -- minimize ``max_{j != k} |f_j(tau_k)|`` (Grassmannian frames),
* ``potential``   -- minimize the pseudo frame potential ``Tra(S^2)``,
* ``equiangular`` -- drive every ``|f_j(tau_k)|^2`` to a target and ``S`` to
  ``(n/d) I`` (equiangular tight frames, SIC-type searches).

Every iterate satisfies ``||tau_j||_p = 1``, ``||f_j||_q = 1`` and
``f_j(tau_j) = 1``.  For ``1 < p < inf`` those constraints force ``f_j`` to be
the norming functional ``J(tau_j)`` with coordinates ``conj(t)|t|^{p-2}``, so
the search runs over the vectors alone and gradients are pulled back through
``J`` by hand.  For ``p`` in ``{1, inf}`` norming functionals are not unique;
a random coordinate search moves vectors and functionals and projects each
move back onto the constraint set.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
from scipy.optimize import minimize

from .asf import DualPair, LpSpace, NormalizationReport, lp_norm, normalization_report, tightness
from .bounds import welch_rhs
from .metrics import equiangularity, frame_correlation, pseudo_frame_potential
from .numkernel import eigen, spectral_verdict

OBJECTIVES = ("correlation", "potential", "equiangular")
STAGE_ITERS = 500
FEASIBILITY_TOL = 1e-6
TEMP_HIGH, TEMP_LOW = 5e-2, 1e-7


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    restarts: int = 32
    max_iters: int = 5000
    step_init: float = 0.1
    step_decay: float = 0.99
    penalty_weight: float = 10.0
    tol: float = 1e-9
    objective: str = "correlation"
    target_gamma: float | None = None
    workers: int | None = None
    record_trace: bool = False

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if not (self.step_init > 0 and self.penalty_weight > 0 and self.tol > 0):
            raise ValueError("step_init, penalty_weight and tol must be positive")
        if not 0 < self.step_decay < 1:
            raise ValueError(f"step_decay must lie in (0, 1), got {self.step_decay}")


@dataclass
class SearchResult:
    pair: DualPair
    objective: str
    objective_value: float
    welch_gap: float
    feasibility: NormalizationReport
    iters_used: int
    converged: bool
    seed: int
    restart: int
    extras: dict[str, Any] = field(default_factory=dict)
    trace: np.ndarray | None = None

    def metadata(self) -> dict:
        return {
            "objective": self.objective,
            "value": self.objective_value,
            "gap": self.welch_gap,
            "residuals": dict(self.feasibility._asdict()),
            "seed": self.seed,
            "restart": self.restart,
            "iters": self.iters_used,
            "converged": self.converged,
            **self.extras,
        }


# -- objectives on the Gram matrix ----------------------------------------------------
#
# Each returns (value, dL/dG, dL/dS) for the real-valued loss L.  Gradients of a
# real function of complex entries use the convention  dL = Re sum conj(grad) dz.


def _softmax_correlation(g: np.ndarray, off: np.ndarray, temp: float):
    a = np.abs(g) ** 2
    vals = a[off]
    top = vals.max()
    e = np.exp((vals - top) / temp)
    total = e.sum()
    value = top + temp * math.log(total)
    w = np.zeros_like(a)
    w[off] = e / total
    return value, 2.0 * w * g, None


def _potential(g: np.ndarray, off, temp):
    return float(np.sum(g * g.T).real), 2.0 * g.T.conj(), None


def _equiangular(g: np.ndarray, off, temp, gamma: float, s: np.ndarray, lam: float):
    a = np.abs(g) ** 2
    r = np.where(off, a - gamma, 0.0)
    e = s - lam * np.eye(s.shape[0])
    value = float(np.sum(r * r) + np.sum(np.abs(e) ** 2))
    return value, 4.0 * r * g, 2.0 * e


def true_objective(pair: DualPair, objective: str, gamma: float | None = None) -> float:
    if objective == "correlation":
        return frame_correlation(pair)
    if objective == "potential":
        return pseudo_frame_potential(pair)
    n, d = pair.n, pair.d
    g = pair.functionals @ pair.vectors.T
    s = pair.vectors.T @ pair.functionals
    off = ~np.eye(n, dtype=bool)
    return _equiangular(g, off, 1.0, _gamma(gamma, n, d), s, n / d)[0]


def _gamma(gamma: float | None, n: int, d: int) -> float:
    if gamma is not None:
        return float(gamma)
    # first-order Welch value; for n = d^2 over C this is 1/(d+1)
    return max(welch_rhs(n, d, 1), 0.0) if n >= 2 else 0.0


# -- the norming-functional parametrization (1 < p < inf) -------------------------------


def norming_functionals(x: np.ndarray, p: float):
    """Unit vectors ``tau = x/||x||_p`` and their norming functionals ``J(tau)``."""
    s = lp_norm(x, p)[:, None]
    tau = x / s
    if p == 2.0:
        return tau, tau.conj()
    ax = np.abs(tau)
    return tau, tau.conj() * ax ** (p - 2)


def _pullback(x: np.ndarray, p: float, g_tau: np.ndarray, g_f: np.ndarray) -> np.ndarray:
    """Gradient with respect to ``x`` given gradients with respect to ``tau`` and ``f``."""
    s = lp_norm(x, p)[:, None]
    ax = np.maximum(np.abs(x), 1e-12 * s)
    grad_s = s ** (1 - p) * ax ** (p - 2) * x
    # tau = x / s
    c = np.sum((g_tau.conj() * x).real, axis=1, keepdims=True)
    out = g_tau / s - (c / s**2) * grad_s
    # f = conj(h) / s^(p-1) with h = x |x|^(p-2)
    h = x * ax ** (p - 2)
    c2 = np.sum((g_f * h).real, axis=1, keepdims=True)
    g_h = g_f.conj() / s ** (p - 1)
    out = out + ax ** (p - 2) * g_h + (p - 2) * ax ** (p - 4) * (g_h.conj() * x).real * x
    out = out + (1 - p) * s ** (-p) * c2 * grad_s
    return out


class _SmoothProblem:
    """Loss and gradient over raw vectors for a smooth l^p space."""

    def __init__(self, space: LpSpace, n: int, objective: str, gamma: float | None, record: bool):
        self.space, self.n, self.objective = space, n, objective
        self.gamma = _gamma(gamma, n, space.dim)
        self.lam = n / space.dim
        self.off = ~np.eye(n, dtype=bool)
        self.temp = TEMP_HIGH
        self.record = record
        self.trace: list[tuple[float, bool]] = []

    def unpack(self, z: np.ndarray) -> np.ndarray:
        n, d = self.n, self.space.dim
        if self.space.is_complex:
            return (z[: n * d] + 1j * z[n * d:]).reshape(n, d)
        return z.reshape(n, d)

    def pack(self, x: np.ndarray) -> np.ndarray:
        if self.space.is_complex:
            return np.concatenate([x.real.ravel(), x.imag.ravel()])
        return np.ascontiguousarray(x.real.ravel())

    def __call__(self, z: np.ndarray):
        x = self.unpack(z)
        p = self.space.p
        tau, f = norming_functionals(x, p)
        g = f @ tau.T
        if self.record:
            self._record(g, tau, f)
        if self.objective == "correlation":
            value, gg, gs = _softmax_correlation(g, self.off, self.temp)
        elif self.objective == "potential":
            value, gg, gs = _potential(g, self.off, self.temp)
        else:
            value, gg, gs = _equiangular(g, self.off, self.temp, self.gamma, tau.T @ f, self.lam)
        g_f = gg @ tau.conj()
        g_tau = gg.T @ f.conj()
        if gs is not None:
            g_f = g_f + tau.conj() @ gs
            g_tau = g_tau + f.conj() @ gs.T
        grad = _pullback(x, p, g_tau, g_f)
        if not self.space.is_complex:
            grad = grad.real
        return value, self.pack(grad)

    def _record(self, g, tau, f):
        corr = float(np.max(np.abs(g)[self.off])) if self.n >= 2 else 0.0
        if self.space.p == 2.0:
            hyp = True  # f = conj(tau): the frame operator is positive semidefinite
        else:
            hyp = spectral_verdict(eigen(tau.T @ f)).ok
        self.trace.append((corr, hyp))


def _random_rows(rng: np.random.Generator, n: int, space: LpSpace) -> np.ndarray:
    x = rng.standard_normal((n, space.dim))
    if space.is_complex:
        x = x + 1j * rng.standard_normal((n, space.dim))
    return x


def _smooth_restart(space: LpSpace, n: int, cfg: SearchConfig, rng) -> tuple:
    prob = _SmoothProblem(space, n, cfg.objective, cfg.target_gamma, cfg.record_trace)
    x = _random_rows(rng, n, space)
    x = x / lp_norm(x, space.p)[:, None]
    n_stages = max(1, math.ceil(cfg.max_iters / STAGE_ITERS))
    if cfg.objective == "correlation":
        temps = np.geomspace(TEMP_HIGH, TEMP_LOW, n_stages)
        budgets = [STAGE_ITERS] * n_stages
    else:
        temps = [1.0]
        budgets = [cfg.max_iters]
    iters = 0
    converged = False
    prev = math.inf
    for temp, budget in zip(temps, budgets):
        budget = min(budget, cfg.max_iters - iters)
        if budget <= 0:
            break
        prob.temp = float(temp)
        res = minimize(prob, prob.pack(x), jac=True, method="L-BFGS-B",
                       options={"maxiter": budget, "ftol": 1e-16, "gtol": 1e-13, "maxcor": 20})
        iters += int(res.nit)
        x = prob.unpack(res.x)
        x = x / lp_norm(x, space.p)[:, None]
        tau, f = norming_functionals(x, space.p)
        current = true_objective(DualPair(space, tau, f), cfg.objective, cfg.target_gamma)
        stalled = prev - current < cfg.tol * max(1.0, abs(current))
        converged = bool(res.success) or stalled
        if cfg.objective == "correlation" and stalled and temp <= temps[-1] * 10:
            break
        prev = min(prev, current)
    tau, f = norming_functionals(x, space.p)
    trace = np.array(prob.trace) if cfg.record_trace else None
    return DualPair(space, tau, f), iters, converged, trace


# -- the non-smooth spaces (p = 1 or p = inf) -------------------------------------------


def project_row(tau: np.ndarray, f: np.ndarray, space: LpSpace, rng) -> tuple[np.ndarray, np.ndarray]:
    """Move one ``(tau, f)`` row onto ``||tau||_p = ||f||_q = f(tau) = 1``.

    ``tau`` is normalized, ``f`` replaced by the nearest norming functional
    of ``tau`` that keeps its free part, then rescaled so that ``f(tau) = 1``
    exactly.  A row whose pairing collapses below 0.1 is redrawn.
    """
    for _ in range(100):
        tau = tau / lp_norm(tau, space.p)
        mag = np.abs(tau)
        phase = np.where(mag > 0, tau / np.where(mag > 0, mag, 1.0), 1.0)
        if math.isinf(space.p):
            active = mag >= 1.0 - 1e-12
            c = np.where(active, np.maximum((f * phase).real, 0.0), 0.0)
            if c.sum() <= 0:
                c = active.astype(float)
            f = c / c.sum() * phase.conj()
        elif space.p == 1.0:
            support = mag > 1e-15
            fm = np.abs(f)
            clipped = np.where(fm > 1.0, f / np.where(fm > 0, fm, 1.0), f)
            f = np.where(support, phase.conj(), clipped)
        else:
            f = norming_functionals(tau[None, :], space.p)[1][0]
        val = np.dot(f, tau)
        if abs(val) > 0.1:
            return tau, f / val
        tau = _random_rows(rng, 1, space)[0]
        f = _random_rows(rng, 1, space)[0]
    raise ArithmeticError("could not draw a row with a usable pairing")


def _surrogate(g, off, temp, cfg, gamma, s, lam):
    if cfg.objective == "correlation":
        return _softmax_correlation(g, off, temp)[0]
    if cfg.objective == "potential":
        return _potential(g, off, temp)[0]
    return _equiangular(g, off, temp, gamma, s, lam)[0]


def _penalty(space: LpSpace, tau: np.ndarray, f: np.ndarray) -> float:
    rep = normalization_report(DualPair(space, tau, f))
    return rep.max_vec_norm_dev**2 + rep.max_fun_norm_dev**2 + rep.max_pairing_dev**2


def _nonsmooth_restart(space: LpSpace, n: int, cfg: SearchConfig, rng) -> tuple:
    d = space.dim
    tau = _random_rows(rng, n, space)
    f = _random_rows(rng, n, space)
    for j in range(n):
        tau[j], f[j] = project_row(tau[j], f[j], space, rng)
    off = ~np.eye(n, dtype=bool)
    gamma = _gamma(cfg.target_gamma, n, d)
    n_stages = max(1, math.ceil(cfg.max_iters / STAGE_ITERS))
    temps = np.geomspace(TEMP_HIGH, TEMP_LOW, n_stages)
    trace: list[tuple[float, bool]] = []

    def score(t_, f_, temp, weight):
        g = f_ @ t_.T
        base = _surrogate(g, off, temp, cfg, gamma, t_.T @ f_, n / d)
        return base + weight * _penalty(space, t_, f_)

    radius = cfg.step_init
    temp = temps[0]
    weight = cfg.penalty_weight
    current = score(tau, f, temp, weight)
    best_true = math.inf
    window_start = math.inf
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        stage = (it - 1) // STAGE_ITERS
        if (it - 1) % STAGE_ITERS == 0:
            temp = temps[min(stage, n_stages - 1)]
            weight = min(cfg.penalty_weight * 2.0**stage, 1e6)
            current = score(tau, f, temp, weight)
        j = int(rng.integers(n))
        i = int(rng.integers(d))
        new_t, new_f = tau[j].copy(), f[j].copy()
        target = new_t if rng.random() < 0.5 else new_f
        step = radius * rng.standard_normal()
        if space.is_complex:
            step = step + 1j * radius * rng.standard_normal()
        target[i] += step
        new_t, new_f = project_row(new_t, new_f, space, rng)
        old_t, old_f = tau[j].copy(), f[j].copy()
        tau[j], f[j] = new_t, new_f
        trial = score(tau, f, temp, weight)
        if trial < current:
            current = trial
            radius = min(radius / cfg.step_decay, cfg.step_init)
        else:
            tau[j], f[j] = old_t, old_f
            radius = max(radius * cfg.step_decay, 1e-12)
        pair = DualPair(space, tau, f)
        value = true_objective(pair, cfg.objective, cfg.target_gamma)
        if cfg.record_trace and n >= 2:
            trace.append((frame_correlation(pair),
                          spectral_verdict(eigen(tau.T @ f)).ok))
        best_true = min(best_true, value)
        if it % 200 == 0:
            if window_start - best_true < cfg.tol * max(1.0, abs(best_true)) and stage == n_stages - 1:
                converged = True
                break
            window_start = best_true
    return DualPair(space, tau, f), it, converged, (np.array(trace) if cfg.record_trace else None)


# -- driver ---------------------------------------------------------------------------


def _finish(pair: DualPair, space: LpSpace, n: int, cfg: SearchConfig, iters: int, converged: bool,
            restart: int, trace) -> SearchResult:
    d = space.dim
    feas = normalization_report(pair)
    value = true_objective(pair, cfg.objective, cfg.target_gamma)
    extras: dict[str, Any] = {}
    corr = frame_correlation(pair) if n >= 2 else 0.0
    if cfg.objective == "potential":
        floor = n * n / d
        gap = value - floor
        tight = tightness(pair, 1e-6)
        extras["floor"] = floor
        extras["tight"] = bool(tight.tight)
        extras["floor_attained"] = bool(abs(gap) <= 1e-6 * floor and tight.tight)
    else:
        rhs = welch_rhs(n, d, 1) if n >= 2 else -1.0
        gap = corr - math.sqrt(rhs) if rhs >= 0 else float("nan")
    if cfg.objective == "equiangular":
        gamma = _gamma(cfg.target_gamma, n, d)
        sq = np.abs(pair.functionals @ pair.vectors.T)[~np.eye(n, dtype=bool)] ** 2
        s = pair.vectors.T @ pair.functionals
        extras["target_gamma"] = gamma
        extras["max_dev"] = float(np.max(np.abs(sq - gamma))) if n >= 2 else 0.0
        extras["tightness_residual"] = float(np.sum(np.abs(s - (n / d) * np.eye(d)) ** 2))
    extras["correlation"] = corr
    ok = converged and feas.worst <= FEASIBILITY_TOL
    return SearchResult(pair, cfg.objective, float(value), float(gap), feas, iters, ok,
                        cfg.seed, restart, extras, trace)


def _one_restart(space: LpSpace, n: int, cfg: SearchConfig, restart: int, seq) -> SearchResult:
    rng = np.random.default_rng(seq)
    if 1.0 < space.p < math.inf:
        pair, iters, conv, trace = _smooth_restart(space, n, cfg, rng)
    else:
        pair, iters, conv, trace = _nonsmooth_restart(space, n, cfg, rng)
    return _finish(pair, space, n, cfg, iters, conv, restart, trace)


def worker_count(cfg: SearchConfig) -> int:
    if cfg.workers is not None:
        return max(1, int(cfg.workers))
    env = os.environ.get("WELCH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def search(space: LpSpace, n: int, cfg: SearchConfig) -> tuple[SearchResult, list[SearchResult]]:
    """Run every restart; return the best result and all of them in restart order.

    Restart ``i`` draws from the ``i``-th child of ``SeedSequence(cfg.seed)``,
    so results do not depend on the worker count.
    """
    if n < 1:
        raise ValueError(f"need at least one element, got n={n}")
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    workers = min(worker_count(cfg), cfg.restarts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(lambda i: _one_restart(space, n, cfg, i, seeds[i]),
                                 range(cfg.restarts)))
    else:
        runs = [_one_restart(space, n, cfg, i, seeds[i]) for i in range(cfg.restarts)]
    best = min(runs, key=lambda r: (r.objective_value, r.feasibility.worst, r.restart))
    return best, runs


def grassmannian_search(space: LpSpace, n: int, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Minimize the frame correlation over normalized dual pairs of size ``n``."""
    if n < 2:
        raise ValueError(f"frame correlation needs n >= 2, got {n}")
    return search(space, n, replace(cfg, objective="correlation"))[0]


def potential_minimize(space: LpSpace, n: int, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Minimize the pseudo frame potential; its floor is ``n^2/d``."""
    if n < space.dim:
        raise ValueError(f"need n >= d, got n={n}, d={space.dim}")
    return search(space, n, replace(cfg, objective="potential"))[0]


def etf_search(d: int, cfg: SearchConfig = SearchConfig(), space: LpSpace | None = None) -> SearchResult:
    """Search ``d^2`` elements of ``C^d`` that are ``1/(d+1)``-equiangular and tight."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    space = space or LpSpace(d, 2.0, "complex")
    gamma = cfg.target_gamma if cfg.target_gamma is not None else 1.0 / (d + 1)
    return search(space, d * d, replace(cfg, objective="equiangular", target_gamma=gamma))[0]


def equiangular_residual(pair: DualPair, gamma: float) -> float:
    """Equiangularity plus tightness residual of a fixed pair (zero for an exact ETF)."""
    return true_objective(pair, "equiangular", gamma)


__all__ = [
    "SearchConfig",
    "SearchResult",
    "search",
    "grassmannian_search",
    "potential_minimize",
    "etf_search",
    "equiangular_residual",
    "norming_functionals",
    "project_row",
]
