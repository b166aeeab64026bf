"""
Nelder-Mead simplex minimisation with deterministic restarts.

Each iteration orders the vertices, then tries reflection, expansion,
outside/inside contraction and finally a shrink toward the best vertex.
Non-finite objective values count as +inf, so a penalty function can
reject a vertex outright and the simplex simply moves away from it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from mechopt.errors import DomainError


class Termination(str, enum.Enum):
    FTOL = "FTol"
    XTOL = "XTol"
    MAX_EVALS = "MaxEvals"


@dataclass(frozen=True)
class OptimizerConfig:
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    initial_simplex_scale: float = 0.05
    f_tol: float = 1e-9
    x_tol: float = 1e-9
    max_evals: int = 20000
    restarts: int = 3

    def __post_init__(self):
        if not self.reflection > 0:
            raise DomainError("reflection coefficient must be positive")
        if not self.expansion > self.reflection:
            raise DomainError("expansion coefficient must exceed reflection")
        if not 0 < self.contraction < 1:
            raise DomainError("contraction coefficient must lie in (0, 1)")
        if not 0 < self.shrink < 1:
            raise DomainError("shrink coefficient must lie in (0, 1)")
        if not self.initial_simplex_scale > 0:
            raise DomainError("initial_simplex_scale must be positive")
        if self.f_tol < 0 or self.x_tol < 0:
            raise DomainError("tolerances must be non-negative")
        if int(self.max_evals) != self.max_evals or self.max_evals < 1:
            raise DomainError("max_evals must be a positive integer")
        if int(self.restarts) != self.restarts or self.restarts < 0:
            raise DomainError("restarts must be a non-negative integer")


@dataclass
class OptimizationResult:
    best_x: np.ndarray
    best_f: float
    evals: int
    trace: list = field(default_factory=list)  # (eval index, best-so-far f)
    termination: Termination = Termination.MAX_EVALS
    restarts_used: int = 0

    def to_dict(self):
        return {
            "best_x": [float(v) for v in self.best_x],
            "best_f": float(self.best_f),
            "evals": int(self.evals),
            "termination": self.termination.value,
            "restarts_used": int(self.restarts_used),
        }


class _Counter:
    """Objective wrapper that counts calls and keeps the best-so-far trace."""

    def __init__(self, f):
        self.f = f
        self.evals = 0
        self.best_f = math.inf
        self.best_x = None
        self.trace = []

    def __call__(self, x):
        try:
            value = float(self.f(x))
        except (ArithmeticError, ValueError):
            value = math.inf
        if not math.isfinite(value):
            value = math.inf
        self.evals += 1
        if value < self.best_f:
            self.best_f = value
            self.best_x = np.array(x, dtype=float)
        self.trace.append((self.evals, self.best_f))
        return value


def _run(fc, x0, f0, step, cfg):
    """One simplex descent from ``x0``; returns the termination reason."""
    n = x0.size
    xs = np.empty((n + 1, n))
    fs = np.empty(n + 1)
    xs[0], fs[0] = x0, f0
    for i in range(n):
        xs[i + 1] = x0
        xs[i + 1, i] += step[i]
        fs[i + 1] = fc(xs[i + 1])

    rho, chi, gamma, sigma = cfg.reflection, cfg.expansion, cfg.contraction, cfg.shrink
    while True:
        order = np.argsort(fs, kind="stable")
        xs, fs = xs[order], fs[order]
        if fs[-1] - fs[0] < cfg.f_tol:
            return Termination.FTOL
        if np.max(np.linalg.norm(xs[1:] - xs[0], axis=1)) < cfg.x_tol:
            return Termination.XTOL
        if fc.evals >= cfg.max_evals:
            return Termination.MAX_EVALS

        centroid = xs[:-1].mean(axis=0)
        xr = centroid + rho * (centroid - xs[-1])
        fr = fc(xr)
        if fr < fs[0]:
            xe = centroid + chi * (xr - centroid)
            fe = fc(xe)
            if fe < fr:
                xs[-1], fs[-1] = xe, fe
            else:
                xs[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-2]:
            xs[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-1]:
            xc = centroid + gamma * (xr - centroid)
            fcv = fc(xc)
            if fcv <= fr:
                xs[-1], fs[-1] = xc, fcv
                continue
        else:
            xc = centroid + gamma * (xs[-1] - centroid)
            fcv = fc(xc)
            if fcv < fs[-1]:
                xs[-1], fs[-1] = xc, fcv
                continue
        for i in range(1, n + 1):
            xs[i] = xs[0] + sigma * (xs[i] - xs[0])
            fs[i] = fc(xs[i])


def nelder_mead(f, x0, cfg=None, step=None):
    """Minimise ``f`` from ``x0``.

    The initial simplex is ``x0`` plus one offset per axis; ``step`` gives
    the signed offsets, defaulting to ``cfg.initial_simplex_scale`` on every
    axis. After a run stops on ``f_tol`` or ``x_tol`` the simplex is rebuilt
    around the best vertex, ``cfg.restarts`` times at most, while budget
    remains. ``max_evals`` is checked once per iteration, so a final shrink
    may overshoot it by at most ``n`` evaluations.
    """
    cfg = cfg or OptimizerConfig()
    x0 = np.array(x0, dtype=float).reshape(-1)
    if x0.size < 1:
        raise DomainError("x0 must have at least one coordinate")
    if step is None:
        step = np.full(x0.size, cfg.initial_simplex_scale)
    step = np.broadcast_to(np.asarray(step, dtype=float), x0.shape)
    if np.any(step == 0) or not np.all(np.isfinite(step)):
        raise DomainError("initial simplex offsets must be finite and non-zero")

    fc = _Counter(f)
    f0 = fc(x0)
    if not math.isfinite(f0):
        raise DomainError(f"objective is not finite at x0={x0}")

    restarts_used = 0
    while True:
        reason = _run(fc, fc.best_x.copy(), fc.best_f, step, cfg)
        if reason is Termination.MAX_EVALS or restarts_used >= cfg.restarts:
            break
        if fc.evals >= cfg.max_evals:
            reason = Termination.MAX_EVALS
            break
        restarts_used += 1

    return OptimizationResult(
        best_x=fc.best_x,
        best_f=fc.best_f,
        evals=fc.evals,
        trace=fc.trace,
        termination=reason,
        restarts_used=restarts_used,
    )
