"""
Orientation workspace scans: coverage, dexterity, leg-length demand,
actuator bracket search and singularity maps.

The required workspace is a tilt cone ``sqrt(alpha^2 + beta^2) <= theta_max``
sampled on a square grid. Kinematic failures at a grid point are data (the
point is uncovered), never exceptions, so poor designs can be scored.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from mechopt.errors import DomainError
from mechopt.mechanism import (
    DEGENERATE_LENGTH,
    TiltOrientation,
    _inverse_condition,
    _jacobians,
)

#: Slack used when comparing window edges against observed lengths (meters).
BRACKET_EPS = 1e-12

THREADS_ENV = "MECHOPT_THREADS"


@dataclass(frozen=True)
class WorkspaceSpec:
    theta_max: float = math.radians(30.0)
    resolution: int = 21
    dexterity_threshold: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.theta_max < 0.5 * math.pi:
            raise DomainError(f"theta_max must lie in (0, pi/2), got {self.theta_max}")
        if int(self.resolution) != self.resolution or self.resolution < 2:
            raise DomainError(f"resolution must be an integer >= 2, got {self.resolution}")
        if not 0.0 < self.dexterity_threshold < 1.0:
            raise DomainError(
                f"dexterity_threshold must lie in (0, 1), got {self.dexterity_threshold}"
            )


@dataclass(frozen=True)
class ActuatorModel:
    """Prismatic actuator family: windows ``[L, L + stroke]`` with
    ``L = min_closed_length + k * search_step``."""

    min_closed_length: float
    stroke: float
    search_step: float = 0.001

    def __post_init__(self):
        for name in ("min_closed_length", "stroke", "search_step"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"{name} must be positive, got {v}")


@dataclass
class WorkspaceEvaluation:
    coverage: float
    min_dexterity: float
    rho_range: list  # [(lo, hi) for leg 1, (lo, hi) for leg 2]
    feasible_brackets: list
    feasible: bool
    n_points: int = 0
    n_covered: int = 0

    @property
    def length_span(self):
        """Spread of all leg lengths over covered points (shared actuator)."""
        if self.n_covered == 0:
            return 0.0
        lo = min(r[0] for r in self.rho_range)
        hi = max(r[1] for r in self.rho_range)
        return hi - lo

    def to_dict(self):
        return {
            "coverage": self.coverage,
            "min_dexterity": self.min_dexterity,
            "rho_range": [list(r) for r in self.rho_range],
            "feasible_brackets": [list(b) for b in self.feasible_brackets],
            "feasible": self.feasible,
            "n_points": self.n_points,
            "n_covered": self.n_covered,
        }


@dataclass
class GridScan:
    """Per-point results of a workspace scan, in grid order."""

    alpha: np.ndarray
    beta: np.ndarray
    rho: np.ndarray  # (m, 2), nan where a leg collapsed
    det_j: np.ndarray  # 0 where degenerate
    dexterity: np.ndarray  # 0 where degenerate
    degenerate: np.ndarray
    covered: np.ndarray = field(default=None)


def generate_grid(spec):
    """Grid points inside the tilt cone, row-major by alpha then beta."""
    return [TiltOrientation(float(a), float(b)) for a, b in zip(*_grid_arrays(spec))]


def _grid_arrays(spec):
    axis = np.linspace(-spec.theta_max, spec.theta_max, int(spec.resolution))
    alpha, beta = np.meshgrid(axis, axis, indexing="ij")
    alpha, beta = alpha.ravel(), beta.ravel()
    # tolerance keeps the on-axis extremes (+-theta_max, 0) inside the disc
    inside = np.hypot(alpha, beta) <= spec.theta_max * (1.0 + 1e-12)
    return alpha[inside], beta[inside]


def thread_count(threads=None):
    """Worker count from the argument, else ``MECHOPT_THREADS`` (0 = all cores)."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            threads = int(raw)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if threads < 0:
        raise DomainError(f"thread count must be >= 0, got {threads}")
    return threads or (os.cpu_count() or 1)


def _scan_chunk(d, alpha, beta):
    rho, jac = _jacobians(d, alpha, beta)
    degenerate = np.any(rho <= DEGENERATE_LENGTH, axis=1) | np.any(~np.isfinite(jac), axis=(1, 2))
    jac = np.where(degenerate[:, None, None], 0.0, jac)
    det_j = jac[:, 0, 0] * jac[:, 1, 1] - jac[:, 0, 1] * jac[:, 1, 0]
    dex = _inverse_condition(jac)
    rho = np.where(degenerate[:, None], np.nan, rho)
    return rho, det_j, dex, degenerate


def scan_grid(d, spec, threads=None):
    """Lengths, det J and dexterity at every grid point of ``spec``."""
    alpha, beta = _grid_arrays(spec)
    n_workers = thread_count(threads)
    if n_workers > 1 and alpha.size >= 2 * n_workers:
        chunks = np.array_split(np.arange(alpha.size), n_workers)
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(lambda idx: _scan_chunk(d, alpha[idx], beta[idx]), chunks))
        rho, det_j, dex, degenerate = (np.concatenate(p) for p in zip(*parts))
    elif alpha.size:
        rho, det_j, dex, degenerate = _scan_chunk(d, alpha, beta)
    else:
        rho, det_j = np.empty((0, 2)), np.empty(0)
        dex, degenerate = np.empty(0), np.empty(0, dtype=bool)
    covered = ~degenerate & (dex >= spec.dexterity_threshold)
    return GridScan(alpha, beta, rho, det_j, dex, degenerate, covered)


def _candidate_range(lo, hi, act):
    """Index range of window starts worth testing, padded by one on each side."""
    k_lo = math.floor((hi - act.stroke - act.min_closed_length) / act.search_step) - 1
    k_hi = math.floor((lo - act.min_closed_length) / act.search_step) + 1
    return max(k_lo, 0), k_hi


def _brackets_for_span(lo, hi, act):
    if hi - lo > act.stroke + BRACKET_EPS:
        return []
    k_lo, k_hi = _candidate_range(lo, hi, act)
    windows = []
    for k in range(k_lo, k_hi + 1):
        start = act.min_closed_length + k * act.search_step
        end = start + act.stroke
        if start <= lo + BRACKET_EPS and hi <= end + BRACKET_EPS:
            windows.append((start, end))
    return windows


def actuator_bracket_search(lengths, act):
    """All actuator windows that contain every length of both legs.

    A single window is shared by both legs. Window starts are restricted to
    ``min_closed_length + k * search_step``, ``k = 0, 1, ...``.
    """
    values = np.asarray(lengths, dtype=float).reshape(-1)
    if values.size == 0:
        raise DomainError("bracket search needs at least one length pair")
    if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
        raise DomainError("leg lengths must be finite and positive")
    return _brackets_for_span(float(values.min()), float(values.max()), act)


def evaluate_design(d, spec, act, threads=None):
    """Score ``d`` over the required workspace."""
    return _summarize(scan_grid(d, spec, threads), act)


def _summarize(scan, act):
    n_points = int(scan.alpha.size)
    n_covered = int(np.count_nonzero(scan.covered))
    coverage = n_covered / n_points if n_points else 0.0
    if n_covered:
        rho = scan.rho[scan.covered]
        min_dex = float(scan.dexterity[scan.covered].min())
        lo, hi = rho.min(axis=0), rho.max(axis=0)
        rho_range = [(float(lo[0]), float(hi[0])), (float(lo[1]), float(hi[1]))]
        brackets = _brackets_for_span(float(lo.min()), float(hi.max()), act)
    else:
        min_dex, rho_range, brackets = 0.0, [], []
    return WorkspaceEvaluation(
        coverage=coverage,
        min_dexterity=min_dex,
        rho_range=rho_range,
        feasible_brackets=brackets,
        feasible=bool(coverage == 1.0 and brackets),
        n_points=n_points,
        n_covered=n_covered,
    )


def singularity_map(d, spec, threads=None):
    """``(q, det J)`` at every grid point; collapsed legs report det 0.

    Use :func:`scan_grid` for the matching degenerate flags.
    """
    scan = scan_grid(d, spec, threads)
    return [
        (TiltOrientation(float(a), float(b)), float(det))
        for a, b, det in zip(scan.alpha, scan.beta, scan.det_j)
    ]


def sign_changes(spec, det_values):
    """Pairs of neighbouring grid indices whose det J differs in sign.

    These bracket crossings of the singularity curve.
    """
    alpha, beta = _grid_arrays(spec)
    axis = np.linspace(-spec.theta_max, spec.theta_max, int(spec.resolution))
    ia = np.searchsorted(axis, alpha)
    ib = np.searchsorted(axis, beta)
    index = {(int(i), int(j)): k for k, (i, j) in enumerate(zip(ia, ib))}
    sign = np.sign(np.asarray(det_values, dtype=float))
    pairs = []
    for (i, j), k in index.items():
        for nb in ((i + 1, j), (i, j + 1)):
            other = index.get(nb)
            if other is not None and sign[k] * sign[other] < 0:
                pairs.append((k, other))
    return pairs
