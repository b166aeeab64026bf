"""
Geometric model of the 2-UPS + 1-U remote-center-of-motion mechanism.

Two Universal-Prismatic-Spherical legs drive a platform that is held by a
passive central universal joint. The U joint sits at ``(0, 0, h)`` above the
base plane and leaves two rotations, the tilt angles ``(alpha, beta)``::

    R(alpha, beta) = Rot(x, alpha) @ Rot(y, beta)

The first U axis is base-fixed along x, the second follows the platform
along y. Leg ``i`` runs from base point ``a_i`` (base frame) to platform
point ``b_i`` (platform frame, origin at the U centre), so its length is::

    rho_i = || (0, 0, h) + R @ b_i - a_i ||

All kernels broadcast over arrays of tilt angles; the scalar API below is a
thin wrapper so grid scans and single poses share one code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from mechopt.errors import (
    ConvergenceError,
    DegenerateLegError,
    DomainError,
    SingularConfigurationError,
)

#: Leg lengths below this are treated as a collapsed leg (meters).
DEGENERATE_LENGTH = 1e-9

_HALF_PI = 0.5 * math.pi


class TiltOrientation(NamedTuple):
    """U-joint tilt angles in radians."""

    alpha: float
    beta: float


class LegLengths(NamedTuple):
    """Prismatic joint lengths in meters."""

    rho1: float
    rho2: float


def _vec3(value, name):
    arr = np.array(value, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise DomainError(f"{name} must have 3 components, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite components: {arr}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DesignParameters:
    """One mechanism instance: two base points, two platform points, U height.

    ``a1``/``a2`` are in the base frame (base plane z = 0), ``b1``/``b2`` in
    the platform frame whose origin is the U-joint centre. Thirteen scalars
    in total.
    """

    a1: np.ndarray
    a2: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    h: float

    def __post_init__(self):
        for name in ("a1", "a2", "b1", "b2"):
            object.__setattr__(self, name, _vec3(getattr(self, name), name))
        h = float(self.h)
        if not math.isfinite(h) or h <= 0.0:
            raise DomainError(f"U-joint height must be positive, got {h}")
        object.__setattr__(self, "h", h)
        rho = _leg_lengths(self, np.zeros(1), np.zeros(1))[0]
        if np.any(rho <= DEGENERATE_LENGTH):
            raise DomainError(f"zero-tilt leg lengths must be positive, got {rho}")

    @property
    def base_points(self):
        return np.stack([self.a1, self.a2])

    @property
    def platform_points(self):
        return np.stack([self.b1, self.b2])

    def as_vector(self):
        """Full 13-vector layout ``(a1, a2, b1, b2, h)``."""
        return np.concatenate([self.a1, self.a2, self.b1, self.b2, [self.h]])

    def max_radius(self):
        """Largest attachment-point norm, a footprint measure."""
        pts = np.concatenate([self.base_points, self.platform_points])
        return float(np.max(np.linalg.norm(pts, axis=1)))

    def __eq__(self, other):
        if not isinstance(other, DesignParameters):
            return NotImplemented
        return bool(np.array_equal(self.as_vector(), other.as_vector()))

    def __repr__(self):
        fmt = lambda v: "(" + ", ".join(f"{c:.6g}" for c in v) + ")"
        return (
            f"DesignParameters(a1={fmt(self.a1)}, a2={fmt(self.a2)}, "
            f"b1={fmt(self.b1)}, b2={fmt(self.b2)}, h={self.h:.6g})"
        )


@dataclass(frozen=True)
class ReducedDesignParameters:
    """Mirror-symmetric design described by four scalars.

    Base points sit on a circle of radius ``r_a``, platform points on a
    circle of radius ``r_b`` in the platform plane, both at ``+-gamma``
    about the z-axis.
    """

    r_a: float
    r_b: float
    gamma: float
    h: float

    def __post_init__(self):
        vals = [float(v) for v in self]
        if not all(math.isfinite(v) for v in vals):
            raise DomainError(f"non-finite reduced parameters: {vals}")
        r_a, r_b, gamma, h = vals
        if r_a <= 0 or r_b <= 0 or h <= 0:
            raise DomainError("r_a, r_b and h must be positive")
        if not 0.0 < gamma < _HALF_PI:
            raise DomainError(f"gamma must lie in (0, pi/2), got {gamma}")
        for name, v in zip(("r_a", "r_b", "gamma", "h"), vals):
            object.__setattr__(self, name, v)

    def __iter__(self):
        return iter((self.r_a, self.r_b, self.gamma, self.h))

    def as_vector(self):
        return np.array(list(self), dtype=float)


def expand_reduced(r):
    """Map a 4-parameter symmetric design to the full 13-parameter layout."""
    if not isinstance(r, ReducedDesignParameters):
        r = ReducedDesignParameters(*r)
    c, s = math.cos(r.gamma), math.sin(r.gamma)
    return DesignParameters(
        a1=(r.r_a * c, r.r_a * s, 0.0),
        a2=(r.r_a * c, -r.r_a * s, 0.0),
        b1=(r.r_b * c, r.r_b * s, 0.0),
        b2=(r.r_b * c, -r.r_b * s, 0.0),
        h=r.h,
    )


def scale_design(d, s):
    """Uniformly scale every length of ``d`` by ``s``."""
    s = float(s)
    if not math.isfinite(s) or s <= 0.0:
        raise DomainError(f"scale factor must be positive, got {s}")
    return DesignParameters(d.a1 * s, d.a2 * s, d.b1 * s, d.b2 * s, d.h * s)


def _check_tilt(alpha, beta):
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    bad = ~(np.isfinite(alpha) & np.isfinite(beta))
    bad |= (np.abs(alpha) > _HALF_PI) | (np.abs(beta) > _HALF_PI)
    if np.any(bad):
        raise DomainError("tilt angles must be finite with |alpha|, |beta| <= pi/2")
    return alpha, beta


def rotation_from_tilt(q):
    """Platform rotation ``Rot(x, alpha) @ Rot(y, beta)``."""
    alpha, beta = _check_tilt(q[0], q[1])
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    rx = np.array([[1.0, 0.0, 0.0], [0.0, ca, -sa], [0.0, sa, ca]])
    ry = np.array([[cb, 0.0, sb], [0.0, 1.0, 0.0], [-sb, 0.0, cb]])
    return rx @ ry


def _leg_kinematics(d, alpha, beta):
    """Leg vectors and their tilt derivatives, broadcast over poses.

    Returns ``(u, du_dalpha, du_dbeta)`` each of shape ``(m, 2, 3)`` where
    ``u[k, i] = p_i - a_i`` at pose ``k``.
    """
    alpha = np.atleast_1d(alpha)[:, None]
    beta = np.atleast_1d(beta)[:, None]
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    b = d.platform_points
    bx, by, bz = b[:, 0], b[:, 1], b[:, 2]

    # v = Rot(y, beta) b and its beta-derivative
    vx, vy, vz = bx * cb + bz * sb, by + 0.0 * cb, -bx * sb + bz * cb
    wx, wz = -bx * sb + bz * cb, -bx * cb - bz * sb

    p = np.stack([vx, vy * ca - vz * sa, vy * sa + vz * ca], axis=-1)
    p[..., 2] += d.h
    dp_da = np.stack([0.0 * vx, -vy * sa - vz * ca, vy * ca - vz * sa], axis=-1)
    dp_db = np.stack([wx, -wz * sa, wz * ca], axis=-1)
    return p - d.base_points, dp_da, dp_db


def _leg_lengths(d, alpha, beta):
    u, _, _ = _leg_kinematics(d, alpha, beta)
    return np.linalg.norm(u, axis=-1)


def _jacobians(d, alpha, beta):
    """Leg lengths ``(m, 2)`` and Jacobians ``(m, 2, 2)``; rows of collapsed legs are nan."""
    u, dp_da, dp_db = _leg_kinematics(d, alpha, beta)
    rho = np.linalg.norm(u, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(rho > DEGENERATE_LENGTH, 1.0 / rho, np.nan)
    jac = np.stack(
        [np.sum(u * dp_da, axis=-1) * inv, np.sum(u * dp_db, axis=-1) * inv],
        axis=-1,
    )
    return rho, jac


def inverse_kinematics(d, q):
    """Leg lengths for tilt ``q``."""
    alpha, beta = _check_tilt(q[0], q[1])
    rho = _leg_lengths(d, alpha, beta)[0]
    if np.any(rho <= DEGENERATE_LENGTH):
        raise DegenerateLegError(f"leg collapsed at q={tuple(q)}: rho={rho}")
    return LegLengths(float(rho[0]), float(rho[1]))


def jacobian(d, q):
    """2x2 matrix of d(rho_i)/d(q_j), q = (alpha, beta)."""
    alpha, beta = _check_tilt(q[0], q[1])
    rho, jac = _jacobians(d, alpha, beta)
    if np.any(rho[0] <= DEGENERATE_LENGTH):
        raise DegenerateLegError(f"leg collapsed at q={tuple(q)}: rho={rho[0]}")
    return jac[0]


def _inverse_condition(jac):
    """Closed-form sigma_min / sigma_max for stacked 2x2 matrices."""
    jac = np.asarray(jac, dtype=float)
    frob2 = np.sum(jac * jac, axis=(-2, -1))
    det = np.abs(jac[..., 0, 0] * jac[..., 1, 1] - jac[..., 0, 1] * jac[..., 1, 0])
    # sigma_max^2 + sigma_min^2 = frob2 and sigma_max * sigma_min = |det|
    s_max = 0.5 * (np.sqrt(frob2 + 2.0 * det) + np.sqrt(np.maximum(frob2 - 2.0 * det, 0.0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(s_max > 0.0, det / (s_max * s_max), 0.0)
    return np.clip(ratio, 0.0, 1.0)


def inverse_condition_number(jac):
    """Dexterity index of a 2x2 Jacobian, in [0, 1]; 0 for a singular matrix."""
    jac = np.asarray(jac, dtype=float)
    if jac.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {jac.shape}")
    if not np.all(np.isfinite(jac)):
        raise DomainError("Jacobian entries must be finite")
    return float(_inverse_condition(jac))


def dexterity(d, q):
    return inverse_condition_number(jacobian(d, q))


def forward_kinematics(d, lengths, seed=(0.0, 0.0), tol=1e-10, max_iter=100):
    """Tilt reproducing ``lengths``, by Newton iteration from ``seed``.

    Solves ``rho_i(q)^2 - target_i^2 = 0``. The assembly mode returned is the
    one the iteration reaches from ``seed``. Converged when the residual
    drops below ``tol`` (m^2) and the last step is below 1e-12 rad.
    """
    target = np.asarray(lengths, dtype=float)
    if target.shape != (2,) or not np.all(np.isfinite(target)) or np.any(target <= 0):
        raise DomainError(f"leg lengths must be two positive values, got {lengths}")
    q = np.array(_check_tilt(seed[0], seed[1]), dtype=float)
    target2 = target * target

    def residual(qq):
        u, dp_da, dp_db = _leg_kinematics(d, qq[0], qq[1])
        r = np.sum(u[0] * u[0], axis=-1) - target2
        jac = 2.0 * np.stack(
            [np.sum(u[0] * dp_da[0], axis=-1), np.sum(u[0] * dp_db[0], axis=-1)], axis=-1
        )
        return r, jac

    r, jac = residual(q)
    for _ in range(max_iter):
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            raise SingularConfigurationError(f"singular Newton step at q={tuple(q)}") from None
        if not np.all(np.isfinite(step)):
            raise SingularConfigurationError(f"singular Newton step at q={tuple(q)}")
        # backtrack on the residual norm so far-off seeds do not diverge
        norm0 = np.linalg.norm(r)
        t = 1.0
        while True:
            q_new = q + t * step
            r_new, jac_new = residual(q_new)
            if np.linalg.norm(r_new) < norm0 or t < 1e-4:
                break
            t *= 0.5
        step_size = np.max(np.abs(q_new - q))
        q, r, jac = q_new, r_new, jac_new
        if np.max(np.abs(r)) < tol and step_size < 1e-12:
            break
        if np.max(np.abs(q)) > _HALF_PI:
            raise ConvergenceError(f"iteration left the tilt range at q={tuple(q)}")
    else:
        if np.max(np.abs(r)) >= tol:
            raise ConvergenceError(f"no convergence in {max_iter} iterations, residual {r}")
    if np.max(np.abs(q)) > _HALF_PI:
        raise ConvergenceError(f"solution outside the tilt range: q={tuple(q)}")
    return TiltOrientation(float(q[0]), float(q[1]))
