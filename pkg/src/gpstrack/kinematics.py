"""Closed-form kinematics of the planar 3R arm and the cubic orientation profile.

Angles are radians and stored unwrapped; orientation comparisons should be made
modulo 2*pi (see :func:`angle_diff`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateError, UnreachableError, ValidationError

#: Tolerance on the reachability radicand ``1 - cos(theta2)**2``.
REACH_TOL = 1e-12

_DEFAULT_LIMITS = ((-math.pi, math.pi),) * 3


class ElbowBranch(enum.Enum):
    """Sign of ``sin(theta2)`` in the two-link sub-problem."""

    PLUS = 1
    MINUS = -1

    @classmethod
    def of(cls, theta2: float) -> "ElbowBranch":
        """Branch a configuration with this ``theta2`` belongs to (``sin == 0`` maps to PLUS)."""
        return cls.MINUS if math.sin(theta2) < 0 else cls.PLUS


@dataclass(frozen=True)
class RobotModel:
    l1: float = 0.4
    l2: float = 0.3
    l3: float = 0.3
    joint_limits: tuple[tuple[float, float], ...] = field(default=_DEFAULT_LIMITS)

    def __post_init__(self):
        for name in ("l1", "l2", "l3"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"link length {name} must be > 0, got {value!r}")
        limits = tuple((float(lo), float(hi)) for lo, hi in self.joint_limits)
        if len(limits) != 3:
            raise ValidationError(f"expected 3 joint limits, got {len(limits)}")
        for k, (lo, hi) in enumerate(limits):
            if not lo < hi:
                raise ValidationError(f"joint_limits[{k}]: min {lo} must be < max {hi}")
        object.__setattr__(self, "joint_limits", limits)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([self.l1, self.l2, self.l3])

    @property
    def bounds(self) -> np.ndarray:
        """Joint limits as a ``(3, 2)`` array."""
        return np.array(self.joint_limits)

    def within_limits(self, q: "JointConfig") -> bool:
        return all(lo <= t <= hi for t, (lo, hi) in zip(q, self.joint_limits))


@dataclass(frozen=True)
class JointConfig:
    theta1: float
    theta2: float
    theta3: float

    def __iter__(self):
        return iter((self.theta1, self.theta2, self.theta3))

    def as_array(self) -> np.ndarray:
        return np.array([self.theta1, self.theta2, self.theta3])

    @classmethod
    def from_degrees(cls, t1, t2, t3) -> "JointConfig":
        return cls(math.radians(t1), math.radians(t2), math.radians(t3))

    def degrees(self) -> tuple[float, float, float]:
        return tuple(math.degrees(t) for t in self)


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    phi: float


@dataclass(frozen=True)
class WristCenter:
    xn: float
    yn: float


@dataclass(frozen=True)
class CubicProfile:
    """``phi(t) = c0 + c1 t + c2 t^2 + c3 t^3`` on ``[0, T]``."""

    c0: float
    c1: float
    c2: float
    c3: float
    T: float

    def __post_init__(self):
        if not self.T > 0:
            raise ValidationError(f"profile duration must be > 0, got {self.T!r}")

    def __call__(self, t: float) -> float:
        return eval_profile(self, t)

    def derivative(self, t: float) -> float:
        return self.c1 + 2.0 * self.c2 * t + 3.0 * self.c3 * t * t


def angle_diff(a, b):
    """Signed difference ``a - b`` wrapped into ``[-pi, pi)``."""
    return (np.asarray(a) - np.asarray(b) + math.pi) % (2 * math.pi) - math.pi


def forward_kinematics(model: RobotModel, q: JointConfig) -> Pose:
    t1, t2, t3 = q
    a12 = t1 + t2
    phi = a12 + t3
    x = model.l1 * math.cos(t1) + model.l2 * math.cos(a12) + model.l3 * math.cos(phi)
    y = model.l1 * math.sin(t1) + model.l2 * math.sin(a12) + model.l3 * math.sin(phi)
    return Pose(x, y, phi)


def fk_positions(model: RobotModel, thetas: np.ndarray) -> np.ndarray:
    """Vectorised end-effector positions.

    ``thetas`` has shape ``(..., 3)``; the result has shape ``(..., 2)``.
    """
    thetas = np.asarray(thetas, dtype=float)
    a1 = thetas[..., 0]
    a12 = a1 + thetas[..., 1]
    phi = a12 + thetas[..., 2]
    # elementwise, not matmul: results must not depend on batch shape
    x = model.l1 * np.cos(a1) + model.l2 * np.cos(a12) + model.l3 * np.cos(phi)
    y = model.l1 * np.sin(a1) + model.l2 * np.sin(a12) + model.l3 * np.sin(phi)
    return np.stack([x, y], axis=-1)


def joint_positions(model: RobotModel, q: JointConfig) -> np.ndarray:
    """Base, elbow, wrist and tool positions as a ``(4, 2)`` array (for plotting)."""
    cum = np.cumsum(q.as_array())
    steps = model.lengths[:, None] * np.stack([np.cos(cum), np.sin(cum)], axis=-1)
    return np.vstack([np.zeros(2), np.cumsum(steps, axis=0)])


def wrist_center(model: RobotModel, pose: Pose) -> WristCenter:
    return WristCenter(
        pose.x - model.l3 * math.cos(pose.phi),
        pose.y - model.l3 * math.sin(pose.phi),
    )


def inverse_kinematics(
    model: RobotModel, pose: Pose, branch: ElbowBranch = ElbowBranch.MINUS
) -> JointConfig:
    """Analytical inverse kinematics for a pose with prescribed orientation.

    Raises
    ------
    UnreachableError
        If the wrist center lies outside the annulus ``[|l1-l2|, l1+l2]``.
    DegenerateError
        If the wrist center coincides with the base and ``l1 == l2``.
    """
    wc = wrist_center(model, pose)
    xn, yn = wc.xn, wc.yn
    l1, l2 = model.l1, model.l2
    c2 = (xn * xn + yn * yn - l1 * l1 - l2 * l2) / (2 * l1 * l2)
    radicand = 1.0 - c2 * c2
    if radicand < -REACH_TOL:
        dist = math.hypot(xn, yn)
        raise UnreachableError(
            f"wrist center ({xn:.6g}, {yn:.6g}) at distance {dist:.6g} is outside "
            f"[{abs(l1 - l2):.6g}, {l1 + l2:.6g}]",
            pose=pose,
        )
    if radicand <= REACH_TOL:
        # boundary of reach: sqrt would turn rounding noise into ~1e-8 rad
        radicand = 0.0
        c2 = math.copysign(1.0, c2)
    s2 = branch.value * math.sqrt(radicand)
    k1 = l1 + l2 * c2
    k2 = l2 * s2
    num = yn * k1 - xn * k2
    den = xn * k1 + yn * k2
    if num == 0.0 and den == 0.0:
        raise DegenerateError(
            "wrist center coincides with the base; theta1 is undefined"
        )
    t2 = math.atan2(s2, c2)
    t1 = math.atan2(num, den)
    t3 = pose.phi - (t1 + t2)
    return JointConfig(t1, t2, t3)


def fit_rest_to_rest(phi0: float, phiT: float, T: float) -> CubicProfile:
    """Cubic with zero rate at both ends, moving ``phi0 -> phiT`` in ``T`` seconds."""
    if not T > 0:
        raise ValidationError(f"NonpositiveDuration: T must be > 0, got {T!r}")
    delta = phiT - phi0
    return CubicProfile(phi0, 0.0, 3.0 * delta / T**2, -2.0 * delta / T**3, T)


def eval_profile(p: CubicProfile, t: float) -> float:
    if not 0.0 <= t <= p.T:
        raise ValidationError(f"OutOfRange: t={t!r} outside [0, {p.T}]")
    return p.c0 + t * (p.c1 + t * (p.c2 + t * p.c3))
