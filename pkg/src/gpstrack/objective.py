"""Fitness terms for a joint-space via-point path.

A path is an array of shape ``(..., n, 3)``: row ``i`` holds the joint angles
at via point ``i``. Every term accepts leading batch dimensions, so the same
code scores a single path or a whole population.

The optimiser works on a flat decision vector of ``3 * (n - 1)`` genes. Via
point 0 is pinned and therefore not part of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import LengthMismatchError, ValidationError
from .kinematics import JointConfig, RobotModel, fk_positions

if TYPE_CHECKING:
    from .scenario import Trajectory

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class FitnessWeights:
    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self):
        w = self.as_tuple()
        if any(not math.isfinite(c) or c < 0 for c in w):
            raise ValidationError(f"fitness weights must be finite and >= 0, got {w}")
        if abs(math.fsum(w) - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError(f"fitness weights must sum to 1, got sum {math.fsum(w)!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.c1, self.c2, self.c3, self.c4)


LINE_WEIGHTS = FitnessWeights(0.4, 0.1, 0.3, 0.2)
CIRCLE_WEIGHTS = FitnessWeights(0.7, 0.1, 0.1, 0.1)


@dataclass(frozen=True)
class FitnessBreakdown:
    e_e: float
    d_j: float
    v_e: float
    v_j: float
    f_fit: float
    f_eval: float

    def as_dict(self) -> dict[str, float]:
        return {
            "e_e": self.e_e,
            "d_j": self.d_j,
            "v_e": self.v_e,
            "v_j": self.v_j,
            "f_fit": self.f_fit,
            "f_eval": self.f_eval,
        }


def _as_initial(initial) -> np.ndarray:
    if isinstance(initial, JointConfig):
        return initial.as_array()
    return np.asarray(initial, dtype=float).reshape(3)


def decode(v, initial, bounds=None) -> np.ndarray:
    """Turn decision vector(s) into path(s), prepending the pinned ``initial`` row.

    ``v`` may be ``(d,)`` or ``(m, d)`` with ``d`` a multiple of 3. If
    ``bounds`` (``(3, 2)`` joint limits) is given, genes are clamped into it.
    """
    v = np.asarray(v, dtype=float)
    if v.shape[-1] % 3:
        raise LengthMismatchError(f"decision vector length {v.shape[-1]} is not a multiple of 3")
    triples = v.reshape(v.shape[:-1] + (-1, 3))
    if bounds is not None:
        bounds = np.asarray(bounds, dtype=float)
        triples = np.clip(triples, bounds[:, 0], bounds[:, 1])
    first = np.broadcast_to(_as_initial(initial), v.shape[:-1] + (1, 3))
    return np.concatenate([first, triples], axis=-2)


def encode(path) -> np.ndarray:
    """Inverse of :func:`decode`: drop the pinned row and flatten."""
    path = np.asarray(path, dtype=float)
    return path[..., 1:, :].reshape(path.shape[:-2] + (-1,))


def point_errors(path, traj: "Trajectory", model: RobotModel) -> np.ndarray:
    """Per-via-point Euclidean tracking error, shape ``(..., n)``."""
    path = np.asarray(path, dtype=float)
    target = traj.xy
    if path.shape[-2] != target.shape[0]:
        raise LengthMismatchError(
            f"path has {path.shape[-2]} via points, trajectory has {target.shape[0]}"
        )
    diff = fk_positions(model, path) - target
    return np.hypot(diff[..., 0], diff[..., 1])


def position_error(path, traj: "Trajectory", model: RobotModel):
    """Sum of planar position errors over all via points (orientation ignored)."""
    return point_errors(path, traj, model).sum(axis=-1)


def joint_displacement(path):
    """Sum of squared joint increments between successive via points."""
    steps = np.diff(np.asarray(path, dtype=float), axis=-2)
    return (steps**2).sum(axis=(-2, -1))


def _spread(x):
    return ((x - x.mean(axis=-1, keepdims=True)) ** 2).sum(axis=-1)


def cartesian_uniformity(path, model: RobotModel):
    """Squared deviation of the Cartesian step lengths from their mean."""
    xy = fk_positions(model, path)
    gaps = np.diff(xy, axis=-2)
    return _spread(np.hypot(gaps[..., 0], gaps[..., 1]))


def joint_uniformity(path):
    """Squared deviation of per-step total joint motion from its mean."""
    steps = np.abs(np.diff(np.asarray(path, dtype=float), axis=-2)).sum(axis=-1)
    return _spread(steps)


def weighted_fitness(weights: FitnessWeights, e_e, d_j, v_e, v_j):
    return weights.c1 * e_e + weights.c2 * d_j + weights.c3 * v_e + weights.c4 * v_j


def breakdown_of_path(path, traj, model, weights) -> FitnessBreakdown:
    e_e = float(position_error(path, traj, model))
    d_j = float(joint_displacement(path))
    v_e = float(cartesian_uniformity(path, model))
    v_j = float(joint_uniformity(path))
    return FitnessBreakdown(
        e_e, d_j, v_e, v_j, float(weighted_fitness(weights, e_e, d_j, v_e, v_j)), e_e
    )


@dataclass(frozen=True)
class TrackingProblem:
    """Immutable context for scoring decision vectors against one trajectory."""

    model: RobotModel
    trajectory: "Trajectory"
    start: JointConfig
    weights: FitnessWeights

    @property
    def n_points(self) -> int:
        return self.trajectory.n

    @property
    def dim(self) -> int:
        return 3 * (self.trajectory.n - 1)

    @property
    def bounds(self) -> np.ndarray:
        """Per-gene ``(dim, 2)`` bounds from the joint limits."""
        return np.tile(self.model.bounds, (self.trajectory.n - 1, 1))

    def decode(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape[-1] != self.dim:
            raise LengthMismatchError(f"expected {self.dim} genes, got {v.shape[-1]}")
        return decode(v, self.start, self.model.bounds)

    def fitness_values(self, v):
        """Weighted fitness of one vector or a ``(m, dim)`` batch."""
        path = self.decode(v)
        return weighted_fitness(
            self.weights,
            position_error(path, self.trajectory, self.model),
            joint_displacement(path),
            cartesian_uniformity(path, self.model),
            joint_uniformity(path),
        )

    def tracking_values(self, v):
        """Total tracking error of one vector or a ``(m, dim)`` batch."""
        return position_error(self.decode(v), self.trajectory, self.model)


def fitness(v, ctx: TrackingProblem) -> FitnessBreakdown:
    return breakdown_of_path(ctx.decode(v), ctx.trajectory, ctx.model, ctx.weights)


def tracking_objective(v, ctx: TrackingProblem) -> float:
    return float(ctx.tracking_values(v))
