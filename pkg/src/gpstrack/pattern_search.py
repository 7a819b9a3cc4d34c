"""Generalized pattern search with a coordinate pattern.

Each iteration polls ``x + mesh * d`` for the 2N directions ``+e1, -e1, +e2,
-e2, ...``. A strict improvement moves the incumbent and expands the mesh;
otherwise the mesh contracts. There is no search phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _evaluate
from .errors import ValidationError


@dataclass(frozen=True)
class PsParams:
    initial_mesh: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    mesh_tolerance: float = 1e-6
    max_iterations: int = 10_000
    max_evaluations: int = 1_000_000
    complete_poll: bool = True
    bounds: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not 0 < self.contraction < 1 < self.expansion:
            raise ValidationError(
                f"need 0 < contraction < 1 < expansion, got {self.contraction}, {self.expansion}"
            )
        if not self.mesh_tolerance > 0 or not self.initial_mesh > 0:
            raise ValidationError("mesh_tolerance and initial_mesh must be > 0")
        if self.max_iterations < 1 or self.max_evaluations < 1:
            raise ValidationError("iteration and evaluation budgets must be >= 1")
        if self.bounds is not None:
            b = np.asarray(self.bounds, dtype=float)
            if b.ndim != 2 or b.shape[1] != 2 or np.any(b[:, 0] > b[:, 1]):
                raise ValidationError("bounds must be a (d, 2) array with lo <= hi")
            object.__setattr__(self, "bounds", b)


@dataclass
class PsTrace:
    values: np.ndarray  # incumbent value after each iteration
    meshes: np.ndarray  # mesh size used by each iteration's poll
    successes: np.ndarray  # bool per iteration
    x: np.ndarray
    fun: float
    start_value: float
    evaluations: int
    final_mesh: float
    stop_reason: str
    # reserved for a search phase ahead of the poll; always empty here
    search_steps: list = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.values)


def poll_directions(dim: int) -> np.ndarray:
    """The ``(2*dim, dim)`` positive basis in consecutive order."""
    if dim < 1:
        raise ValidationError(f"dim must be >= 1, got {dim}")
    eye = np.eye(dim)
    dirs = np.empty((2 * dim, dim))
    dirs[0::2] = eye
    dirs[1::2] = -eye
    return dirs


def _candidates(x, mesh, directions, bounds):
    pts = x + mesh * directions
    if bounds is not None:
        pts = np.clip(pts, bounds[:, 0], bounds[:, 1])
    keep = np.any(pts != x, axis=1)
    return pts[keep]


def poll_step(f, x, fx: float, mesh: float, params: PsParams, *, directions=None,
              vectorized: bool = False, workers: int = 1):
    """Poll around ``x`` once.

    Returns ``(x_new, f_new, success, n_evaluations)``. With a complete poll
    all candidates are scored and the best strict improvement wins, the
    earliest direction breaking ties. Otherwise the first improving candidate
    is taken.
    """
    x = np.asarray(x, dtype=float)
    if not mesh > 0:
        raise ValidationError(f"mesh must be > 0, got {mesh}")
    directions = poll_directions(x.size) if directions is None else directions
    pts = _candidates(x, mesh, directions, params.bounds)
    if len(pts) == 0:
        return x, fx, False, 0
    if params.complete_poll:
        vals = _evaluate.evaluate(f, pts, vectorized=vectorized, workers=workers)
        i = int(np.argmin(vals))
        if vals[i] < fx:
            return pts[i], float(vals[i]), True, len(pts)
        return x, fx, False, len(pts)
    for n, p in enumerate(pts, start=1):
        v = float(_evaluate.evaluate(f, p[None, :], vectorized=vectorized)[0])
        if v < fx:
            return p, v, True, n
    return x, fx, False, len(pts)


def run_ps(f, start, params: PsParams, *, vectorized: bool = False, workers: int = 1) -> PsTrace:
    """Refine ``start`` until the mesh drops below tolerance or a budget runs out."""
    x = np.asarray(start, dtype=float).ravel().copy()
    bounds = params.bounds
    if bounds is not None:
        if len(bounds) != x.size:
            raise ValidationError(f"bounds cover {len(bounds)} genes, start has {x.size}")
        if np.any(x < bounds[:, 0]) or np.any(x > bounds[:, 1]):
            raise ValidationError("start point lies outside the bounds")
    directions = poll_directions(x.size)
    fx = float(_evaluate.evaluate(f, x[None, :], vectorized=vectorized)[0])
    f0 = fx
    evals = 1
    mesh = params.initial_mesh
    values, meshes, successes = [], [], []
    stop = "max_iterations"
    for _ in range(params.max_iterations):
        if evals >= params.max_evaluations:
            stop = "max_evaluations"
            break
        x, fx, ok, n = poll_step(f, x, fx, mesh, params, directions=directions,
                                 vectorized=vectorized, workers=workers)
        evals += n
        values.append(fx)
        meshes.append(mesh)
        successes.append(ok)
        mesh = mesh * (params.expansion if ok else params.contraction)
        if mesh < params.mesh_tolerance:
            stop = "mesh_tolerance"
            break
    return PsTrace(
        values=np.array(values),
        meshes=np.array(meshes),
        successes=np.array(successes, dtype=bool),
        x=x,
        fun=fx,
        start_value=f0,
        evaluations=evals,
        final_mesh=mesh,
        stop_reason=stop,
    )
