"""Benchmark tasks and scenario files.

Scenario files are TOML. Angles in files are degrees; everything built from a
:class:`ScenarioConfig` is in radians. The config keeps the file-level values
verbatim so that saving and reloading gives back an identical object.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np
import tomli_w

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ParseError, ValidationError
from .ga import GaParams
from .kinematics import (
    CubicProfile,
    ElbowBranch,
    JointConfig,
    Pose,
    RobotModel,
    fit_rest_to_rest,
    eval_profile,
    inverse_kinematics,
)
from .objective import FitnessWeights, TrackingProblem
from .pattern_search import PsParams

BUNDLED = ("line", "circle")


class TrajectorySource(enum.Enum):
    LINE = "line"
    CIRCLE = "circle"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Trajectory:
    points: tuple[Pose, ...]
    source: TrajectorySource = TrajectorySource.CUSTOM

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValidationError(f"BadCount: a trajectory needs >= 2 points, got {len(self.points)}")
        for i, p in enumerate(self.points):
            if not all(math.isfinite(c) for c in (p.x, p.y, p.phi)):
                raise ValidationError(f"trajectory point {i} is not finite: {p}")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def xy(self) -> np.ndarray:
        return np.array([(p.x, p.y) for p in self.points])

    @property
    def phi(self) -> np.ndarray:
        return np.array([p.phi for p in self.points])

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i) -> Pose:
        return self.points[i]


def _times(n: int, T: float) -> list[float]:
    return [T * i / (n - 1) for i in range(n)]


def _check_count(n):
    if n < 2:
        raise ValidationError(f"BadCount: need n >= 2 via points, got {n}")


def make_line(start, end, n: int, profile: CubicProfile) -> Trajectory:
    """``n`` equally spaced points from ``start`` to ``end`` inclusive."""
    _check_count(n)
    (x0, y0), (x1, y1) = start, end
    pts = []
    for i, t in enumerate(_times(n, profile.T)):
        if i == n - 1:
            x, y = x1, y1
        else:
            s = i / (n - 1)
            x, y = x0 + s * (x1 - x0), y0 + s * (y1 - y0)
        pts.append(Pose(x, y, eval_profile(profile, t)))
    return Trajectory(tuple(pts), TrajectorySource.LINE)


def make_circle(center, r: float, n: int, profile: CubicProfile,
                arc: tuple[float, float] = (0.0, 2 * math.pi)) -> Trajectory:
    """``n`` points on a circle of radius ``r``.

    A full revolution is sampled open (the start is not repeated); a partial
    arc includes both of its end angles.
    """
    _check_count(n)
    if not (math.isfinite(r) and r > 0):
        raise ValidationError(f"BadRadius: radius must be > 0, got {r!r}")
    a0, a1 = arc
    span = a1 - a0
    full = math.isclose(abs(span), 2 * math.pi, rel_tol=0, abs_tol=1e-12)
    step = span / n if full else span / (n - 1)
    cx, cy = center
    pts = []
    for i, t in enumerate(_times(n, profile.T)):
        a = a0 + i * step
        pts.append(Pose(cx + r * math.cos(a), cy + r * math.sin(a), eval_profile(profile, t)))
    return Trajectory(tuple(pts), TrajectorySource.CIRCLE)


# --------------------------------------------------------------------------
# scenario configuration


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "line"
    l1: float = 0.4
    l2: float = 0.3
    l3: float = 0.3
    limits_deg: tuple[tuple[float, float], ...] = ((-180.0, 180.0),) * 3
    kind: str = "line"
    line_start: tuple[float, float] = (0.8, 0.4)
    line_end: tuple[float, float] = (0.1, 0.9)
    circle_center: tuple[float, float] = (-0.05, 0.76)
    circle_radius: float = 0.15
    circle_arc_deg: tuple[float, float] = (0.0, 360.0)
    n: int = 20
    phi_start_deg: float = 30.0
    phi_end_deg: float = 70.0
    duration_s: float = 5.0
    initial_config_deg: tuple[float, float, float] = (60.0, -30.0, -30.0)
    # "analytic": via point 0 is the closed-form solution of the first pose on
    # the branch of initial_config; "initial": via point 0 is initial_config
    pin_start: str = "analytic"
    weights: FitnessWeights = FitnessWeights(0.4, 0.1, 0.3, 0.2)
    ga: GaParams = field(default_factory=GaParams)
    ps: PsParams = field(default_factory=PsParams)
    seed: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.kind not in ("line", "circle"):
            raise ValidationError(f"trajectory.kind must be 'line' or 'circle', got {self.kind!r}")
        if self.pin_start not in ("analytic", "initial"):
            raise ValidationError(f"pin_start must be 'analytic' or 'initial', got {self.pin_start!r}")
        if self.n < 2:
            raise ValidationError(f"n must be >= 2, got {self.n}")
        if not self.duration_s > 0:
            raise ValidationError(f"phi.duration_s must be > 0, got {self.duration_s}")
        if self.kind == "circle" and not self.circle_radius > 0:
            raise ValidationError(f"trajectory.circle.radius must be > 0, got {self.circle_radius}")
        self.robot()

    def robot(self) -> RobotModel:
        limits = tuple((math.radians(lo), math.radians(hi)) for lo, hi in self.limits_deg)
        return RobotModel(self.l1, self.l2, self.l3, limits)

    def profile(self) -> CubicProfile:
        return fit_rest_to_rest(
            math.radians(self.phi_start_deg), math.radians(self.phi_end_deg), self.duration_s
        )

    def initial_config(self) -> JointConfig:
        return JointConfig.from_degrees(*self.initial_config_deg)

    def branch(self) -> ElbowBranch:
        return ElbowBranch.of(self.initial_config().theta2)

    def trajectory(self) -> Trajectory:
        if self.kind == "line":
            return make_line(self.line_start, self.line_end, self.n, self.profile())
        a0, a1 = self.circle_arc_deg
        return make_circle(self.circle_center, self.circle_radius, self.n, self.profile(),
                           (math.radians(a0), math.radians(a1)))

    def start_config(self, trajectory: Optional[Trajectory] = None) -> JointConfig:
        """Configuration pinned at via point 0."""
        if self.pin_start == "initial":
            return self.initial_config()
        traj = self.trajectory() if trajectory is None else trajectory
        return inverse_kinematics(self.robot(), traj[0], self.branch())

    def problem(self) -> TrackingProblem:
        traj = self.trajectory()
        return TrackingProblem(self.robot(), traj, self.start_config(traj), self.weights)


# --------------------------------------------------------------------------
# file format

_GA_KEYS = [f.name for f in dataclasses.fields(GaParams) if f.name != "bounds"]
_PS_KEYS = [f.name for f in dataclasses.fields(PsParams) if f.name != "bounds"]


def _to_document(cfg: ScenarioConfig) -> dict:
    # both shapes are written so that a round trip keeps the inactive one too
    traj = {
        "kind": cfg.kind,
        "line": {"start": list(cfg.line_start), "end": list(cfg.line_end)},
        "circle": {
            "center": list(cfg.circle_center),
            "radius": cfg.circle_radius,
            "arc_deg": list(cfg.circle_arc_deg),
        },
    }
    ga = {k: getattr(cfg.ga, k) for k in _GA_KEYS}
    if ga["stall_generations"] is None:
        del ga["stall_generations"]
    return {
        "name": cfg.name,
        "n": cfg.n,
        "seed": cfg.seed,
        "initial_config_deg": list(cfg.initial_config_deg),
        "pin_start": cfg.pin_start,
        "robot": {
            "l1": cfg.l1,
            "l2": cfg.l2,
            "l3": cfg.l3,
            "limits": [list(lim) for lim in cfg.limits_deg],
        },
        "trajectory": traj,
        "phi": {
            "start_deg": cfg.phi_start_deg,
            "end_deg": cfg.phi_end_deg,
            "duration_s": cfg.duration_s,
        },
        "weights": dict(zip(("c1", "c2", "c3", "c4"), cfg.weights.as_tuple())),
        "ga": ga,
        "ps": {k: getattr(cfg.ps, k) for k in _PS_KEYS},
    }


def dumps_scenario(cfg: ScenarioConfig) -> str:
    header = "# gpstrack scenario; lengths in meters, angles in degrees, time in seconds\n"
    return header + tomli_w.dumps(_to_document(cfg))


def save_scenario(cfg: ScenarioConfig, path) -> None:
    Path(path).write_text(dumps_scenario(cfg), encoding="utf-8")


class _Reader:
    """Pops typed values out of a nested dict, reporting dotted field names."""

    def __init__(self, doc: dict, path):
        self.doc = doc
        self.path = path

    def fail(self, field, message):
        raise ParseError(message, field=field, path=self.path)

    def section(self, key, parent=None) -> dict:
        parent = self.doc if parent is None else parent
        value = parent.get(key, {})
        if not isinstance(value, dict):
            self.fail(key, "expected a table")
        return value

    def number(self, table, key, fname, default=None, *, integer=False):
        if key not in table:
            if default is None:
                self.fail(fname, "missing required value")
            return default
        v = table.pop(key)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.fail(fname, f"expected a number, got {v!r}")
        if integer:
            if not isinstance(v, int):
                self.fail(fname, f"expected an integer, got {v!r}")
            return v
        return float(v)

    def vector(self, table, key, fname, length, default=None):
        if key not in table:
            if default is None:
                self.fail(fname, "missing required value")
            return default
        v = table.pop(key)
        if not isinstance(v, list) or len(v) != length:
            self.fail(fname, f"expected a list of {length} numbers, got {v!r}")
        for item in v:
            if isinstance(item, bool) or not isinstance(item, (int, float)):
                self.fail(fname, f"expected numbers, got {item!r}")
        return tuple(float(item) for item in v)

    def leftover(self, table, prefix):
        for key in table:
            self.fail(f"{prefix}{key}", "unknown key")


def _params(reader, table, cls, keys, prefix):
    defaults = cls()
    kwargs = {}
    for key in keys:
        default = getattr(defaults, key)
        fname = prefix + key
        if key not in table:
            continue
        if isinstance(default, bool):
            v = table.pop(key)
            if not isinstance(v, bool):
                reader.fail(fname, f"expected true/false, got {v!r}")
            kwargs[key] = v
        elif isinstance(default, int) or default is None:
            kwargs[key] = reader.number(table, key, fname, integer=True)
        else:
            kwargs[key] = reader.number(table, key, fname)
    reader.leftover(table, prefix)
    return cls(**kwargs)


def parse_scenario(text: str, path=None) -> ScenarioConfig:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        raise ParseError(str(exc), line=line, path=path) from exc
    r = _Reader(doc, path)
    d = ScenarioConfig()
    robot = r.section("robot")
    traj = r.section("trajectory")
    phi = r.section("phi")
    weights = r.section("weights")
    ga_t = r.section("ga")
    ps_t = r.section("ps")

    name = doc.pop("name", d.name)
    if not isinstance(name, str):
        r.fail("name", "expected a string")
    pin = doc.pop("pin_start", d.pin_start)
    if not isinstance(pin, str):
        r.fail("pin_start", "expected a string")
    kind = traj.pop("kind", None)
    if kind not in ("line", "circle"):
        r.fail("trajectory.kind", f"expected 'line' or 'circle', got {kind!r}")

    limits = robot.pop("limits", [list(lim) for lim in d.limits_deg])
    if not (isinstance(limits, list) and len(limits) == 3
            and all(isinstance(lim, list) and len(lim) == 2 for lim in limits)):
        r.fail("robot.limits", "expected three [min, max] pairs in degrees")
    try:
        limits = tuple((float(lo), float(hi)) for lo, hi in limits)
    except (TypeError, ValueError):
        r.fail("robot.limits", "limits must be numbers")

    kwargs = dict(
        name=name,
        pin_start=pin,
        kind=kind,
        n=r.number(doc, "n", "n", d.n, integer=True),
        seed=r.number(doc, "seed", "seed", d.seed, integer=True),
        initial_config_deg=r.vector(doc, "initial_config_deg", "initial_config_deg", 3,
                                    d.initial_config_deg),
        l1=r.number(robot, "l1", "robot.l1", d.l1),
        l2=r.number(robot, "l2", "robot.l2", d.l2),
        l3=r.number(robot, "l3", "robot.l3", d.l3),
        limits_deg=limits,
        phi_start_deg=r.number(phi, "start_deg", "phi.start_deg", d.phi_start_deg),
        phi_end_deg=r.number(phi, "end_deg", "phi.end_deg", d.phi_end_deg),
        duration_s=r.number(phi, "duration_s", "phi.duration_s", d.duration_s),
    )
    line = r.section("line", traj)
    circle = r.section("circle", traj)
    traj.pop("line", None)
    traj.pop("circle", None)

    def opt(default, active):
        # only the active shape is mandatory
        return None if active else default

    kwargs["line_start"] = r.vector(line, "start", "trajectory.line.start", 2,
                                    opt(d.line_start, kind == "line"))
    kwargs["line_end"] = r.vector(line, "end", "trajectory.line.end", 2,
                                  opt(d.line_end, kind == "line"))
    kwargs["circle_center"] = r.vector(circle, "center", "trajectory.circle.center", 2,
                                       opt(d.circle_center, kind == "circle"))
    kwargs["circle_radius"] = r.number(circle, "radius", "trajectory.circle.radius",
                                       opt(d.circle_radius, kind == "circle"))
    kwargs["circle_arc_deg"] = r.vector(circle, "arc_deg", "trajectory.circle.arc_deg", 2,
                                        d.circle_arc_deg)
    r.leftover(line, "trajectory.line.")
    r.leftover(circle, "trajectory.circle.")
    r.leftover(traj, "trajectory.")
    r.leftover(robot, "robot.")
    r.leftover(phi, "phi.")

    w = tuple(r.number(weights, k, f"weights.{k}") for k in ("c1", "c2", "c3", "c4"))
    r.leftover(weights, "weights.")
    try:
        kwargs["weights"] = FitnessWeights(*w)
        kwargs["ga"] = _params(r, ga_t, GaParams, _GA_KEYS, "ga.")
        kwargs["ps"] = _params(r, ps_t, PsParams, _PS_KEYS, "ps.")
    except ParseError:
        raise
    except ValidationError as exc:
        raise ValidationError(f"{path or '<scenario>'}: {exc}") from exc
    for key in ("robot", "trajectory", "phi", "weights", "ga", "ps"):
        doc.pop(key, None)
    r.leftover(doc, "")
    try:
        return ScenarioConfig(**kwargs)
    except ParseError:
        raise
    except ValidationError as exc:
        raise ValidationError(f"{path or '<scenario>'}: {exc}") from exc


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), path)


def bundled_scenario_text(name: str) -> str:
    if name not in BUNDLED:
        raise ValidationError(f"no bundled scenario {name!r}; choose from {BUNDLED}")
    return resources.files("gpstrack.scenarios").joinpath(f"{name}.scenario").read_text("utf-8")


def bundled_scenario(name: str) -> ScenarioConfig:
    return parse_scenario(bundled_scenario_text(name), f"<bundled {name}.scenario>")
