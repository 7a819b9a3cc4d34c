"""SVG figures: arm snapshots, joint-angle profiles and per-point tracking error."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .kinematics import JointConfig, joint_positions  # noqa: E402

# fixed salt and no date so reruns produce identical files
matplotlib.rcParams["svg.hashsalt"] = "gpstrack"
_META = {"Date": None, "Creator": "gpstrack"}


def _save(fig, path: Path):
    fig.savefig(path, format="svg", metadata=_META)
    plt.close(fig)
    return path


def configuration_plot(result, scenario, path: Path):
    model = scenario.robot()
    traj = scenario.trajectory()
    fig, ax = plt.subplots(figsize=(5, 5))
    for q in result.path:
        pts = joint_positions(model, JointConfig(*q))
        ax.plot(pts[:, 0], pts[:, 1], "-o", color="0.55", lw=0.8, ms=2)
    xy = traj.xy
    ax.plot(xy[:, 0], xy[:, 1], "r.", ms=6, label="desired via points")
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title(f"{scenario.name}: {result.arm.value} configuration")
    ax.legend(loc="lower left", fontsize=8)
    return _save(fig, path)


def angles_plot(results, path: Path):
    fig, ax = plt.subplots(figsize=(6, 4))
    styles = ["-", "--", ":"]
    for r, ls in zip(results, styles * 2):
        idx = np.arange(len(r.path))
        for k in range(3):
            ax.plot(idx, np.degrees(r.path[:, k]), ls, color=f"C{k}",
                    label=f"{r.arm.value} theta{k + 1}")
    ax.set_xlabel("via point")
    ax.set_ylabel("joint angle [deg]")
    ax.legend(fontsize=7, ncol=len(results))
    return _save(fig, path)


def errors_plot(results, path: Path):
    fig, ax = plt.subplots(figsize=(6, 4))
    width = 0.8 / len(results)
    for j, r in enumerate(results):
        idx = np.arange(len(r.point_errors))
        ax.bar(idx + (j - (len(results) - 1) / 2) * width, r.point_errors, width,
               label=f"{r.arm.value} (total {r.f_eval:.3g} m)")
    ax.set_xlabel("via point")
    ax.set_ylabel("tracking error [m]")
    ax.legend(fontsize=8)
    return _save(fig, path)


def write_plots(results, scenario, out: Path) -> list[Path]:
    out = Path(out)
    paths = [configuration_plot(r, scenario, out / f"configuration_{r.arm.value}.svg")
             for r in results]
    paths.append(angles_plot(results, out / "angles.svg"))
    paths.append(errors_plot(results, out / "errors.svg"))
    return paths
