"""Write run results as CSV tables, a TOML summary and optional SVG plots."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Optional, Sequence

import tomli_w

from .errors import ValidationError

ANGLES = "angles.csv"
ERRORS = "errors.csv"
TRACE = "trace.csv"
SUMMARY = "summary.toml"


def _fmt(x) -> str:
    return repr(float(x))


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _open(path: Path):
    return path.open("w", newline="", encoding="utf-8")


def write_angles(results, path: Path):
    with _open(path) as fh:
        w = _writer(fh)
        w.writerow(["index"] + [f"{r.arm.value}_theta{k}_deg" for r in results for k in (1, 2, 3)])
        for i in range(len(results[0].path)):
            row = [i]
            for r in results:
                row += [_fmt(math.degrees(t)) for t in r.path[i]]
            w.writerow(row)


def write_errors(results, path: Path):
    with _open(path) as fh:
        w = _writer(fh)
        w.writerow(["index"] + [r.arm.value for r in results])
        for i in range(len(results[0].point_errors)):
            w.writerow([i] + [_fmt(r.point_errors[i]) for r in results])


def write_trace(results, path: Path):
    with _open(path) as fh:
        w = _writer(fh)
        w.writerow(["arm", "stage", "step", "best", "mean", "mesh", "success"])
        for r in results:
            if r.ga_trace is not None:
                t = r.ga_trace
                for g in range(t.generations):
                    w.writerow([r.arm.value, "ga", g + 1, _fmt(t.best_fitness[g]),
                                _fmt(t.mean_fitness[g]), "", ""])
            if r.ps_trace is not None:
                t = r.ps_trace
                for k in range(t.iterations):
                    w.writerow([r.arm.value, "ps", k + 1, _fmt(t.values[k]), "",
                                _fmt(t.meshes[k]), int(t.successes[k])])


def summary_document(results, scenario: Optional[str] = None) -> dict:
    doc = {}
    if scenario is not None:
        doc["scenario"] = scenario
    arms = {}
    for r in results:
        entry = {k: float(v) for k, v in r.breakdown.as_dict().items()}
        entry["duration_s"] = float(r.duration_s)
        if r.seed is not None:
            entry["seed"] = int(r.seed)
        if r.ga_trace is not None:
            entry["ga_generations"] = r.ga_trace.generations
            entry["ga_evaluations"] = r.ga_trace.evaluations
        if r.ps_trace is not None:
            entry["ps_iterations"] = r.ps_trace.iterations
            entry["ps_evaluations"] = r.ps_trace.evaluations
            entry["ps_stop_reason"] = r.ps_trace.stop_reason
        arms[r.arm.value] = entry
    doc["arms"] = arms
    return doc


def emit_report(results: Sequence, out_dir, *, scenario=None, plots: bool = False) -> list[Path]:
    """Write all report files into ``out_dir`` and return their paths.

    ``scenario`` (a :class:`~gpstrack.scenario.ScenarioConfig`) is only needed
    for the plots and for naming the scenario in the summary.
    """
    if not results:
        raise ValidationError("emit_report needs at least one result")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / ANGLES, out / ERRORS, out / TRACE, out / SUMMARY]
    write_angles(results, written[0])
    write_errors(results, written[1])
    write_trace(results, written[2])
    name = scenario.name if scenario is not None else None
    written[3].write_text(tomli_w.dumps(summary_document(results, name)), encoding="utf-8")
    if plots:
        if scenario is None:
            raise ValidationError("plots need the scenario configuration")
        from . import plots as _plots

        written += _plots.write_plots(results, scenario, out)
    return written
