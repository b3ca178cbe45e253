"""Convergence studies and single trajectories with file output.

A study runs one manufactured case over an increasing sequence of mesh
sizes and collects the squared space-time errors into per-kind convergence
tables.  Results can be written as CSV (one table per error kind), as a
JSON mirror of all tables, and as a gnuplot script plotting error against
mesh count.  Floats are serialised with ``repr`` so that parsing the files
recovers them exactly.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .manufactured import get_case
from .metrics import KINDS, SPACE_RULES, EocTable, ErrorReport, build_table
from .scheme import RunResult, SchemeConfig, run

__all__ = [
    "PRESETS",
    "DEFAULT_N",
    "DEFAULT_N_FINE",
    "StudySpec",
    "StudyResult",
    "run_study",
    "run_single",
]

# Penalty presets mu(h) = C_mu h^r used throughout the convergence studies.
PRESETS = {
    "40h": (40.0, 1.0),
    "4000h2": (4000.0, 2.0),
    "300h1.5": (300.0, 1.5),
    "4h0.5": (4.0, 0.5),
}

DEFAULT_N = (61, 81, 101, 131, 161, 201)
# The oscillatory case resolves its geometry on finer meshes as well.
DEFAULT_N_FINE = DEFAULT_N + (251, 301)

FORMATS = ("csv", "json", "gnuplot")


@dataclass(frozen=True)
class StudySpec:
    """One convergence study: a case, a penalty law and a mesh sequence."""

    case: str
    c_mu: float
    r: float
    n_values: tuple = DEFAULT_N
    T: float = 1.0
    delta: Optional[float] = None
    initializer: str = "ritz"
    space_rule: str = "gauss"
    formats: tuple = FORMATS
    jobs: int = 1

    def __post_init__(self):
        if len(self.n_values) < 1:
            raise ValueError("a study needs at least one mesh")
        if self.space_rule not in SPACE_RULES:
            raise ValueError(f"unknown space_rule {self.space_rule!r}: expected one of {SPACE_RULES}")
        unknown = set(self.formats) - set(FORMATS)
        if unknown:
            raise ValueError(f"unknown output formats: {sorted(unknown)}")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")

    @classmethod
    def from_preset(cls, case: str, preset: str, **kwargs) -> "StudySpec":
        try:
            c_mu, r = PRESETS[preset]
        except KeyError:
            raise KeyError(
                f"unknown preset {preset!r}; available: {', '.join(PRESETS)}"
            ) from None
        return cls(case=case, c_mu=c_mu, r=r, **kwargs)

    def config(self, n: int) -> SchemeConfig:
        return SchemeConfig(
            n_elements=n,
            c_mu=self.c_mu,
            r=self.r,
            T=self.T,
            delta=self.delta,
            initializer=self.initializer,
        )


@dataclass
class StudyResult:
    spec: StudySpec
    reports: dict
    failures: dict
    table: Optional[EocTable]
    files: list = field(default_factory=list)


def _study_run(spec: StudySpec, n: int) -> ErrorReport:
    result = run(spec.config(n), get_case(spec.case), space_rule=spec.space_rule)
    return result.errors


def _study_worker(payload):
    spec, n = payload
    try:
        return n, _study_run(spec, n), None
    except Exception as exc:  # noqa: BLE001 - reported per mesh in the table
        return n, None, f"{type(exc).__name__}: {exc}"


def run_study(
    spec: StudySpec,
    out_dir=None,
    *,
    progress: Optional[Callable] = None,
) -> StudyResult:
    """Run every mesh of a study and assemble the convergence tables.

    A failing mesh is recorded under ``failures`` and left out of the
    tables instead of aborting the remaining runs.
    """
    reports: dict = {}
    failures: dict = {}
    payloads = [(spec, n) for n in spec.n_values]
    if spec.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            outcomes = list(pool.map(_study_worker, payloads))
    else:
        outcomes = []
        for payload in payloads:
            started = time.perf_counter()
            outcome = _study_worker(payload)
            if progress is not None:
                progress(payload[1], time.perf_counter() - started, outcome[2])
            outcomes.append(outcome)
    for n, report, error in outcomes:
        if error is None:
            reports[n] = report
        else:
            failures[n] = error

    table = None
    good = sorted(reports)
    if len(good) >= 1:
        table = build_table(
            spec.case, spec.c_mu, spec.r, [reports[n] for n in good]
        )
    result = StudyResult(spec=spec, reports=reports, failures=failures, table=table)
    if out_dir is not None and table is not None:
        result.files = write_study(result, Path(out_dir))
    return result


def _fmt(value) -> str:
    return repr(float(value))


def table_csv(table: EocTable, kind: str) -> str:
    """CSV of one error kind: header ``N,error,eoc``, empty order first."""
    errors, eocs = table.column(kind)
    lines = ["N,error,eoc"]
    for n, err, order in zip(table.n_values, errors, eocs):
        lines.append(f"{n},{_fmt(err)},{'' if order is None else _fmt(order)}")
    return "\n".join(lines) + "\n"


def table_json(result: StudyResult) -> dict:
    table = result.table
    payload = {
        "case": table.case,
        "c_mu": table.c_mu,
        "r": table.r,
        "T": result.spec.T,
        "initializer": result.spec.initializer,
        "space_rule": result.spec.space_rule,
        "n_values": list(table.n_values),
        "kinds": {
            kind: {
                "error": list(map(float, table.errors[kind])),
                "eoc": [None if x is None else float(x) for x in table.eocs[kind]],
            }
            for kind in KINDS
        },
        "failures": {str(n): msg for n, msg in sorted(result.failures.items())},
    }
    return payload


def _study_gnuplot() -> str:
    lines = [
        "# Squared space-time errors against mesh count, log-log.",
        "set terminal pngcairo size 1000,700",
        "set output 'study.png'",
        "set datafile separator ','",
        "set logscale xy",
        "set xlabel 'N'",
        "set ylabel 'squared error'",
        "set key outside right",
        "plot \\",
    ]
    plots = [
        f"  'eoc_{kind}.csv' skip 1 using 1:2 with linespoints title '{kind}'"
        for kind in KINDS
    ]
    lines.append(", \\\n".join(plots))
    return "\n".join(lines) + "\n"


def write_study(result: StudyResult, out_dir: Path) -> list:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = []
    formats = result.spec.formats
    if "csv" in formats:
        for kind in KINDS:
            path = out_dir / f"eoc_{kind}.csv"
            path.write_text(table_csv(result.table, kind))
            files.append(path)
    if "json" in formats:
        path = out_dir / "eoc_tables.json"
        path.write_text(json.dumps(table_json(result), indent=2) + "\n")
        files.append(path)
    if "gnuplot" in formats:
        path = out_dir / "study.gp"
        path.write_text(_study_gnuplot())
        files.append(path)
    return files


def trajectory_rows(result: RunResult):
    """Rows ``t, x, u, w, c`` for every snapshot state and node."""
    for state in result.snapshots:
        nodes = result.mesh.nodes
        for j in range(nodes.size):
            yield (
                state.t,
                nodes[j],
                state.u.values[j],
                state.w.values[j],
                state.c.values[j],
            )


def trajectory_csv(result: RunResult) -> str:
    lines = ["t,x,u,w,c"]
    for t, x, u, w, c in trajectory_rows(result):
        lines.append(f"{_fmt(t)},{_fmt(x)},{_fmt(u)},{_fmt(w)},{_fmt(c)}")
    return "\n".join(lines) + "\n"


def diagnostics_csv(result: RunResult) -> str:
    """One row per completed step; the initial state is not a row."""
    d = result.diagnostics
    lines = ["m,t,length,bending,c_mass"]
    for i in range(1, d.m.size):
        lines.append(
            f"{int(d.m[i])},{_fmt(d.t[i])},{_fmt(d.length[i])},"
            f"{_fmt(d.bending[i])},{_fmt(d.c_mass[i])}"
        )
    return "\n".join(lines) + "\n"


def _single_json(result: RunResult) -> dict:
    d = result.diagnostics
    return {
        "n_elements": result.mesh.n_elements,
        "mu": result.mu,
        "delta": result.delta,
        "n_steps": result.n_steps,
        "newton_iterations": d.newton_iterations,
        "snapshots": [
            {
                "m": state.m,
                "t": state.t,
                "x": result.mesh.nodes.tolist(),
                "u": state.u.values.tolist(),
                "w": state.w.values.tolist(),
                "c": state.c.values.tolist(),
            }
            for state in result.snapshots
        ],
        "diagnostics": {
            "m": d.m[1:].tolist(),
            "t": d.t[1:].tolist(),
            "length": d.length[1:].tolist(),
            "bending": d.bending[1:].tolist(),
            "c_mass": d.c_mass[1:].tolist(),
        },
        "errors": None if result.errors is None else result.errors.as_dict(),
    }


def _single_gnuplot() -> str:
    return "\n".join(
        [
            "# Snapshot profiles and energy-like diagnostics of one run.",
            "set terminal pngcairo size 1200,500",
            "set output 'single.png'",
            "set datafile separator ','",
            "set multiplot layout 1,2",
            "set xlabel 'x'",
            "set ylabel 'u'",
            "plot 'trajectory.csv' skip 1 using 2:3 with points pt 7 ps 0.3 title 'u snapshots'",
            "set xlabel 't'",
            "set ylabel 'value'",
            "plot 'diagnostics.csv' skip 1 using 2:3 with lines title 'length', \\",
            "     'diagnostics.csv' skip 1 using 2:4 with lines title 'bending', \\",
            "     'diagnostics.csv' skip 1 using 2:5 with lines title 'c mass'",
            "unset multiplot",
        ]
    ) + "\n"


def run_single(
    case: str,
    n: int,
    c_mu: float,
    r: float,
    *,
    T: float = 1.0,
    delta: Optional[float] = None,
    initializer: str = "ritz",
    out_dir=None,
    formats: Sequence[str] = FORMATS,
    snapshot_times: Optional[Sequence[float]] = None,
    progress: Optional[Callable] = None,
) -> RunResult:
    """One trajectory with snapshot and diagnostics output."""
    cfg = SchemeConfig(
        n_elements=n, c_mu=c_mu, r=r, T=T, delta=delta, initializer=initializer
    )
    if snapshot_times is None:
        snapshot_times = tuple(np.linspace(0.0, T, 5))
    result = run(
        cfg, get_case(case), snapshot_times=snapshot_times, progress=progress
    )
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        if "csv" in formats:
            (out_dir / "trajectory.csv").write_text(trajectory_csv(result))
            (out_dir / "diagnostics.csv").write_text(diagnostics_csv(result))
        if "json" in formats:
            (out_dir / "run.json").write_text(
                json.dumps(_single_json(result), indent=2) + "\n"
            )
        if "gnuplot" in formats:
            (out_dir / "single.gp").write_text(_single_gnuplot())
    return result
