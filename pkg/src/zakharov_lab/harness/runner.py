"""Run an experiment and persist its artifacts."""
from __future__ import annotations

import json
from pathlib import Path

from .config import RunConfig
from .experiments import ExperimentResult, run_experiment
from .io import DIAGNOSTIC_COLUMNS, _jsonable, versions, write_manifest, write_snapshot, write_table


def snapshot_indices(n_states: int, every: int) -> list[int]:
    """Always the first and last recorded state, plus every ``every``-th one."""
    idx = {0, n_states - 1}
    if every > 0:
        idx.update(range(0, n_states, every))
    return sorted(i for i in idx if i >= 0)


def write_artifacts(cfg: RunConfig, res: ExperimentResult, out: str | Path) -> list[str]:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for name, rows in res.tables.items():
        fname = "diagnostics.csv" if name == "diagnostics" else f"{name}.csv"
        cols = DIAGNOSTIC_COLUMNS if name == "diagnostics" else None
        write_table(out / fname, rows, cols)
        files.append(fname)
    traj = res.trajectory
    if traj is not None and len(traj):
        snapdir = out / "snapshots"
        snapdir.mkdir(exist_ok=True)
        for i in snapshot_indices(len(traj), cfg.snapshot_every):
            fname = f"snapshots/snap_{i:06d}.zsnap"
            write_snapshot(out / fname, traj.states[i], traj.times[i], cfg.physics.s, cfg.physics.N)
            files.append(fname)
    summary = {
        "experiment": res.experiment,
        "summary": res.summary,
        "checks": res.checks,
        "blowup": res.blowup,
        "exit_code": res.exit_code,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True, default=_jsonable) + "\n", encoding="utf-8")
    files.append("summary.json")
    write_manifest(
        out / "manifest.json",
        {
            "experiment": cfg.experiment,
            "seed": cfg.seed,
            "config": cfg.model_dump(mode="json"),
            "versions": versions(),
            "files": files,
        },
    )
    return files + ["manifest.json"]


def execute(cfg: RunConfig, out: str | Path | None = None) -> ExperimentResult:
    res = run_experiment(cfg)
    if out is not None:
        write_artifacts(cfg, res, out)
    return res
