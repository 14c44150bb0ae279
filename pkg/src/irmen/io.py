"""File formats: images, trace/sweep CSVs, run summaries, and manifests.

Images are plain text, one row per line, entries "+1"/"-1" whitespace
separated.  CSV output is comma-separated with a single header row and all
numbers rendered with 9 significant digits, so files are diffable and
platform independent.
"""

from __future__ import annotations

import json
import os
from datetime import datetime, timezone

import numpy as np

from .experiments import SWEEP_COLUMNS, EnergyDelay, Workload, gen_circle_image
from .network import Trace

TRACE_COLUMNS = ("t_ps", "E_pct", "energy_fJ_total", "p_drive_uW", "p_leak_uW", "p_charge_uW")


def fmt9(x: float) -> str:
    """Render a number with 9 significant digits."""
    return f"{x:.9g}"


def write_image(path: str, image: np.ndarray) -> None:
    img = np.asarray(image, dtype=int)
    with open(path, "w", encoding="utf-8") as f:
        for row in img:
            f.write(" ".join("+1" if v > 0 else "-1" for v in row))
            f.write("\n")


def read_image(path: str) -> np.ndarray:
    rows: list[list[int]] = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            tokens = line.split()
            if not tokens:
                continue
            try:
                vals = [int(t) for t in tokens]
            except ValueError:
                raise ValueError(f"{path}:{lineno}: image entries must be +1/-1") from None
            if any(v not in (1, -1) for v in vals):
                raise ValueError(f"{path}:{lineno}: image entries must be +1/-1")
            rows.append(vals)
    if not rows:
        raise ValueError(f"{path}: empty image")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError(f"{path}: ragged image rows")
    return np.array(rows, dtype=np.int64)


def write_trace_csv(path: str, trace: Trace) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(",".join(TRACE_COLUMNS) + "\r\n")
        for i in range(trace.t.size):
            f.write(",".join((
                fmt9(trace.t[i] * 1e12),
                fmt9(trace.E[i]),
                fmt9(trace.energy[i] * 1e15),
                fmt9(trace.p_drive[i] * 1e6),
                fmt9(trace.p_leak[i] * 1e6),
                fmt9(trace.p_charge[i] * 1e6),
            )) + "\r\n")


def write_nodes_csv(path: str, trace: Trace, rows: int, cols: int) -> None:
    """Per-node m_y snapshots, one column per neuron in row-major order."""
    if trace.nodes_my is None:
        raise ValueError("trace was recorded without node snapshots")
    header = ["t_ps"] + [f"my_{r}_{c}" for r in range(rows) for c in range(cols)]
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(",".join(header) + "\r\n")
        for i in range(trace.t.size):
            cells = [fmt9(trace.t[i] * 1e12)]
            cells.extend(fmt9(v) for v in trace.nodes_my[i])
            f.write(",".join(cells) + "\r\n")


def write_sweep_csv(path: str, rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(",".join(SWEEP_COLUMNS) + "\r\n")
        for row in rows:
            f.write(",".join(fmt9(v) for v in row) + "\r\n")


def summary_lines(trace: Trace, targets: tuple[float, ...],
                  per_target: dict[float, EnergyDelay | None]) -> list[str]:
    lines = [
        f"E0_pct = {fmt9(trace.E[0])}",
        f"final_E_pct = {fmt9(trace.E[-1])}",
        f"t_end_ps = {fmt9(trace.t[-1] * 1e12)}",
        f"energy_total_fJ = {fmt9(trace.energy[-1] * 1e15)}",
        f"energy_per_cell_fJ = {fmt9(trace.energy[-1] / trace.n_neurons * 1e15)}",
    ]
    for tgt in targets:
        ed = per_target[tgt]
        tag = f"target_{fmt9(tgt)}"
        if ed is None:
            lines.append(f"{tag}_timeout = true")
        else:
            lines.append(f"{tag}_delay_ps = {fmt9(ed.delay * 1e12)}")
            lines.append(f"{tag}_energy_per_cell_fJ = {fmt9(ed.energy_per_cell * 1e15)}")
            lines.append(f"{tag}_edp_Js = {fmt9(ed.edp)}")
    return lines


def write_manifest(path: str, *, command: str, config_path: str | None, seed: int,
                   out_dir: str, version: str, argv: list[str]) -> None:
    """Provenance record; re-running the recorded argv reproduces outputs bitwise."""
    manifest = {
        "command": command,
        "config_path": config_path,
        "seed": seed,
        "output_dir": os.path.abspath(out_dir),
        "tool_version": version,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "argv": argv,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def parse_workload(text: str, base_dir: str = ".") -> Workload:
    """Parse a key = value workload document.

    Keys: image (path or "circle:N"), noise, replicas, drives, rhos,
    targets, seed, max_t_ps, sample_every.  Lists are comma separated.
    """
    fields: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"workload line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in stripped.split("=", 1))
        if key in fields:
            raise ValueError(f"workload line {lineno}: duplicate key {key!r}")
        fields[key] = val

    def floats(key: str, default: tuple[float, ...]) -> tuple[float, ...]:
        if key not in fields:
            return default
        return tuple(float(v) for v in fields[key].split(",") if v.strip())

    image_spec = fields.get("image", "circle:21")
    if image_spec.startswith("circle:"):
        image = gen_circle_image(int(image_spec.split(":", 1)[1]))
    else:
        image = read_image(os.path.join(base_dir, image_spec))
    known = {"image", "noise", "replicas", "drives", "rhos", "targets", "seed",
             "max_t_ps", "sample_every"}
    unknown = set(fields) - known
    if unknown:
        raise ValueError(f"unknown workload keys: {sorted(unknown)}")
    wl = Workload(
        image=image,
        noise_fraction=float(fields.get("noise", 0.1)),
        replicas=int(fields.get("replicas", 50)),
        drives=floats("drives", (1.0,)),
        rhos=floats("rhos", (10.0,)),
        targets=floats("targets", (5.5,)),
        seed=int(fields.get("seed", 0)),
        max_t=float(fields.get("max_t_ps", 500.0)) * 1e-12,
        sample_every=int(fields.get("sample_every", 10)),
    )
    wl.validate()
    return wl
