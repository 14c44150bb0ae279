"""Workload generation, Monte Carlo replication, and sweep statistics.

The benchmark workload is low-pass filtering of a noisy ring image: every
data point aggregates independent replicas with randomized noise patterns,
recording delay-to-target, energy per cell, and their product for each
(drive voltage, resistivity) cell of the sweep.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .network import NumericalError, Trace, build_grid, init_state, run_until
from .params import Params


def gen_circle_image(n: int) -> np.ndarray:
    """Deterministic n x n test image: a +1 ring of radius n/3 on a -1 field.

    The ring is ~1.5 px thick, centered, and symmetric under 90-degree
    rotation.  The thickness keeps the clean ring a fixed point of the
    self + von-Neumann majority rule for n >= 9.
    """
    if n < 3:
        raise ValueError(f"image size must be >= 3, got {n}")
    c = (n - 1) / 2.0
    yy, xx = np.mgrid[0:n, 0:n]
    r = np.hypot(yy - c, xx - c)
    img = np.where(np.abs(r - n / 3.0) <= 0.75, 1, -1).astype(np.int64)
    return img


def apply_noise(image: np.ndarray, fraction: float, rng: np.random.Generator) -> np.ndarray:
    """Sign-flip exactly round(fraction*N) distinct pixels, chosen uniformly."""
    if not (0.0 <= fraction < 1.0):
        raise ValueError(f"noise fraction must be in [0, 1), got {fraction}")
    img = np.asarray(image).copy()
    k = int(round(fraction * img.size))
    if k:
        flat = img.ravel()
        flat[rng.choice(img.size, size=k, replace=False)] *= -1
    return img


@dataclass(frozen=True)
class Workload:
    """One sweep definition: image, noise, replication, and parameter grids."""

    image: np.ndarray
    noise_fraction: float = 0.1
    replicas: int = 50
    drives: tuple[float, ...] = (1.0,)        # [V]
    rhos: tuple[float, ...] = (10.0,)         # [mOhm*cm]
    targets: tuple[float, ...] = (5.5,)       # error thresholds [%]
    seed: int = 0
    max_t: float = 500e-12                    # [s]
    sample_every: int = 10

    def validate(self) -> None:
        if self.image.size == 0:
            raise ValueError("workload image is empty")
        if not (0.0 <= self.noise_fraction < 1.0):
            raise ValueError(f"noise_fraction must be in [0, 1), got {self.noise_fraction}")
        if self.replicas < 1:
            raise ValueError(f"replicas must be >= 1, got {self.replicas}")
        if not self.drives or not self.rhos or not self.targets:
            raise ValueError("drive, resistivity, and target grids must be nonempty")
        for t in self.targets:
            if not (0.0 < t < 200.0):
                raise ValueError(f"targets must lie in (0, 200), got {t}")
        if self.max_t < 0:
            raise ValueError("max_t must be nonnegative")


@dataclass(frozen=True)
class EnergyDelay:
    """Energy/delay readout of one trace at one target threshold."""

    energy_per_cell: float  # [J]
    delay: float            # [s]
    edp: float              # [J*s]


def energy_delay(trace: Trace, target_e: float) -> EnergyDelay | None:
    """First trace sample at-or-below target: (energy per cell, delay, EDP).

    Returns None when the target is never reached (timeout).  The delay is
    the first sample time with E <= target, a conservative late estimate
    at the trace sampling resolution.
    """
    if trace.t.size == 0:
        raise ValueError("empty trace")
    hits = np.nonzero(trace.E <= target_e)[0]
    if hits.size == 0:
        return None
    i = int(hits[0])
    delay = float(trace.t[i])
    energy = float(trace.energy[i]) / trace.n_neurons
    return EnergyDelay(energy_per_cell=energy, delay=delay, edp=energy * delay)


@dataclass(frozen=True)
class TargetStats:
    """Aggregated delay/energy statistics for one (drive, rho, target)."""

    mean_delay: float     # [s]
    std_delay: float
    mean_energy: float    # [J] per cell
    std_energy: float
    edp: float            # mean_energy * mean_delay [J*s]
    timeout_frac: float
    n_completed: int


@dataclass(frozen=True)
class CellStats:
    """Per-(drive, rho) statistics across replicas."""

    drive: float
    rho: float
    by_target: dict[float, TargetStats]
    final_error_mean: float   # error at max_t [%]
    final_error_std: float
    n_failed: int             # replicas lost to non-finite states
    n_replicas: int


@dataclass
class MCStats:
    """Monte Carlo sweep results keyed by (drive, rho)."""

    cells: dict[tuple[float, float], CellStats] = field(default_factory=dict)

    def cell(self, drive: float, rho: float) -> CellStats:
        return self.cells[(drive, rho)]


def _mean_std(values: list[float]) -> tuple[float, float]:
    """Compensated (exactly rounded) mean and sample std, order-independent."""
    n = len(values)
    if n == 0:
        return math.nan, math.nan
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def _run_replica(args) -> dict:
    workload, params, seed = args
    rng = np.random.default_rng(seed)
    noisy = apply_noise(workload.image, workload.noise_fraction, rng)
    rows, cols = workload.image.shape
    net = build_grid(rows, cols, params)
    state = init_state(noisy, params, rng)
    try:
        trace = run_until(state, net, target_image=workload.image,
                          max_t=workload.max_t, rng=rng,
                          sample_every=workload.sample_every)
    except NumericalError as exc:
        return {"failed": str(exc)}
    out: dict = {"failed": None, "final_E": float(trace.E[-1])}
    for tgt in workload.targets:
        out[tgt] = energy_delay(trace, tgt)
    return out


def monte_carlo(workload: Workload, p: Params, jobs: int = 1) -> MCStats:
    """Run the full (drive, rho) sweep with independent seeded replicas.

    Replica seeds derive from the workload seed by index, so results are
    bitwise independent of execution order and of ``jobs``.  Non-finite
    replicas are counted per cell, never silently dropped.
    """
    workload.validate()
    cells = [(d, r) for r in workload.rhos for d in workload.drives]
    children = np.random.SeedSequence(workload.seed).spawn(len(cells) * workload.replicas)
    tasks = []
    for ci, (drive, rho) in enumerate(cells):
        p_cell = replace(p, V_drive=drive, rho_IR=rho)
        for ri in range(workload.replicas):
            tasks.append((workload, p_cell, children[ci * workload.replicas + ri]))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_replica, tasks))
    else:
        results = [_run_replica(t) for t in tasks]

    stats = MCStats()
    for ci, (drive, rho) in enumerate(cells):
        res = results[ci * workload.replicas:(ci + 1) * workload.replicas]
        ok = [r for r in res if r["failed"] is None]
        n_failed = len(res) - len(ok)
        by_target: dict[float, TargetStats] = {}
        for tgt in workload.targets:
            done = [r[tgt] for r in ok if r[tgt] is not None]
            mean_d, std_d = _mean_std([ed.delay for ed in done])
            mean_e, std_e = _mean_std([ed.energy_per_cell for ed in done])
            by_target[tgt] = TargetStats(
                mean_delay=mean_d, std_delay=std_d,
                mean_energy=mean_e, std_energy=std_e,
                edp=mean_e * mean_d,
                timeout_frac=(len(ok) - len(done)) / len(ok) if ok else math.nan,
                n_completed=len(done),
            )
        fe_mean, fe_std = _mean_std([r["final_E"] for r in ok])
        stats.cells[(drive, rho)] = CellStats(
            drive=drive, rho=rho, by_target=by_target,
            final_error_mean=fe_mean, final_error_std=fe_std,
            n_failed=n_failed, n_replicas=workload.replicas,
        )
    return stats


SWEEP_COLUMNS = ("drive_V", "rho_mohm_cm", "target_pct",
                 "delay_ps_mean", "delay_ps_std",
                 "energy_fJ_mean", "energy_fJ_std",
                 "edp_Js", "timeout_frac",
                 "final_E_pct_mean", "final_E_pct_std")


def sweep_report(stats: MCStats) -> list[tuple]:
    """Flatten MCStats to plottable rows, sorted by (rho, target, drive)."""
    rows = []
    for (drive, rho), cell in stats.cells.items():
        for tgt, ts in cell.by_target.items():
            rows.append((drive, rho, tgt,
                         ts.mean_delay * 1e12, ts.std_delay * 1e12,
                         ts.mean_energy * 1e15, ts.std_energy * 1e15,
                         ts.edp, ts.timeout_frac,
                         cell.final_error_mean, cell.final_error_std))
    rows.sort(key=lambda row: (row[1], row[2], row[0]))
    return rows
