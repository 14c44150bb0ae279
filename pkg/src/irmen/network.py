"""Neuron grid assembly, coupled integration, and trace production.

A network is a rows x cols grid of neurons, each synaptically coupled to
itself and its von Neumann neighbors (two-way connections, truncated at
the boundary).  The full coupled system -- magnetization, polarization,
capacitor and gate voltages of every neuron -- is advanced with classical
RK4 on a fixed outer time grid; the thermal field is drawn once per neuron
per outer step and held across substeps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import backend
from .circuit import R_FLOOR, PowerBreakdown, drive_current, leak_power
from .kernels_numpy import pack_coefs, rhs_arrays
from .params import Params, thermal_sigma
from .stepping import stability_substeps


class NumericalError(RuntimeError):
    """Raised when a neuron state becomes non-finite during integration."""


@dataclass(frozen=True)
class Network:
    """Grid topology, synapse weights, and the parameter set.

    ``nbr_idx``/``nbr_w`` are padded (N, 5) neighbor tables in fixed slot
    order (self, up, down, left, right); missing slots point at the neuron
    itself with weight 0.  ``degree`` is the true neighborhood size.
    """

    rows: int
    cols: int
    nbr_idx: np.ndarray
    nbr_w: np.ndarray
    degree: np.ndarray
    params: Params

    @property
    def n_neurons(self) -> int:
        return self.rows * self.cols

    @property
    def ksat_over_n(self) -> np.ndarray:
        return self.params.k_sat / self.degree.astype(float)

    @property
    def coefs(self) -> np.ndarray:
        return pack_coefs(self.params)


@dataclass
class NetworkState:
    """Per-neuron dynamical variables plus time and the energy ledger."""

    m: np.ndarray        # (N, 3) unit magnetizations
    P: np.ndarray        # (N,) polarization charge [C]
    V: np.ndarray        # (N,) ME capacitor voltage [V]
    Y: np.ndarray        # (N,) gate voltage [V]
    t: float = 0.0       # [s]
    energy: float = 0.0  # cumulative consumed energy [J]

    def copy(self) -> "NetworkState":
        return NetworkState(self.m.copy(), self.P.copy(), self.V.copy(),
                            self.Y.copy(), self.t, self.energy)


@dataclass
class Trace:
    """Sampled time series of a run.  Times are strictly increasing."""

    t: np.ndarray                       # [s]
    E: np.ndarray                       # error metric [%]
    energy: np.ndarray                  # cumulative energy [J]
    p_drive: np.ndarray                 # [W]
    p_leak: np.ndarray                  # [W]
    p_charge: np.ndarray                # [W]
    n_neurons: int
    reached_target: bool = False
    nodes_my: np.ndarray | None = None  # optional (samples, N) m_y snapshots

    def __post_init__(self) -> None:
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("trace times must be strictly increasing")
        if np.any(self.E < 0) or np.any(self.E > 200):
            raise ValueError("error metric out of [0, 200]")


def build_grid(rows: int, cols: int, p: Params, weights: np.ndarray | None = None) -> Network:
    """Build the grid with the self + von-Neumann low-pass template.

    ``weights`` may be an (N, 5) per-slot array of dimensionless synapse
    weights (slot order self, up, down, left, right); default all 1.
    Boundary neighborhoods are truncated, so edge neurons average over
    their actual neighbor count.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"grid dimensions must be >= 1, got {rows}x{cols}")
    n = rows * cols
    nbr_idx = np.empty((n, 5), dtype=np.int64)
    nbr_w = np.zeros((n, 5))
    degree = np.empty(n, dtype=np.int64)
    if weights is not None:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (n, 5):
            raise ValueError(f"weights must have shape ({n}, 5)")
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            slots = [(r, c), (r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]
            deg = 0
            for k, (rr, cc) in enumerate(slots):
                if 0 <= rr < rows and 0 <= cc < cols:
                    nbr_idx[i, k] = rr * cols + cc
                    nbr_w[i, k] = 1.0 if weights is None else weights[i, k]
                    deg += 1
                else:
                    nbr_idx[i, k] = i  # padding slot, weight stays 0
            degree[i] = deg
    return Network(rows=rows, cols=cols, nbr_idx=nbr_idx, nbr_w=nbr_w,
                   degree=degree, params=p)


def _sample_easy_axis_magnitude(delta: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw |m_y| from the equilibrium density ~ exp(delta*u^2) on [0, 1]."""
    if not np.isfinite(delta) or delta > 1e5:
        return np.ones(size)
    u = np.linspace(0.0, 1.0, 4097)
    logpdf = delta * (u * u - 1.0)  # shifted to avoid overflow
    pdf = np.exp(logpdf)
    cdf = np.concatenate(([0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(u))))
    cdf /= cdf[-1]
    return np.interp(rng.random(size), cdf, u)


def init_state(image: np.ndarray, p: Params, rng: np.random.Generator) -> NetworkState:
    """Initial state for a +/-1 image: thermal-equilibrium magnetization angles.

    Each magnetization is drawn from the Boltzmann distribution in the
    easy-axis anisotropy energy at temperature T, restricted to the
    hemisphere matching the pixel sign; at T = 0 this collapses to exactly
    +/- y.  Polarizations and node voltages start at zero.
    """
    image = np.asarray(image)
    n = image.size
    pix = image.ravel().astype(float)
    if not np.all(np.abs(pix) == 1.0):
        raise ValueError("image entries must be +1 or -1")
    if p.T > 0:
        from .params import K_B_ERG
        delta = p.K * (p.V_FM * 1e-21) / (K_B_ERG * p.T)
    else:
        delta = np.inf
    u = _sample_easy_axis_magnitude(delta, n, rng)
    phi = rng.random(n) * (2.0 * np.pi)
    sin_polar = np.sqrt(np.maximum(0.0, 1.0 - u * u))
    m = np.empty((n, 3))
    m[:, 0] = sin_polar * np.cos(phi)
    m[:, 1] = pix * u
    m[:, 2] = sin_polar * np.sin(phi)
    return NetworkState(m=m, P=np.zeros(n), V=np.zeros(n), Y=np.zeros(n))


def error_metric(state: NetworkState, target_image: np.ndarray) -> float:
    """Average error percentage E = (100/N) * sum |p_ij - m_y,ij|."""
    pix = np.asarray(target_image).ravel().astype(float)
    if pix.size != state.m.shape[0]:
        raise ValueError(f"image size {pix.size} does not match grid size {state.m.shape[0]}")
    return 100.0 * float(np.mean(np.abs(pix - state.m[:, 1])))


def rhs(state: NetworkState, net: Network, noise: np.ndarray):
    """Coupled state derivative (dm, dP, dV, dY) at the given thermal field."""
    return rhs_arrays(state.m, state.P, state.V, state.Y, noise,
                      net.nbr_idx, net.nbr_w, net.ksat_over_n, net.coefs)


def _circuit_derivs(m, P, V, Y, net: Network):
    """(dV/dt, dY/dt) only; used for the power ledger at committed states."""
    p = net.params
    coef = net.coefs
    from .kernels_numpy import C_ID, C_RXC, C_TAUV, C_VDD, neighbor_sum
    target = net.ksat_over_n * neighbor_sum(Y, net.nbr_idx, net.nbr_w)
    target = np.minimum(np.maximum(target, -coef[C_VDD]), coef[C_VDD])
    dV = (target - V) / coef[C_TAUV]
    rx = coef[C_RXC] * m[:, 1]
    v_ir = coef[C_ID] * rx
    dY = (v_ir - Y) / (np.maximum(np.abs(rx), R_FLOOR) * p.C_Y)
    return dV, dY


def _power_total(m, P, V, Y, net: Network) -> tuple[float, PowerBreakdown]:
    p = net.params
    dV, dY = _circuit_derivs(m, P, V, Y, net)
    p_drive = net.n_neurons * p.V_drive * drive_current(p)
    p_leak = float(np.sum(net.degree * leak_power(Y, p)))
    p_charge = float(np.sum(p.C_ME * np.abs(V) * np.abs(dV))
                     + np.sum(p.C_Y * np.abs(Y) * np.abs(dY)))
    pb = PowerBreakdown(p_drive=p_drive, p_leak=p_leak, p_charge=p_charge)
    return pb.total, pb


def _field_bound(state: NetworkState, noise: np.ndarray, net: Network) -> float:
    """Upper bound on the effective field magnitude over the grid [Oe]."""
    coef = net.coefs
    from .kernels_numpy import C_DX, C_DY, C_DZ, C_HK, C_MEF
    hy = coef[C_HK] * np.abs(state.m[:, 1]) + coef[C_MEF] * np.abs(state.P * state.V)
    bound = hy + np.sum(np.abs(noise), axis=1) + (coef[C_DX] + coef[C_DY] + coef[C_DZ])
    return float(bound.max())


def _check_finite(state: NetworkState) -> None:
    for name, arr in (("m", state.m), ("P", state.P), ("V", state.V), ("Y", state.Y)):
        finite = np.isfinite(arr)
        if not finite.all():
            bad = int(np.argwhere(~finite)[0][0] if arr.ndim == 1
                      else np.argwhere(~finite.all(axis=1))[0][0])
            raise NumericalError(f"non-finite {name} at neuron index {bad}, t={state.t:.3e} s")


def _advance(state: NetworkState, net: Network, noise: np.ndarray,
             prev_power: float) -> float:
    """One outer step, in place; returns the new total power (ledger advanced)."""
    p = net.params
    n_sub = stability_substeps(_field_bound(state, noise, net), p)
    backend.step_fn()(state.m, state.P, state.V, state.Y, noise,
                      net.nbr_idx, net.nbr_w, net.ksat_over_n, net.coefs,
                      p.dt, n_sub)
    state.t += p.dt
    new_power, _ = _power_total(state.m, state.P, state.V, state.Y, net)
    state.energy += 0.5 * p.dt * (prev_power + new_power)
    return new_power


def rk4_step(state: NetworkState, net: Network, rng: np.random.Generator) -> NetworkState:
    """One classical RK4 step over all coupled variables (new state).

    Magnetizations are renormalized, the energy ledger advances by the
    trapezoidal rule on the total power, and the thermal field is sampled
    once per neuron and held across the Runge-Kutta substeps.
    """
    p = net.params
    out = state.copy()
    noise = thermal_sigma(p) * rng.standard_normal((net.n_neurons, 3))
    prev_power, _ = _power_total(state.m, state.P, state.V, state.Y, net)
    _advance(out, net, noise, prev_power)
    _check_finite(out)
    return out


def run_until(state: NetworkState, net: Network, *, target_image: np.ndarray,
              max_t: float, target_e: float | None = None, sample_every: int = 10,
              rng: np.random.Generator, record_nodes: bool = False) -> Trace:
    """Integrate until E <= target_e at a sample point, or until t >= max_t.

    ``state`` is advanced in place.  The trace is sampled every
    ``sample_every`` steps (and at the final step); a run that never meets
    the target simply reports reached_target=False -- timeout is a result,
    not an error.
    """
    p = net.params
    pix = np.asarray(target_image).ravel().astype(float)
    if pix.size != net.n_neurons:
        raise ValueError("target image does not match grid size")
    sigma = thermal_sigma(p)
    n = net.n_neurons

    ts, es, ens = [], [], []
    pds, pls, pcs = [], [], []
    nodes = [] if record_nodes else None

    power, pb = _power_total(state.m, state.P, state.V, state.Y, net)

    def take_sample() -> float:
        e = 100.0 * float(np.mean(np.abs(pix - state.m[:, 1])))
        ts.append(state.t)
        es.append(e)
        ens.append(state.energy)
        pds.append(pb.p_drive)
        pls.append(pb.p_leak)
        pcs.append(pb.p_charge)
        if nodes is not None:
            nodes.append(state.m[:, 1].copy())
        return e

    e0 = take_sample()
    reached = target_e is not None and e0 <= target_e
    n_steps = max(0, int(round(max_t / p.dt)))
    step = 0
    while not reached and step < n_steps:
        noise = sigma * rng.standard_normal((n, 3))
        n_sub = stability_substeps(_field_bound(state, noise, net), p)
        backend.step_fn()(state.m, state.P, state.V, state.Y, noise,
                          net.nbr_idx, net.nbr_w, net.ksat_over_n, net.coefs,
                          p.dt, n_sub)
        state.t += p.dt
        new_power, pb = _power_total(state.m, state.P, state.V, state.Y, net)
        state.energy += 0.5 * p.dt * (power + new_power)
        power = new_power
        step += 1
        if step % sample_every == 0 or step == n_steps:
            _check_finite(state)
            e = take_sample()
            if target_e is not None and e <= target_e:
                reached = True
    return Trace(t=np.array(ts), E=np.array(es), energy=np.array(ens),
                 p_drive=np.array(pds), p_leak=np.array(pls), p_charge=np.array(pcs),
                 n_neurons=n, reached_target=reached,
                 nodes_my=np.array(nodes) if nodes is not None else None)
