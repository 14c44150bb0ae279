"""Fixed-step classical Runge-Kutta helpers shared by the integrators."""

from __future__ import annotations

import math
from typing import Callable

from .circuit import R_FLOOR
from .params import Params

# Largest precession angle gamma*|H|*h allowed per internal RK4 substep
# [rad].  Classical RK4 is accurate and effectively non-amplifying on the
# precession mode up to ~0.5 rad; the magnetoelectric field can reach
# ~2e6 Oe, i.e. ~19 rad per outer step, so steps are subdivided to stay
# inside this bound.
MAX_PRECESSION_ANGLE = 0.5

# Largest h/tau allowed per substep for the first-order circuit nodes.
# RK4 is stable on the real axis to h/tau < 2.78; 2.5 leaves margin for
# the gate node, whose time constant floors at R_FLOOR*C_Y (0.01 ps at
# defaults) whenever a magnetization crosses the readout zero.
MAX_DECAY_RATIO = 2.5


def rk4_step(f: Callable, y, dt: float):
    """One classical fourth-order Runge-Kutta step for dy/dt = f(y)."""
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def stability_substeps(h_field_bound: float, p: Params) -> int:
    """Number of internal RK4 substeps for one outer step of length p.dt.

    ``h_field_bound`` is an upper bound on the effective field magnitude
    [Oe] over the step.  The count keeps the per-substep precession angle
    below MAX_PRECESSION_ANGLE and every circuit relaxation inside the
    real-axis stability region.
    """
    theta = p.gamma * h_field_bound * p.dt
    n_prec = math.ceil(theta / MAX_PRECESSION_ANGLE)
    tau_min = min(R_FLOOR * p.C_Y, p.C_ME * p.R_V, p.tau_FE)
    n_circ = math.ceil(p.dt / (MAX_DECAY_RATIO * tau_min))
    return max(1, n_prec, n_circ)
