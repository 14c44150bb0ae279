"""Pure-numpy step kernel for the coupled neuron grid.

This is the fallback path (and the reference implementation) for the
numba-compiled twin in kernels_numba; both advance the state arrays in
place by one outer time step split into ``n_sub`` internal RK4 substeps.
The arithmetic is written with the same operation order in both backends
so results agree bitwise.

State layout: m (N,3) unit magnetizations, P (N,) polarization charges [C],
V (N,) ME capacitor voltages [V], Y (N,) gate voltages [V].  ``noise`` is
the per-neuron thermal field (N,3) [Oe], held for the full outer step.
"""

from __future__ import annotations

import numpy as np

from .circuit import R_FLOOR
from .params import Params, ir_stack_resistances, me_field_coeff

# Indices into the packed coefficient vector.
C_GAMMA = 0    # gyromagnetic ratio [rad/(s*Oe)]
C_ALPHA = 1    # Gilbert damping
C_HK = 2       # anisotropy field prefactor 2K/M_s [Oe]
C_DX = 3       # demag prefactor, x [Oe]
C_DY = 4       # demag prefactor, y [Oe]
C_DZ = 5       # demag prefactor, z [Oe]
C_MEF = 6      # ME field coefficient [Oe/(C*V)]
C_CME = 7      # ME capacitance [F]
C_TAUFE = 8    # ferroelectric relaxation time [s]
C_RXC = 9      # readout resistance per unit m_y [Ohm]
C_ID = 10      # drive current [A]
C_RFLOOR = 11  # gate resistance floor [Ohm]
C_CY = 12      # gate capacitance [F]
C_TAUV = 13    # capacitor charging time constant C_ME*R_V [s]
C_VDD = 14     # supply rail magnitude [V]
N_COEF = 15


def pack_coefs(p: Params) -> np.ndarray:
    """Pack the per-step scalar coefficients for the kernels."""
    inv2 = np.array([d ** -2 for d in p.fm_dims])
    demag = p.M_s * inv2 / inv2.sum()
    r_x, _ = ir_stack_resistances(p)
    coef = np.empty(N_COEF)
    coef[C_GAMMA] = p.gamma
    coef[C_ALPHA] = p.alpha
    coef[C_HK] = 2.0 * p.K / p.M_s
    coef[C_DX] = demag[0]
    coef[C_DY] = demag[1]
    coef[C_DZ] = demag[2]
    coef[C_MEF] = me_field_coeff(p)
    coef[C_CME] = p.C_ME
    coef[C_TAUFE] = p.tau_FE
    coef[C_RXC] = p.eta * (p.lambda_IR / p.w_IR) * r_x
    coef[C_ID] = p.V_drive / (ir_stack_resistances(p)[1] + p.R_drive_extra)
    coef[C_RFLOOR] = R_FLOOR
    coef[C_CY] = p.C_Y
    coef[C_TAUV] = p.C_ME * p.R_V
    coef[C_VDD] = p.V_DD
    return coef


def neighbor_sum(Y: np.ndarray, nbr_idx: np.ndarray, nbr_w: np.ndarray) -> np.ndarray:
    """Weighted gate-voltage sum over each neuron's padded neighbor slots."""
    s = nbr_w[:, 0] * Y[nbr_idx[:, 0]]
    for k in range(1, nbr_idx.shape[1]):
        s = s + nbr_w[:, k] * Y[nbr_idx[:, k]]
    return s


def rhs_arrays(m, P, V, Y, noise, nbr_idx, nbr_w, ksat_over_n, coef):
    """Coupled right-hand side; returns (dm, dP, dV, dY) as new arrays."""
    mx = m[:, 0]
    my = m[:, 1]
    mz = m[:, 2]
    # effective field [Oe]: anisotropy + demag + thermal + magnetoelectric
    hx = noise[:, 0] - coef[C_DX] * mx
    hy = coef[C_HK] * my + coef[C_MEF] * (P * np.abs(V)) + noise[:, 1] - coef[C_DY] * my
    hz = noise[:, 2] - coef[C_DZ] * mz
    # LLG: gamma*(m x H) - alpha*gamma*(m x (m x H))
    tx = my * hz - mz * hy
    ty = mz * hx - mx * hz
    tz = mx * hy - my * hx
    g = coef[C_GAMMA]
    ag = coef[C_ALPHA] * coef[C_GAMMA]
    dm = np.empty_like(m)
    dm[:, 0] = g * tx - ag * (my * tz - mz * ty)
    dm[:, 1] = g * ty - ag * (mz * tx - mx * tz)
    dm[:, 2] = g * tz - ag * (mx * ty - my * tx)
    # ferroelectric relaxation toward the linear-capacitor steady state
    dP = (coef[C_CME] * V - P) / coef[C_TAUFE]
    # synapse drive: rail-clamped linear combination of neighbor gates
    target = ksat_over_n * neighbor_sum(Y, nbr_idx, nbr_w)
    target = np.minimum(np.maximum(target, -coef[C_VDD]), coef[C_VDD])
    dV = (target - V) / coef[C_TAUV]
    # gate node relaxation toward the IR readout voltage
    rx = coef[C_RXC] * my
    v_ir = coef[C_ID] * rx
    r_eff = np.maximum(np.abs(rx), coef[C_RFLOOR])
    dY = (v_ir - Y) / (r_eff * coef[C_CY])
    return dm, dP, dV, dY


def step_coupled(m, P, V, Y, noise, nbr_idx, nbr_w, ksat_over_n, coef, dt, n_sub):
    """Advance the state arrays in place by one outer step of length dt."""
    h = dt / n_sub
    s6 = h / 6.0
    for _ in range(n_sub):
        k1 = rhs_arrays(m, P, V, Y, noise, nbr_idx, nbr_w, ksat_over_n, coef)
        m2 = m + (0.5 * h) * k1[0]
        P2 = P + (0.5 * h) * k1[1]
        V2 = V + (0.5 * h) * k1[2]
        Y2 = Y + (0.5 * h) * k1[3]
        k2 = rhs_arrays(m2, P2, V2, Y2, noise, nbr_idx, nbr_w, ksat_over_n, coef)
        m2 = m + (0.5 * h) * k2[0]
        P2 = P + (0.5 * h) * k2[1]
        V2 = V + (0.5 * h) * k2[2]
        Y2 = Y + (0.5 * h) * k2[3]
        k3 = rhs_arrays(m2, P2, V2, Y2, noise, nbr_idx, nbr_w, ksat_over_n, coef)
        m2 = m + h * k3[0]
        P2 = P + h * k3[1]
        V2 = V + h * k3[2]
        Y2 = Y + h * k3[3]
        k4 = rhs_arrays(m2, P2, V2, Y2, noise, nbr_idx, nbr_w, ksat_over_n, coef)
        acc = k1[0] + 2.0 * k2[0]
        acc = acc + 2.0 * k3[0]
        acc = acc + k4[0]
        m_new = m + s6 * acc
        acc1 = k1[1] + 2.0 * k2[1]
        acc1 = acc1 + 2.0 * k3[1]
        acc1 = acc1 + k4[1]
        P += s6 * acc1
        acc1 = k1[2] + 2.0 * k2[2]
        acc1 = acc1 + 2.0 * k3[2]
        acc1 = acc1 + k4[2]
        V += s6 * acc1
        acc1 = k1[3] + 2.0 * k2[3]
        acc1 = acc1 + 2.0 * k3[3]
        acc1 = acc1 + k4[3]
        Y += s6 * acc1
        # renormalize after every internal RK4 step
        nrm = np.sqrt(m_new[:, 0] * m_new[:, 0] + m_new[:, 1] * m_new[:, 1]
                      + m_new[:, 2] * m_new[:, 2])
        m[:, 0] = m_new[:, 0] / nrm
        m[:, 1] = m_new[:, 1] / nrm
        m[:, 2] = m_new[:, 2] / nrm
