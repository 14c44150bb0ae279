"""IR readout, drive path, synapse compact model, and power accounting.

All electrical quantities are SI.  The CMOS repeater synapses are reduced
to a rail-clamped linear transconductance charging the ME capacitor plus a
bell-shaped crowbar leakage, calibrated by I_leak0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import Params, ir_stack_resistances

# Floor on the gate charging resistance so the RC time constant never
# collapses to zero at m_y = 0 [Ohm].
R_FLOOR = 100.0


@dataclass(frozen=True)
class PowerBreakdown:
    """Instantaneous power split [W]; total is the sum of the parts."""

    p_drive: float
    p_leak: float
    p_charge: float

    @property
    def total(self) -> float:
        return self.p_drive + self.p_leak + self.p_charge


def ir_resistance(m_y: float, p: Params) -> float:
    """Signed readout resistance eta*(lambda/w_IR)*m_y*R_IR_x [Ohm]."""
    r_x, _ = ir_stack_resistances(p)
    return p.eta * (p.lambda_IR / p.w_IR) * m_y * r_x


def drive_current(p: Params) -> float:
    """DC drive current V_drive/(R_IR_z + R_drive_extra) [A]."""
    _, r_z = ir_stack_resistances(p)
    return p.V_drive / (r_z + p.R_drive_extra)


def ir_voltage(i_d: float, r_x: float) -> float:
    """Readout voltage of the dependent source: V_IR = I_d * R_X [V]."""
    return i_d * r_x


def gate_rhs(Y: float, v_ir: float, m_y: float, p: Params) -> float:
    """dY/dt of the synapse gate node [V/s].

    First-order relaxation toward the IR source value with RC time constant
    max(|R_X|, R_FLOOR)*C_Y.
    """
    r_eff = max(abs(ir_resistance(m_y, p)), R_FLOOR)
    return (v_ir - Y) / (r_eff * p.C_Y)


def synapse_drive(neighbor_Y, weights, V: float, p: Params) -> float:
    """dV/dt of the ME capacitor node [V/s].

    The repeaters charge the capacitor toward k_sat * mean(w_i * Y_i),
    pinned between the supply rails; the charging time constant is
    C_ME * R_V.
    """
    y = np.asarray(neighbor_Y, dtype=float)
    w = np.asarray(weights, dtype=float)
    if y.shape != w.shape:
        raise ValueError(f"neighbor_Y and weights length mismatch: {y.shape} vs {w.shape}")
    if y.size == 0:
        raise ValueError("neighborhood must contain at least one synapse")
    target = p.k_sat * float(np.dot(w, y)) / y.size
    target = min(max(target, -p.V_DD), p.V_DD)
    return (target - V) / (p.C_ME * p.R_V)


def leak_power(Y, p: Params):
    """Crowbar leakage per synapse [W]: peaks at Y = 0, suppressed at the rails.

    2*V_DD*I_leak0*exp(-4*(Y/V_DD)^2) reproduces the qualitative CMOS
    inverter short-circuit profile without a transistor model.
    """
    y = np.asarray(Y, dtype=float)
    return 2.0 * p.V_DD * p.I_leak0 * np.exp(-4.0 * (y / p.V_DD) ** 2)


def power_snapshot(V, Y, dV_dt, dY_dt, n_synapses, p: Params) -> PowerBreakdown:
    """Instantaneous network power from node states and derivatives.

    ``V``/``Y`` and their derivatives are per-neuron arrays (or scalars for
    a single device); ``n_synapses`` counts the synapses gated by each
    neuron's Y.  Drive power is the constant read-path dissipation, leakage
    follows the crowbar model, and capacitor charging contributions
    C*|node|*|dnode/dt| are rectified to be nonnegative.
    """
    v = np.atleast_1d(np.asarray(V, dtype=float))
    y = np.atleast_1d(np.asarray(Y, dtype=float))
    dv = np.atleast_1d(np.asarray(dV_dt, dtype=float))
    dy = np.atleast_1d(np.asarray(dY_dt, dtype=float))
    syn = np.atleast_1d(np.asarray(n_synapses, dtype=float))
    p_drive = v.size * p.V_drive * drive_current(p)
    p_leak = float(np.sum(syn * leak_power(y, p)))
    p_charge = float(np.sum(p.C_ME * np.abs(v) * np.abs(dv))
                     + np.sum(p.C_Y * np.abs(y) * np.abs(dy)))
    return PowerBreakdown(p_drive=p_drive, p_leak=p_leak, p_charge=p_charge)
