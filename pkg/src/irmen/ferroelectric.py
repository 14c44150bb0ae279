"""Ferroelectric polarization dynamics and the magnetoelectric field.

The BFO layer is modeled as a linear capacitor without hysteresis: the
polarization charge relaxes exponentially toward C_ME*V, and the coupling
to the magnet is an energy transfer from the stored polarization energy to
the magnetic moment.
"""

from __future__ import annotations

import numpy as np

from .params import Params, me_field_coeff


def polarization_rhs(P: float, V: float, p: Params) -> float:
    """dP/dt = (C_ME*V - P)/tau_FE  [C/s]: relaxation to the linear-capacitor state."""
    return (p.C_ME * V - P) / p.tau_FE


def me_field(P: float, V: float, p: Params) -> np.ndarray:
    """Magnetoelectric effective field on the magnet, along the easy axis [Oe].

    Magnitude is the polarization energy |P*V| scaled by 2*zeta and divided
    by the total magnetic moment M_s*V_FM (J -> erg conversion inside the
    coefficient); the direction follows the polarization state, so writing
    is bidirectional: at steady state P = C_ME*V the field is
    sign(V) * zeta*2*C_ME*V^2/(M_s*V_FM) * y.
    """
    h = np.zeros(3)
    h[1] = me_field_coeff(p) * P * abs(V)
    return h
