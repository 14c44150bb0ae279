"""Macrospin magnetization dynamics for a single-domain nanomagnet.

Field terms and the Landau-Lifshitz-Gilbert right-hand side.  Vectors are
numpy arrays of shape (3,) in the magnet frame: x along the IR readout
axis, y along the easy axis, z out of plane.  Fields are in Oe, the
magnetization is the unit vector m = M/M_s.
"""

from __future__ import annotations

import numpy as np

from .params import Params, thermal_sigma


def anisotropy_field(m: np.ndarray, p: Params) -> np.ndarray:
    """Uniaxial crystalline anisotropy field (2K/M_s)*(m . y)*y [Oe]."""
    h = np.zeros(3)
    h[1] = 2.0 * p.K / p.M_s * m[1]
    return h


def demag_coeffs(p: Params) -> np.ndarray:
    """Per-axis demagnetization prefactors M_s * d_i^-2 / sum(d_j^-2) [Oe].

    Effective-field estimate from the inverse-square of the magnet
    dimensions; no 4*pi factor.
    """
    inv2 = np.array([d ** -2 for d in p.fm_dims])
    return p.M_s * inv2 / inv2.sum()


def demag_field(m: np.ndarray, p: Params) -> np.ndarray:
    """Shape anisotropy field -M_s*{l^-2 m_x, w^-2 m_y, t^-2 m_z}/sum [Oe]."""
    return -demag_coeffs(p) * m


def thermal_field(rng: np.random.Generator, p: Params) -> np.ndarray:
    """One thermal field sample: i.i.d. zero-mean Gaussian components [Oe].

    The per-component standard deviation sqrt(2 k_B T alpha/(gamma M_s V dt))
    makes the discrete field consistent with thermal agitation over one
    integration step; the sample is meant to be held for a full step.
    """
    return thermal_sigma(p) * rng.standard_normal(3)


def llg_rhs(m: np.ndarray, h_eff: np.ndarray, p: Params) -> np.ndarray:
    """dm/dt = gamma*(m x H) - alpha*gamma*(m x (m x H))  [1/s].

    Precession plus Gilbert damping; the damping term carries the same
    gyromagnetic prefactor so both terms are rates on the unit vector.
    The damping drives m toward +H.
    """
    torque = np.cross(m, h_eff)
    return p.gamma * torque - p.alpha * p.gamma * np.cross(m, torque)


def renormalize(m: np.ndarray) -> np.ndarray:
    """Project m back onto the unit sphere.  Raises on a zero vector."""
    norm = float(np.linalg.norm(m))
    if norm == 0.0:
        raise ValueError("cannot renormalize a zero magnetization vector")
    return m / norm
