"""Numba-compiled twin of the pure-numpy step kernel.

Same in-place contract and the same per-element operation order as
kernels_numpy.step_coupled, so both backends produce identical results.
Selected through the IRMEN_BACKEND environment flag (see backend.py).
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .kernels_numpy import (
    C_ALPHA,
    C_CME,
    C_CY,
    C_DX,
    C_DY,
    C_DZ,
    C_GAMMA,
    C_HK,
    C_ID,
    C_MEF,
    C_RFLOOR,
    C_RXC,
    C_TAUFE,
    C_TAUV,
    C_VDD,
)


@njit(cache=True, nogil=True)
def _rhs(m, P, V, Y, noise, nbr_idx, nbr_w, ksat_over_n, coef, dm, dP, dV, dY):
    n = m.shape[0]
    g = coef[C_GAMMA]
    ag = coef[C_ALPHA] * coef[C_GAMMA]
    vdd = coef[C_VDD]
    for i in range(n):
        mx = m[i, 0]
        my = m[i, 1]
        mz = m[i, 2]
        hx = noise[i, 0] - coef[C_DX] * mx
        hy = coef[C_HK] * my + coef[C_MEF] * (P[i] * abs(V[i])) + noise[i, 1] - coef[C_DY] * my
        hz = noise[i, 2] - coef[C_DZ] * mz
        tx = my * hz - mz * hy
        ty = mz * hx - mx * hz
        tz = mx * hy - my * hx
        dm[i, 0] = g * tx - ag * (my * tz - mz * ty)
        dm[i, 1] = g * ty - ag * (mz * tx - mx * tz)
        dm[i, 2] = g * tz - ag * (mx * ty - my * tx)
        dP[i] = (coef[C_CME] * V[i] - P[i]) / coef[C_TAUFE]
        s = nbr_w[i, 0] * Y[nbr_idx[i, 0]]
        for k in range(1, nbr_idx.shape[1]):
            s = s + nbr_w[i, k] * Y[nbr_idx[i, k]]
        target = ksat_over_n[i] * s
        if target > vdd:
            target = vdd
        elif target < -vdd:
            target = -vdd
        dV[i] = (target - V[i]) / coef[C_TAUV]
        rx = coef[C_RXC] * my
        v_ir = coef[C_ID] * rx
        r_eff = abs(rx)
        if r_eff < coef[C_RFLOOR]:
            r_eff = coef[C_RFLOOR]
        dY[i] = (v_ir - Y[i]) / (r_eff * coef[C_CY])


@njit(cache=True, nogil=True)
def step_coupled(m, P, V, Y, noise, nbr_idx, nbr_w, ksat_over_n, coef, dt, n_sub):
    n = m.shape[0]
    k1m = np.empty((n, 3))
    k2m = np.empty((n, 3))
    k3m = np.empty((n, 3))
    k4m = np.empty((n, 3))
    k1p = np.empty(n)
    k2p = np.empty(n)
    k3p = np.empty(n)
    k4p = np.empty(n)
    k1v = np.empty(n)
    k2v = np.empty(n)
    k3v = np.empty(n)
    k4v = np.empty(n)
    k1y = np.empty(n)
    k2y = np.empty(n)
    k3y = np.empty(n)
    k4y = np.empty(n)
    tm = np.empty((n, 3))
    tp = np.empty(n)
    tv = np.empty(n)
    ty = np.empty(n)
    h = dt / n_sub
    s6 = h / 6.0
    hh = 0.5 * h
    for _ in range(n_sub):
        _rhs(m, P, V, Y, noise, nbr_idx, nbr_w, ksat_over_n, coef, k1m, k1p, k1v, k1y)
        for i in range(n):
            tm[i, 0] = m[i, 0] + hh * k1m[i, 0]
            tm[i, 1] = m[i, 1] + hh * k1m[i, 1]
            tm[i, 2] = m[i, 2] + hh * k1m[i, 2]
            tp[i] = P[i] + hh * k1p[i]
            tv[i] = V[i] + hh * k1v[i]
            ty[i] = Y[i] + hh * k1y[i]
        _rhs(tm, tp, tv, ty, noise, nbr_idx, nbr_w, ksat_over_n, coef, k2m, k2p, k2v, k2y)
        for i in range(n):
            tm[i, 0] = m[i, 0] + hh * k2m[i, 0]
            tm[i, 1] = m[i, 1] + hh * k2m[i, 1]
            tm[i, 2] = m[i, 2] + hh * k2m[i, 2]
            tp[i] = P[i] + hh * k2p[i]
            tv[i] = V[i] + hh * k2v[i]
            ty[i] = Y[i] + hh * k2y[i]
        _rhs(tm, tp, tv, ty, noise, nbr_idx, nbr_w, ksat_over_n, coef, k3m, k3p, k3v, k3y)
        for i in range(n):
            tm[i, 0] = m[i, 0] + h * k3m[i, 0]
            tm[i, 1] = m[i, 1] + h * k3m[i, 1]
            tm[i, 2] = m[i, 2] + h * k3m[i, 2]
            tp[i] = P[i] + h * k3p[i]
            tv[i] = V[i] + h * k3v[i]
            ty[i] = Y[i] + h * k3y[i]
        _rhs(tm, tp, tv, ty, noise, nbr_idx, nbr_w, ksat_over_n, coef, k4m, k4p, k4v, k4y)
        for i in range(n):
            accx = k1m[i, 0] + 2.0 * k2m[i, 0]
            accx = accx + 2.0 * k3m[i, 0]
            accx = accx + k4m[i, 0]
            accy = k1m[i, 1] + 2.0 * k2m[i, 1]
            accy = accy + 2.0 * k3m[i, 1]
            accy = accy + k4m[i, 1]
            accz = k1m[i, 2] + 2.0 * k2m[i, 2]
            accz = accz + 2.0 * k3m[i, 2]
            accz = accz + k4m[i, 2]
            mxn = m[i, 0] + s6 * accx
            myn = m[i, 1] + s6 * accy
            mzn = m[i, 2] + s6 * accz
            acc = k1p[i] + 2.0 * k2p[i]
            acc = acc + 2.0 * k3p[i]
            acc = acc + k4p[i]
            P[i] += s6 * acc
            acc = k1v[i] + 2.0 * k2v[i]
            acc = acc + 2.0 * k3v[i]
            acc = acc + k4v[i]
            V[i] += s6 * acc
            acc = k1y[i] + 2.0 * k2y[i]
            acc = acc + 2.0 * k3y[i]
            acc = acc + k4y[i]
            Y[i] += s6 * acc
            nrm = np.sqrt(mxn * mxn + myn * myn + mzn * mzn)
            m[i, 0] = mxn / nrm
            m[i, 1] = myn / nrm
            m[i, 2] = mzn / nrm
