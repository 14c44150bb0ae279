"""Step-kernel backend selection.

The hot inner loop exists twice: a numba @njit kernel and a pure-numpy
twin.  The environment flag IRMEN_BACKEND picks one ("numba" or "numpy");
unset, numba is used when importable and numpy otherwise.  The numba
import is deferred so light commands (device report, parameter checks)
never pay the JIT toolchain import cost.
"""

from __future__ import annotations

import os
from typing import Callable

from . import kernels_numpy

ENV_FLAG = "IRMEN_BACKEND"

_active: str | None = None
_step_fn: Callable | None = None


class BackendError(RuntimeError):
    """Raised when the requested step backend cannot be provided."""


def _resolve(name: str) -> Callable:
    if name == "numpy":
        return kernels_numpy.step_coupled
    if name == "numba":
        try:
            from . import kernels_numba
        except ImportError as exc:
            raise BackendError(f"numba backend requested but not importable: {exc}") from exc
        return kernels_numba.step_coupled
    raise BackendError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")


def set_backend(name: str | None) -> None:
    """Force a backend ("numba"/"numpy"), or None to re-read the environment."""
    global _active, _step_fn
    if name is None:
        _active = None
        _step_fn = None
        return
    _step_fn = _resolve(name)
    _active = name


def active_backend() -> str:
    """Name of the backend the next step will run on."""
    if _active is None:
        _init_from_env()
    assert _active is not None
    return _active


def step_fn() -> Callable:
    """The in-place coupled step kernel for the active backend."""
    if _step_fn is None:
        _init_from_env()
    assert _step_fn is not None
    return _step_fn


def _init_from_env() -> None:
    global _active, _step_fn
    requested = os.environ.get(ENV_FLAG, "").strip().lower()
    if requested:
        _step_fn = _resolve(requested)
        _active = requested
        return
    try:
        _step_fn = _resolve("numba")
        _active = "numba"
    except BackendError:
        _step_fn = kernels_numpy.step_coupled
        _active = "numpy"
