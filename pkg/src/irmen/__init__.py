"""Device-level simulator for IRMEN cellular neural networks.

An IRMEN (inverse-Rashba-Edelstein magnetoelectric neuron) encodes its
state in the easy-axis projection of a nanomagnet, written through a
magnetoelectric capacitor and read out through an inverse Rashba-Edelstein
stack.  This package integrates the coupled magnetization / polarization /
circuit dynamics of a 2-D grid of such neurons and measures error, energy,
delay, and energy-delay product for image-filtering workloads.
"""

__version__ = "0.1.0"

from .params import Params, DerivedReport, load_params, validate, derive_quantities
from .network import Network, NetworkState, Trace, build_grid, init_state, run_until, error_metric
from .experiments import Workload, MCStats, gen_circle_image, apply_noise, monte_carlo, energy_delay

__all__ = [
    "Params",
    "DerivedReport",
    "load_params",
    "validate",
    "derive_quantities",
    "Network",
    "NetworkState",
    "Trace",
    "build_grid",
    "init_state",
    "run_until",
    "error_metric",
    "Workload",
    "MCStats",
    "gen_circle_image",
    "apply_noise",
    "monte_carlo",
    "energy_delay",
    "__version__",
]
