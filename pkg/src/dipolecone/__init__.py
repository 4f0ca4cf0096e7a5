"""Light-cone propagation in classical dipole chains.

Undamped Landau-Lifshitz dynamics of a 1D chain of unit dipoles coupled by
the long-range dipolar field, plus the tools to locate the propagation
front and fit its power-law and linear regimes.
"""

__version__ = "0.1.0"

from .core import ConfigError, Preset, SimConfig, SpinChain, make_preset
from .field import FieldKernel, field_direct, field_fft, total_energy
from .integrator import (IntegrationAborted, StepStats, Trajectory, heun_step,
                         rodrigues_rotate, run_simulation)
from .observables import ObservableSeries, compute_series, fidelity, normal_component
from .frontkit import (FitReport, FrontTrace, detect_front, fit_linear, fit_precursor,
                       fit_report, master_rescale, predicted_B)

__all__ = [
    "ConfigError", "Preset", "SimConfig", "SpinChain", "make_preset",
    "FieldKernel", "field_direct", "field_fft", "total_energy",
    "IntegrationAborted", "StepStats", "Trajectory", "heun_step", "rodrigues_rotate",
    "run_simulation",
    "ObservableSeries", "compute_series", "fidelity", "normal_component",
    "FitReport", "FrontTrace", "detect_front", "fit_linear", "fit_precursor", "fit_report",
    "master_rescale", "predicted_B",
]
