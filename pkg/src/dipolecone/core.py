"""Domain types, initial-configuration presets and unit conventions.

Units: lattice spacing ``a = 1`` and coupling ``C_M = 1`` by default, so
time is measured in units of ``4*pi*a**3 / (mu0*m)``.  Sites are 1-indexed
on every external surface; site ``l`` sits at ``x = l * a``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

NORM_TOL = 1e-12
EX = np.array([1.0, 0.0, 0.0])
EY = np.array([0.0, 1.0, 0.0])
EZ = np.array([0.0, 0.0, 1.0])


class Preset(str, enum.Enum):
    HIGH_ENERGY = "HIGH_ENERGY"
    GROUND_STATE = "GROUND_STATE"
    SUPP = "SUPP"
    CUSTOM = "CUSTOM"


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending key."""


# (bulk direction, perturbed direction) for each built-in preset
_PRESET_SPINS = {
    Preset.HIGH_ENERGY: (EY, EX),
    Preset.GROUND_STATE: (EY, EZ),
    Preset.SUPP: (EX, EZ),
}
CENTERED = (Preset.HIGH_ENERGY, Preset.GROUND_STATE)


def check_unit_norm(spins, tol=NORM_TOL):
    spins = np.asarray(spins, dtype=float)
    if spins.ndim != 2 or spins.shape[1] != 3:
        raise ValueError(f"spins must have shape (N, 3), got {spins.shape}")
    drift = np.abs(np.linalg.norm(spins, axis=1) - 1.0)
    if drift.size and drift.max() > tol:
        bad = int(np.argmax(drift)) + 1
        raise ValueError(f"spin at site {bad} is not unit length (| |s|-1 | = {drift.max():.3e})")
    return spins


@dataclass
class SpinChain:
    """Unit spins on a regular lattice along the x axis.

    ``spins`` has shape (N, 3).  ``perturbed_site`` (1-indexed) and ``bulk``
    describe the preset that produced the chain; ``bulk`` is the reference
    direction for the classical fidelity.
    """

    spins: np.ndarray
    spacing: float = 1.0
    perturbed_site: int | None = None
    bulk: np.ndarray | None = None

    def __post_init__(self):
        self.spins = check_unit_norm(self.spins).copy()
        if len(self.spins) < 1:
            raise ValueError("a chain needs at least one site")
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")

    @property
    def n_sites(self):
        return len(self.spins)

    @property
    def sites(self):
        return np.arange(1, self.n_sites + 1)

    @property
    def positions(self):
        return self.sites * self.spacing

    @property
    def center(self):
        """Perturbed site if known, otherwise the geometric middle (1-indexed)."""
        if self.perturbed_site is not None:
            return self.perturbed_site
        return (self.n_sites + 1) / 2

    def reference(self):
        """Per-site fidelity reference: the bulk direction, or the spins themselves."""
        if self.bulk is None:
            return self.spins.copy()
        return np.broadcast_to(self.bulk, self.spins.shape).copy()

    def with_spins(self, spins):
        return replace(self, spins=spins)


def perturbed_site_for(preset, n_sites):
    preset = Preset(preset)
    if preset in CENTERED:
        if n_sites % 2 == 0:
            raise ConfigError(
                f"n_sites must be odd for the centered preset {preset.value} "
                f"(got {n_sites}); the perturbed site is the middle one, (n_sites+1)/2"
            )
        return (n_sites + 1) // 2
    if preset is Preset.SUPP:
        return max(n_sites // 2, 1)
    raise ConfigError(f"preset {preset.value} has no built-in initial state")


def make_preset(preset, n_sites, spacing=1.0):
    """Build the initial chain for a named preset.

    HIGH_ENERGY: all (0,1,0), middle site (1,0,0).
    GROUND_STATE: all (0,1,0), middle site (0,0,1).
    SUPP: all (1,0,0), site n_sites//2 set to (0,0,1).
    """
    preset = Preset(preset)
    if n_sites < 1:
        raise ConfigError(f"n_sites must be positive (got {n_sites})")
    site = perturbed_site_for(preset, n_sites)
    bulk, kick = _PRESET_SPINS[preset]
    spins = np.tile(bulk, (n_sites, 1))
    spins[site - 1] = kick
    return SpinChain(spins, spacing=spacing, perturbed_site=site, bulk=bulk.copy())


def _window(value, name):
    lo, hi = value
    if hi is not None and not lo < hi:
        raise ConfigError(f"{name} must be an ordered interval, got {value}")
    if lo < 0:
        raise ConfigError(f"{name} must start at t >= 0, got {value}")
    return (float(lo), None if hi is None else float(hi))


@dataclass
class SimConfig:
    """All parameters of one run.

    ``fit_window_linear`` with an upper bound of ``None`` extends to
    ``t_end``.  ``fine_start_dt`` switches on a fine-step phase covering the
    precursor window before the main ``dt`` takes over.
    """

    n_sites: int = 213
    preset: Preset = Preset.HIGH_ENERGY
    alpha: float = 3.0
    c_m: float = 1.0
    dt: float = 2.5e-3
    t_end: float = 2.0
    snapshot_stride: int = 1
    contour_level: float = 1e-8
    field_sign: int = 1
    fit_window_early: tuple = (0.001, 0.1)
    fit_window_linear: tuple = (0.15, None)
    fine_start_dt: float | None = None
    energy_abort: float = 1e-2
    noise_floor: float = 1e-12

    def __post_init__(self):
        self.preset = Preset(self.preset)
        self.validate()

    def validate(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 1:
            raise ConfigError(f"n_sites must be a positive integer (got {self.n_sites})")
        self.n_sites = int(self.n_sites)
        if self.preset is not Preset.CUSTOM:
            perturbed_site_for(self.preset, self.n_sites)
        if self.alpha < 2:
            raise ConfigError(f"alpha must be >= 2 (got {self.alpha})")
        if self.c_m <= 0:
            raise ConfigError(f"c_m must be positive (got {self.c_m})")
        if self.dt <= 0:
            raise ConfigError(f"dt must be positive (got {self.dt})")
        if self.t_end < 0:
            raise ConfigError(f"t_end must be >= 0 (got {self.t_end})")
        if int(self.snapshot_stride) != self.snapshot_stride or self.snapshot_stride < 1:
            raise ConfigError(f"snapshot_stride must be a positive integer (got {self.snapshot_stride})")
        self.snapshot_stride = int(self.snapshot_stride)
        if self.contour_level <= 0:
            raise ConfigError(f"contour_level must be positive (got {self.contour_level})")
        if self.field_sign not in (1, -1):
            raise ConfigError(f"field_sign must be +1 or -1 (got {self.field_sign})")
        self.field_sign = int(self.field_sign)
        self.fit_window_early = _window(self.fit_window_early, "fit_window_early")
        self.fit_window_linear = _window(self.fit_window_linear, "fit_window_linear")
        if self.fit_window_early[1] is None:
            raise ConfigError("fit_window_early needs an upper bound")
        if self.fit_window_early[1] > self.fit_window_linear[0]:
            raise ConfigError(
                f"fit windows must be disjoint and ordered: fit_window_early={self.fit_window_early}, "
                f"fit_window_linear={self.fit_window_linear}"
            )
        if self.fine_start_dt is not None:
            if not 0 < self.fine_start_dt <= self.dt:
                raise ConfigError(f"fine_start_dt must lie in (0, dt] (got {self.fine_start_dt})")
        if self.energy_abort <= 0:
            raise ConfigError(f"energy_abort must be positive (got {self.energy_abort})")

    @property
    def n_steps(self):
        return int(round(self.t_end / self.dt))

    @property
    def linear_window(self):
        lo, hi = self.fit_window_linear
        return (lo, self.t_end if hi is None else min(hi, self.t_end))

    def initial_chain(self):
        return make_preset(self.preset, self.n_sites)

    def replace(self, **changes):
        return replace(self, **changes)
