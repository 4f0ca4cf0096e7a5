"""Undamped Landau-Lifshitz dynamics with norm-exact rotations.

Each spin precesses about its local field, ds/dt = -s x H, so one step is
a rotation by ``|H| dt`` about ``H/|H|``.  The Heun predictor-corrector
rotates once with the field of the current state, then redoes the step
from the current state with the average of the two fields.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .core import ConfigError, Preset, SimConfig, SpinChain
from .field import energy_from_field, field_evaluator

log = logging.getLogger(__name__)

FINE_SNAPSHOTS_PER_DECADE = 20
MAX_STEP_ANGLE = 0.1


class IntegrationAborted(RuntimeError):
    """Energy drift exceeded the abort threshold; ``dt`` is probably too large."""

    def __init__(self, time, drift, threshold, trajectory=None):
        super().__init__(
            f"relative energy drift {drift:.3e} exceeded {threshold:.1e} at t = {time:.6g}; "
            "reduce dt"
        )
        self.time = time
        self.drift = drift
        self.trajectory = trajectory


def rodrigues_rotate(s, H, dt):
    """Rotate spin(s) ``s`` about ``H`` by the angle ``|H| dt``.

    Works on single vectors or stacks of shape (..., 3).  Equivalent to
    applying the matrix with entries ``h_i h_j w + delta_ij v - eps_ijk h_k u``
    with ``u = sin(omega)``, ``v = cos(omega)``, ``w = 1 - v``.  Sites with zero
    field are returned unchanged.
    """
    s = np.asarray(s, dtype=float)
    H = np.asarray(H, dtype=float)
    norm = np.linalg.norm(H, axis=-1, keepdims=True)
    safe = np.where(norm > 0.0, norm, 1.0)
    h = np.where(norm > 0.0, H / safe, 0.0)
    omega = norm * dt
    u, v = np.sin(omega), np.cos(omega)
    w = 1.0 - v
    hs = np.sum(h * s, axis=-1, keepdims=True)
    return v * s + u * np.cross(h, s) + w * hs * h


def rotation_matrix(H, dt):
    """Explicit 3x3 rotation matrix for a single field vector."""
    H = np.asarray(H, dtype=float)
    n = np.linalg.norm(H)
    if n == 0.0:
        return np.eye(3)
    hx, hy, hz = H / n
    om = n * dt
    u, v = np.sin(om), np.cos(om)
    w = 1.0 - v
    return np.array([
        [hx * hx * w + v, hx * hy * w - hz * u, hx * hz * w + hy * u],
        [hx * hy * w + hz * u, hy * hy * w + v, hy * hz * w - hx * u],
        [hx * hz * w - hy * u, hy * hz * w + hx * u, hz * hz * w + v],
    ])


def _advance(spins, field_fn, dt, h0=None):
    if h0 is None:
        h0 = field_fn(spins)
    predicted = rodrigues_rotate(spins, h0, dt)
    h_avg = 0.5 * (h0 + field_fn(predicted))
    return rodrigues_rotate(spins, h_avg, dt), h0, h_avg


def heun_step(spins, dt, alpha=3.0, c_m=1.0, spacing=1.0, field_sign=1, field_fn=None):
    """One Heun step; returns the new (N, 3) spin array."""
    spins = np.asarray(spins, dtype=float)
    if field_fn is None:
        field_fn = field_evaluator(len(spins), alpha, c_m, spacing, field_sign)
    return _advance(spins, field_fn, dt)[0]


@dataclass
class StepStats:
    time: float
    max_norm_drift: float
    energy: float
    max_precession_angle: float


@dataclass
class Trajectory:
    """Snapshots of a run: ``spins[k]`` is the state at ``times[k]``."""

    times: np.ndarray
    spins: np.ndarray
    stats: list = field(default_factory=list)
    chain: SpinChain | None = None
    config: SimConfig | None = None
    max_norm_drift: float = 0.0
    max_energy_drift: float = 0.0
    n_steps: int = 0

    @property
    def energies(self):
        return np.array([st.energy for st in self.stats])

    def energy_drift(self):
        e = self.energies
        scale = abs(e[0]) if e[0] != 0 else 1.0
        return np.abs(e - e[0]) / scale

    def norm_drift(self):
        return np.abs(np.linalg.norm(self.spins, axis=-1) - 1.0).max()


def _schedule(config):
    """List of (t, dt, record) for every step, honouring the fine-start phase.

    The final step is always recorded.
    """
    n_coarse = config.n_steps
    stride = config.snapshot_stride
    steps = []
    skip = 0
    if config.fine_start_dt is not None and n_coarse > 0:
        skip = int(round(min(config.fit_window_early[1], n_coarse * config.dt) / config.dt))
        fine_until = skip * config.dt
        n_fine = int(round(fine_until / config.fine_start_dt))
        if n_fine > 0:
            fdt = fine_until / n_fine
            n_marks = max(int(np.ceil(np.log10(max(n_fine, 10)) * FINE_SNAPSHOTS_PER_DECADE)), 2)
            marks = set(np.round(np.geomspace(1, n_fine, n_marks)).astype(int).tolist())
            marks.add(n_fine)
            steps += [(i * fdt, fdt, i in marks) for i in range(1, n_fine + 1)]
    steps += [(j * config.dt, config.dt, j % stride == 0) for j in range(skip + 1, n_coarse + 1)]
    if steps:
        steps[-1] = steps[-1][:2] + (True,)
    return steps


def run_simulation(config, chain=None):
    """Integrate from t = 0 to ``config.t_end`` and record a Trajectory.

    The initial state is always recorded.  Snapshots follow every
    ``snapshot_stride`` steps of size ``dt``; during a fine-start phase they
    are spaced geometrically in time.
    """
    if chain is None:
        if config.preset is Preset.CUSTOM:
            raise ConfigError("preset CUSTOM requires an explicit initial chain")
        chain = config.initial_chain()
    if chain.n_sites != config.n_sites:
        raise ConfigError(f"n_sites={config.n_sites} but the chain has {chain.n_sites} sites")

    field_fn = field_evaluator(chain.n_sites, config.alpha, config.c_m, chain.spacing, config.field_sign)
    spins = chain.spins.copy()
    h = field_fn(spins)
    h_max = float(np.linalg.norm(h, axis=1).max())
    if h_max * config.dt >= MAX_STEP_ANGLE:
        raise ConfigError(
            f"dt={config.dt} too large: precession angle per step {h_max * config.dt:.3g} "
            f"must stay below {MAX_STEP_ANGLE}"
        )

    e0 = energy_from_field(spins, h)
    scale = abs(e0) if e0 != 0.0 else 1.0
    times, snaps = [0.0], [spins.copy()]
    stats = [StepStats(0.0, float(np.abs(np.linalg.norm(spins, axis=1) - 1).max()), e0, 0.0)]
    traj = Trajectory(np.array(times), np.array(snaps), stats, chain, config)
    max_angle = 0.0
    n_steps = 0
    for t, dt, record in _schedule(config):
        spins, h0, h_avg = _advance(spins, field_fn, dt, h)
        n_steps += 1
        max_angle = max(max_angle, float(np.linalg.norm(h_avg, axis=1).max()) * dt)
        h = field_fn(spins)
        energy = energy_from_field(spins, h)
        drift = abs(energy - e0) / scale
        norm_drift = float(np.abs(np.linalg.norm(spins, axis=1) - 1.0).max())
        traj.max_energy_drift = max(traj.max_energy_drift, drift)
        traj.max_norm_drift = max(traj.max_norm_drift, norm_drift)
        if record:
            times.append(t)
            snaps.append(spins.copy())
            stats.append(StepStats(t, norm_drift, energy, max_angle))
            max_angle = 0.0
        if drift > config.energy_abort:
            traj.times, traj.spins, traj.n_steps = np.array(times), np.array(snaps), n_steps
            raise IntegrationAborted(t, drift, config.energy_abort, traj)

    traj.times, traj.spins, traj.n_steps = np.array(times), np.array(snaps), n_steps
    log.debug("run finished: %d steps, %d snapshots, energy drift %.2e, norm drift %.2e",
              n_steps, len(times), traj.max_energy_drift, traj.max_norm_drift)
    return traj

