"""Per-site diagnostics: classical fidelity and the normal (transverse) component."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def fidelity(spins, reference):
    """Return ``1 - F`` per site with ``F = s . s_ref``.

    ``reference`` is either one direction shared by all sites or an array
    with the same shape as ``spins``.
    """
    spins = np.asarray(spins, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if reference.ndim == spins.ndim and reference.shape != spins.shape:
        raise ValueError(
            f"reference has {reference.shape[-2]} sites but the chain has {spins.shape[-2]}"
        )
    return np.clip(1.0 - np.sum(spins * reference, axis=-1), 0.0, 2.0)


def normal_component(spins):
    """``S_N = sqrt(sy**2 + sz**2)`` per site."""
    spins = np.asarray(spins, dtype=float)
    return np.clip(np.hypot(spins[..., 1], spins[..., 2]), 0.0, 1.0)


@dataclass
class ObservableSeries:
    """Observable matrices indexed ``[snapshot, site]``.

    ``center`` is the 1-indexed perturbed site; positions are
    ``site * spacing``.
    """

    times: np.ndarray
    one_minus_F: np.ndarray
    S_N: np.ndarray
    center: float
    spacing: float = 1.0

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.one_minus_F = np.asarray(self.one_minus_F, dtype=float)
        self.S_N = np.asarray(self.S_N, dtype=float)
        if self.one_minus_F.shape != self.S_N.shape or len(self.times) != len(self.S_N):
            raise ValueError("observable matrices must be (n_snapshots, n_sites) and match times")

    @property
    def n_sites(self):
        return self.S_N.shape[1]

    def get(self, name):
        if name in ("one_minus_F", "1-F", "fidelity"):
            return self.one_minus_F
        if name in ("S_N", "normal"):
            return self.S_N
        raise ValueError(f"unknown observable {name!r}; use 'one_minus_F' or 'S_N'")

    def mirrored(self):
        """Reflect sites l -> N+1-l (and the center with them)."""
        return ObservableSeries(self.times, self.one_minus_F[:, ::-1], self.S_N[:, ::-1],
                                self.n_sites + 1 - self.center, self.spacing)


def compute_series(trajectory, reference=None):
    """Observables for every snapshot of a trajectory.

    The fidelity reference defaults to the chain's bulk direction.
    """
    chain = trajectory.chain
    if reference is None:
        reference = chain.bulk if chain.bulk is not None else chain.spins
    return ObservableSeries(
        trajectory.times,
        fidelity(trajectory.spins, reference),
        normal_component(trajectory.spins),
        chain.center,
        chain.spacing,
    )
