"""The two-regime light cone of the HIGH_ENERGY chain.

213 unit dipoles point along +y, the middle one along +x.  We integrate
the undamped dynamics, follow where 1 - F crosses a fixed contour level,
and fit the early power law and the later linear front.
"""
import numpy as np

from dipolecone import compute_series, detect_front, run_simulation
from dipolecone.cli import experiment_config
from dipolecone.frontkit import fit_report

config = experiment_config("fig1")
traj = run_simulation(config)
print(f"{traj.n_steps} steps, energy drift {traj.max_energy_drift:.1e}, "
      f"norm drift {traj.max_norm_drift:.1e}")

###############################################################################
# Front position and the two fits
series = compute_series(traj)
trace = detect_front(series, config.contour_level)
report = fit_report(trace, config.fit_window_early, config.linear_window)
print(f"precursor: x - x_c = {report.A:.1f} t^{report.beta:.3f}")
print(f"linear:    x - x_c = {report.B:.1f} + {report.v_s:.1f} t")
print(f"tangent-join intercept 2/sqrt(27) A^1.5 / sqrt(v_s) = {report.B_predicted:.1f}")

###############################################################################
# Space-time map of 1 - F with the fitted fronts (needs matplotlib)
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    x = np.arange(1, series.n_sites + 1)
    img = np.log10(np.maximum(series.one_minus_F, 1e-18))
    ax.pcolormesh(x, series.times, img, shading="auto", vmin=-16, vmax=0, cmap="magma")
    t = np.linspace(1e-4, config.t_end, 400)
    c = trace.center
    for sign in (-1, 1):
        ax.plot(c + sign * report.A * t ** report.beta, t, "w--", lw=0.8)
        ax.plot(c + sign * (report.B + report.v_s * t), t, "c-", lw=0.8)
    ax.set(xlabel="site", ylabel="t", ylim=(0, config.t_end), xlim=(1, series.n_sites))
    fig.savefig("light_cone.png", dpi=120, bbox_inches="tight")
    print("wrote light_cone.png")
