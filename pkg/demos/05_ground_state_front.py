"""Front of the GROUND_STATE chain at the same contour level as the HIGH_ENERGY one.

Bulk along +y with the middle dipole along +z.  The precursor still goes as
t^(1/3), but the later front does not settle into the fast linear motion
of the HIGH_ENERGY chain; its fitted speed is several times smaller.
"""
import numpy as np

from dipolecone import compute_series, detect_front, run_simulation
from dipolecone.cli import experiment_config
from dipolecone.frontkit import fit_report

for name in ("fig1", "fig2"):
    config = experiment_config(name)
    trace = detect_front(compute_series(run_simulation(config)), config.contour_level)
    r = fit_report(trace, config.fit_window_early, config.linear_window)
    print(f"{config.preset.value:13s} A = {r.A:5.1f}  beta = {r.beta:.3f}  "
          f"B = {r.B:5.1f}  v_s = {r.v_s:5.1f}")
    d = trace.distance()
    sample = [np.argmin(np.abs(trace.times - t)) for t in (0.2, 0.6, 1.0, 1.4, 1.8)]
    print("    distance at t = 0.2, 0.6, 1.0, 1.4, 1.8:",
          " ".join(f"{d[i]:.1f}" for i in sample))
