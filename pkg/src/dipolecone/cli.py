"""Config parsing, named experiments and batch runs that write CSV/report files.

Usage::

    dipolecone --preset fig1 --out runs/fig1
    dipolecone --config run.cfg --out runs/custom --quiet

A config file is flat ``key=value`` text (whitespace or newline separated,
``#`` starts a comment).  Files written to the output directory:
``snapshots.csv``, ``observables.csv``, ``front.csv`` and ``report.txt``.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .core import ConfigError, Preset, SimConfig
from .field import total_energy
from .frontkit import (EndContactError, InsufficientData, detect_front, fit_report,
                       master_rescale)
from .integrator import IntegrationAborted, run_simulation
from .observables import compute_series

log = logging.getLogger("dipolecone")

CONFIG_KEYS = (
    "preset", "n_sites", "alpha", "c_m", "dt", "t_end", "snapshot_stride",
    "contour_level", "field_sign", "fit_window_early", "fit_window_linear", "fine_start_dt",
)

# Contour level on 1 - F calibrated so the HIGH_ENERGY precursor amplitude is
# close to 43 a: early on 1 - F ~ 2 t**2 / x**6, so x = (2/C)**(1/6) t**(1/3).
CALIBRATED_LEVEL = 3e-10
# Same level expressed on S_N (S_N ~ sqrt(2 (1 - F)) for small tilts).
CALIBRATED_LEVEL_SN = 2.5e-5

EXPERIMENTS = {
    "fig1": dict(preset="HIGH_ENERGY", n_sites=213, dt=2.5e-3, t_end=2.0, snapshot_stride=2,
                 contour_level=CALIBRATED_LEVEL, fine_start_dt=1e-5),
    "fig2": dict(preset="GROUND_STATE", n_sites=257, dt=2.5e-3, t_end=2.0, snapshot_stride=2,
                 contour_level=CALIBRATED_LEVEL, fine_start_dt=1e-5),
    "supp": dict(preset="SUPP", n_sites=1024, dt=2.5e-3, t_end=0.5, snapshot_stride=1,
                 contour_level=CALIBRATED_LEVEL_SN),
    "alpha4": dict(preset="HIGH_ENERGY", n_sites=213, alpha=4.0, dt=2.5e-3, t_end=0.5,
                   snapshot_stride=2, contour_level=CALIBRATED_LEVEL, fine_start_dt=1e-5),
}

# conservation thresholds that decide the exit status
NORM_TOL = 1e-9
ENERGY_TOL = 1e-4


def _parse_window(text, key):
    parts = [p.strip() for p in text.strip().strip("[]()").split(",")]
    if len(parts) != 2:
        raise ConfigError(f"{key} must be two comma-separated times, got {text!r}")
    lo = float(parts[0])
    hi = None if parts[1].lower() in ("", "end", "t_end", "none") else float(parts[1])
    return (lo, hi)


def _convert(key, value):
    try:
        if key == "preset":
            return Preset(value.upper())
        if key in ("n_sites", "snapshot_stride", "field_sign"):
            return int(value)
        if key in ("fit_window_early", "fit_window_linear"):
            return _parse_window(value, key)
        if key == "fine_start_dt" and value.lower() in ("none", "off", ""):
            return None
        return float(value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None


def parse_options(text):
    """Key-value text -> dict of converted values (unknown keys rejected)."""
    out = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        for token in line.split():
            if "=" not in token:
                raise ConfigError(f"expected key=value, got {token!r}")
            key, value = token.split("=", 1)
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise ConfigError(f"unknown key {key!r}; allowed keys: {', '.join(CONFIG_KEYS)}")
            out[key] = _convert(key, value.strip())
    return out


def parse_config(text, **overrides):
    """Build a validated SimConfig from key-value text; absent keys take defaults."""
    opts = parse_options(text)
    opts.update(overrides)
    return SimConfig(**opts)


def experiment_config(name, **overrides):
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    return SimConfig(**{**EXPERIMENTS[name], **overrides})


@dataclass
class RunManifest:
    config: dict
    version: str
    wall_time: float
    outputs: dict
    conservation: dict
    fits: dict
    master: dict | None = None
    ok: bool = True
    notes: list = field(default_factory=list)


def contour_observable(config):
    return "S_N" if config.preset is Preset.SUPP else "one_minus_F"


def _config_echo(config):
    d = asdict(config)
    d["preset"] = config.preset.value
    return d


def _write_csv(path, header, columns, fmt):
    data = np.column_stack(columns)
    np.savetxt(path, data, fmt=fmt, delimiter=",", header=header, comments="")


def _fmt8(x):
    if isinstance(x, (float, np.floating)):
        return f"{x:.8g}"
    if isinstance(x, tuple):
        return ",".join("end" if v is None else _fmt8(v) for v in x)
    return str(x)


def analyse(traj, config):
    """Observables, front trace, fits and (for SUPP) the master plot of a trajectory."""
    series = compute_series(traj)
    observable = contour_observable(config)
    trace = detect_front(series, config.contour_level, observable=observable,
                         noise_floor=config.noise_floor)
    notes = []
    try:
        report = fit_report(trace, config.fit_window_early, config.linear_window)
        fits = {"status": "ok", **report.as_dict(), "B_relative_error": report.B_relative_error}
    except (InsufficientData, EndContactError) as exc:
        fits = {"status": "insufficient data", "reason": str(exc)}
        notes.append(f"fits skipped: {exc}")
    master = None
    if config.preset is Preset.SUPP:
        try:
            mp = master_rescale(series, window=(0.0, config.fit_window_early[1]),
                                noise_floor=config.noise_floor)
            master = {"status": "ok", "exponent": mp.exponent, "prefactor": mp.prefactor,
                      "n_sites_used": int(len(mp.sites)),
                      "excluded_sites": [int(s) for s in mp.excluded_sites]}
        except InsufficientData as exc:
            master = {"status": "insufficient data", "reason": str(exc)}
            notes.append(f"master plot skipped: {exc}")
    return series, trace, fits, master, notes


def conservation_summary(traj):
    """Drifts over the recorded snapshots, plus the maxima seen over every step."""
    cfg, chain = traj.config, traj.chain
    e = np.array([total_energy(s, cfg.alpha, cfg.c_m, chain.spacing, cfg.field_sign)
                  for s in traj.spins])
    scale = abs(e[0]) if e[0] != 0 else 1.0
    return {
        "max_norm_drift": float(traj.norm_drift()),
        "energy_drift": float(np.abs(e - e[0]).max() / scale),
        "energy_initial": float(e[0]),
        "max_norm_drift_all_steps": float(traj.max_norm_drift),
        "energy_drift_all_steps": float(traj.max_energy_drift),
        "n_steps": int(traj.n_steps),
        "n_snapshots": int(len(traj.times)),
    }


def _report_text(config, conservation, fits, master, notes):
    lines = ["dipolecone run report", f"version {__version__}", "",
             f"preset {config.preset.value}, N = {config.n_sites}, alpha = {config.alpha:g}, "
             f"C_M = {config.c_m:g}, dt = {config.dt:g}, t_end = {config.t_end:g}", ""]
    lines.append("conservation")
    lines.append(f"  max | |s|-1 |     {conservation['max_norm_drift']:.3e}")
    lines.append(f"  energy drift      {conservation['energy_drift']:.3e}")
    lines.append("")
    lines.append(f"front fits (observable {contour_observable(config)}, "
                 f"contour level {config.contour_level:g})")
    if fits["status"] == "ok":
        lines.append(f"  precursor  x - x_c = {fits['A']:.4g} t^{fits['beta']:.4f}")
        lines.append(f"  linear     x - x_c = {fits['B']:.4g} + {fits['v_s']:.4g} t")
        lines.append(f"  predicted B = {fits['B_predicted']:.4g} "
                     f"(relative difference {fits['B_relative_error']:.2%})")
    else:
        lines.append(f"  insufficient data: {fits['reason']}")
    if master is not None:
        lines.append("")
        if master["status"] == "ok":
            lines.append(f"master plot: S_N ~ t * x^{master['exponent']:.4f}")
        else:
            lines.append(f"master plot: insufficient data: {master['reason']}")
    for note in notes:
        lines.append(f"note: {note}")

    lines += ["", "[machine-readable]"]
    for k, v in _config_echo(config).items():
        lines.append(f"config.{k}={_fmt8(v)}")
    for k, v in conservation.items():
        lines.append(f"conservation.{k}={_fmt8(v)}")
    for k, v in fits.items():
        lines.append(f"fit.{k}={_fmt8(v)}")
    if master is not None:
        for k, v in master.items():
            if k != "excluded_sites":
                lines.append(f"master.{k}={_fmt8(v)}")
    return "\n".join(lines) + "\n"


def run_experiment(config, output_dir, chain=None):
    """Run, analyse and write all output files; returns a RunManifest.

    ``IntegrationAborted`` propagates with the abort time.
    """
    start = time.perf_counter()
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)

    traj = run_simulation(config, chain)
    series, trace, fits, master, notes = analyse(traj, config)
    conservation = conservation_summary(traj)

    n_t, n = series.S_N.shape
    t_col = np.repeat(traj.times, n)
    site_col = np.tile(np.arange(1, n + 1), n_t)
    paths = {
        "snapshots": out / "snapshots.csv",
        "observables": out / "observables.csv",
        "front": out / "front.csv",
        "report": out / "report.txt",
    }
    _write_csv(paths["snapshots"], "t,site,sx,sy,sz",
               [t_col, site_col, traj.spins.reshape(-1, 3)],
               ["%.17g", "%d", "%.17g", "%.17g", "%.17g"])
    _write_csv(paths["observables"], "t,site,one_minus_F,S_N",
               [t_col, site_col, series.one_minus_F.ravel(), series.S_N.ravel()],
               ["%.8g", "%d", "%.8g", "%.8g"])
    _write_csv(paths["front"], "t,x_left,x_right",
               [trace.times, trace.x_left, trace.x_right], "%.8g")
    paths["report"].write_text(_report_text(config, conservation, fits, master, notes))

    ok = conservation["max_norm_drift"] < NORM_TOL and conservation["energy_drift"] < ENERGY_TOL
    if not ok:
        notes.append("conservation check failed")
    return RunManifest(_config_echo(config), __version__, time.perf_counter() - start,
                       {k: str(p) for k, p in paths.items()}, conservation, fits, master,
                       ok, notes)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="dipolecone",
        description="Simulate a classical dipole chain and fit its light-cone front.")
    parser.add_argument("--config", type=Path, help="key=value config file")
    parser.add_argument("--out", type=Path, default=Path("dipolecone_out"), help="output directory")
    parser.add_argument("--preset", help="preset name (%s) or experiment (%s); overrides the config"
                        % (", ".join(p.value for p in Preset), ", ".join(EXPERIMENTS)))
    parser.add_argument("--quiet", action="store_true", help="only print errors")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s: %(message)s")

    try:
        opts = parse_options(args.config.read_text()) if args.config else {}
        if args.preset:
            if args.preset.lower() in EXPERIMENTS:
                opts.update(EXPERIMENTS[args.preset.lower()])
            else:
                opts["preset"] = _convert("preset", args.preset)
        config = SimConfig(**opts)
    except (ConfigError, OSError) as exc:
        log.error("%s", exc)
        return 2

    log.info("running %s with N=%d, t_end=%g", config.preset.value, config.n_sites, config.t_end)
    try:
        manifest = run_experiment(config, args.out)
    except IntegrationAborted as exc:
        log.error("%s", exc)
        return 3
    except ConfigError as exc:
        log.error("%s", exc)
        return 2
    if not args.quiet:
        print(Path(manifest.outputs["report"]).read_text(), end="")
        print(f"wall time {manifest.wall_time:.2f} s; files in {args.out}")
    return 0 if manifest.ok else 1


if __name__ == "__main__":
    sys.exit(main())
