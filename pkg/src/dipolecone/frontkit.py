"""Front detection on observable matrices and the two-regime front fits.

The front at time t is the outermost position, on each side of the
perturbed site, where the observable crosses a fixed contour level.
Early on its distance from the center grows as ``A t**beta``; later it
moves linearly, ``B + v_s t``.  If the two regimes join with matching
value and slope, ``B = 2/sqrt(27) * A**1.5 / sqrt(v_s)`` for beta = 1/3.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

NOISE_FLOOR = 1e-12
END_MARGIN = 3
MIN_FIT_POINTS = 10


class InsufficientData(ValueError):
    """Too few trace points inside a fit window."""


class EndContactError(ValueError):
    """A linear-fit window extends past the time the front reaches a chain end."""

    def __init__(self, contact_time, window):
        super().__init__(
            f"fit window {window} overlaps end contact: the front reaches the chain end "
            f"at t = {contact_time:.6g}"
        )
        self.contact_time = contact_time


@dataclass
class FrontTrace:
    """Left/right front positions (units of a, 1-indexed origin) per time."""

    times: np.ndarray
    x_left: np.ndarray
    x_right: np.ndarray
    center: float
    n_sites: int
    contour_level: float
    spacing: float = 1.0
    observable: str = "one_minus_F"

    def __len__(self):
        return len(self.times)

    def distance(self):
        """Mean distance of the two fronts from the center (one side if the other is missing)."""
        c = self.center * self.spacing
        d = np.vstack([self.x_right - c, c - self.x_left])
        out = np.full(len(self.times), np.nan)
        ok = np.isfinite(d).any(axis=0)
        out[ok] = np.nanmean(d[:, ok], axis=0)
        return out

    def contact_time(self, margin=END_MARGIN):
        """First time a front comes within ``margin`` sites of either chain end, else inf."""
        lo = (1 + margin) * self.spacing
        hi = (self.n_sites - margin) * self.spacing
        with np.errstate(invalid="ignore"):
            hit = (self.x_left <= lo) | (self.x_right >= hi)
        idx = np.nonzero(hit)[0]
        return float(self.times[idx[0]]) if len(idx) else np.inf


def _crossing(values, sites, level):
    """Outermost crossing along ``sites`` (ordered outward from the center)."""
    above = np.nonzero(values > level)[0]
    if len(above) == 0:
        return np.nan
    j = above[-1]
    if j == len(values) - 1:
        return float(sites[j])
    tiny = np.finfo(float).tiny
    hi = np.log(values[j])
    lo = np.log(max(values[j + 1], tiny))
    frac = (hi - np.log(level)) / (hi - lo)
    return float(sites[j] + frac * (sites[j + 1] - sites[j]))


def detect_front(series, contour_level, center=None, observable="one_minus_F",
                 noise_floor=NOISE_FLOOR):
    """Trace where ``observable`` crosses ``contour_level`` on each side of ``center``.

    Between the last site above the level and its outer neighbour the
    position is interpolated linearly in log(observable).  Times with no
    site above the level on either side are dropped.
    """
    if contour_level < noise_floor:
        raise ValueError(
            f"contour_level {contour_level:.3g} is below the noise floor {noise_floor:.1e}"
        )
    if len(series.times) == 0:
        raise ValueError("empty observable series")
    data = series.get(observable)
    center = series.center if center is None else center
    n = data.shape[1]
    sites = np.arange(1, n + 1, dtype=float)
    right = sites > center
    left = sites < center
    r_sites, l_sites = sites[right], sites[left][::-1]

    rows = []
    for t, row in zip(series.times, data):
        xr = _crossing(row[right], r_sites, contour_level)
        xl = _crossing(row[left][::-1], l_sites, contour_level)
        if np.isfinite(xr) or np.isfinite(xl):
            rows.append((t, xl * series.spacing, xr * series.spacing))
    arr = np.array(rows, dtype=float).reshape(-1, 3)
    return FrontTrace(arr[:, 0], arr[:, 1], arr[:, 2], float(center), n,
                      contour_level, series.spacing, observable)


def _in_window(trace, window):
    t = trace.times
    d = trace.distance()
    lo, hi = window
    hi = np.inf if hi is None else hi
    m = (t >= lo) & (t <= hi) & np.isfinite(d) & (t > 0)
    return t[m], d[m]


def fit_precursor(trace, window=(0.001, 0.1)):
    """Least-squares fit of log(distance) vs log(t): returns (A, beta, rms residual in a)."""
    t, d = _in_window(trace, window)
    m = d > 0
    t, d = t[m], d[m]
    if len(t) < MIN_FIT_POINTS:
        raise InsufficientData(
            f"precursor fit needs {MIN_FIT_POINTS} points in {window}, got {len(t)}"
        )
    beta, log_a = np.polyfit(np.log(t), np.log(d), 1)
    A = float(np.exp(log_a))
    resid = d - A * t ** beta
    return A, float(beta), float(np.sqrt(np.mean(resid ** 2)))


def fit_linear(trace, window=(0.15, None), end_margin=END_MARGIN):
    """Least-squares line distance = B + v_s t: returns (B, v_s, rms residual in a).

    Rejects windows that reach the time the front touches a chain end.
    """
    contact = trace.contact_time(end_margin)
    hi = np.inf if window[1] is None else window[1]
    t = trace.times
    if np.any((t >= max(window[0], contact)) & (t <= hi)):
        raise EndContactError(contact, window)
    t, d = _in_window(trace, window)
    if len(t) < MIN_FIT_POINTS:
        raise InsufficientData(
            f"linear fit needs {MIN_FIT_POINTS} points in {window}, got {len(t)}"
        )
    v_s, B = np.polyfit(t, d, 1)
    resid = d - (B + v_s * t)
    return float(B), float(v_s), float(np.sqrt(np.mean(resid ** 2)))


def predicted_B(A, v_s):
    """Intercept of the line tangent to ``A t**(1/3)`` with slope ``v_s``."""
    if A < 0 or v_s <= 0:
        raise ValueError("predicted_B needs A >= 0 and v_s > 0")
    return float(2.0 / np.sqrt(27.0) * A ** 1.5 / np.sqrt(v_s))


@dataclass
class FitReport:
    A: float
    beta: float
    B: float
    v_s: float
    B_predicted: float
    residual_rms_early: float
    residual_rms_linear: float
    v_s_stderr: float
    contour_level: float
    observable: str
    window_early: tuple
    window_linear: tuple
    contact_time: float

    @property
    def B_relative_error(self):
        return abs(self.B - self.B_predicted) / self.B_predicted

    def as_dict(self):
        return asdict(self)


def linear_window_before_contact(trace, window, end_margin=END_MARGIN):
    """Clip a linear-fit window to end strictly before the first end contact."""
    lo, hi = window
    hi = np.inf if hi is None else hi
    contact = trace.contact_time(end_margin)
    if np.isfinite(contact):
        before = trace.times[trace.times < contact]
        hi = min(hi, before[-1]) if len(before) else lo
    return (lo, float(hi))


def fit_report(trace, window_early=(0.001, 0.1), window_linear=(0.15, None),
               end_margin=END_MARGIN):
    """Both fits plus the predicted intercept, with the linear window clipped at end contact."""
    A, beta, r_early = fit_precursor(trace, window_early)
    window_linear = linear_window_before_contact(trace, window_linear, end_margin)
    B, v_s, r_lin = fit_linear(trace, window_linear, end_margin)
    t, _ = _in_window(trace, window_linear)
    stderr = r_lin * np.sqrt(len(t) / (len(t) - 2) / np.sum((t - t.mean()) ** 2))
    return FitReport(A, beta, B, v_s, predicted_B(A, v_s), r_early, r_lin, float(stderr),
                     trace.contour_level, trace.observable, tuple(window_early),
                     tuple(window_linear), trace.contact_time(end_margin))


@dataclass
class MasterPlot:
    """Per-site early-time slopes ``S_N ~ coefficient * t`` and their distance scaling."""

    sites: np.ndarray
    distances: np.ndarray
    coefficients: np.ndarray
    exponent: float
    prefactor: float
    excluded_sites: np.ndarray
    window: tuple

    def rescaled(self, series, observable="S_N"):
        """Observable divided by each site's coefficient; columns follow ``sites``."""
        data = series.get(observable)[:, self.sites - 1]
        return data / self.coefficients


def master_rescale(series, center=None, window=(0.0, 0.1), observable="S_N",
                   noise_floor=NOISE_FLOOR):
    """Fit ``S_N(x, t) = c(x) t`` per site, then ``c(x) ~ x**exponent``.

    Sites whose observable stays below ``noise_floor`` throughout the window
    (and the perturbed site itself) are excluded and listed.
    """
    center = series.center if center is None else center
    data = series.get(observable)
    t = series.times
    m = (t >= window[0]) & (t <= window[1])
    if m.sum() < 2:
        raise InsufficientData(f"master plot needs at least 2 snapshots in {window}")
    t, data = t[m], data[m]
    sites = np.arange(1, data.shape[1] + 1)
    dist = np.abs(sites - center) * series.spacing
    live = (data.max(axis=0) > noise_floor) & (dist > 0)
    coef = (t @ data) / (t @ t)
    live &= coef > 0
    if live.sum() < 2:
        raise InsufficientData("fewer than two sites above the noise floor")
    exponent, log_pref = np.polyfit(np.log(dist[live]), np.log(coef[live]), 1)
    return MasterPlot(sites[live], dist[live], coef[live], float(exponent),
                      float(np.exp(log_pref)), sites[~live], tuple(window))
