"""Post-processing of correlation traces.

Covers detection of entanglement-sudden-death intervals, beat-versus-
plain-oscillation classification with envelope and spectral estimates,
and half-life/decay summaries.  Traces are noiseless simulator output on
uniform grids, so simple local-extrema and windowed-DFT methods are
adequate; no noise-robust estimation is attempted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .exceptions import OscillationError

ESD_THRESHOLD = 1e-12

# modulation-depth thresholds separating a beat from plain oscillation;
# overridable per call
BEAT_DEPTH = 0.5
OSCILLATION_DEPTH = 0.2


@dataclass
class CorrelationTrace:
    """Named real-valued time series on a shared uniform grid.

    ``series`` maps column names (C, D, I, Q, gA2, gB2, ...) to arrays;
    ``meta`` carries the scenario parameters that produced the trace.
    """

    times: np.ndarray
    series: dict[str, np.ndarray]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        for name, col in self.series.items():
            col = np.asarray(col, dtype=float)
            if col.shape != self.times.shape:
                raise ValueError(f"column {name!r} length does not match the time grid")
            self.series[name] = col

    def column(self, name: str) -> np.ndarray:
        if name not in self.series:
            raise KeyError(f"trace has no column {name!r}; available: {sorted(self.series)}")
        return self.series[name]

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class BeatReport:
    """Summary of the amplitude modulation of one oscillating column."""

    envelope_minima_times: tuple[float, ...]
    modulation_depth: float
    carrier_freq: float
    envelope_freq: float
    verdict: str  # 'beat' | 'oscillation' | 'indeterminate'

    def as_text_block(self, prefix: str = "beat") -> list[str]:
        """Flat key-value lines for CSV metadata comments."""
        lines = [
            f"{prefix}.modulation_depth = {self.modulation_depth:.6g}",
            f"{prefix}.carrier_freq = {self.carrier_freq:.6g}",
            f"{prefix}.envelope_freq = {self.envelope_freq:.6g}",
            f"{prefix}.verdict = {self.verdict}",
            f"{prefix}.envelope_minima_count = {len(self.envelope_minima_times)}",
        ]
        if self.envelope_minima_times:
            times = ", ".join(f"{t:.6g}" for t in self.envelope_minima_times)
            lines.append(f"{prefix}.envelope_minima_times = {times}")
        return lines


@dataclass(frozen=True)
class DecaySummary:
    t_half: float
    final_value: float


def _interior_maxima(y: np.ndarray) -> np.ndarray:
    """Indices of strict-on-the-left local maxima, endpoints excluded."""
    return np.where((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]))[0] + 1


def detect_esd_intervals(trace: CorrelationTrace, column: str = "C", *,
                         threshold: float = ESD_THRESHOLD,
                         refine: Callable[[float], float] | None = None,
                         ) -> list[tuple[float, float]]:
    """Maximal time intervals where a column sits at (numerical) zero.

    Returns a list of (t_start, t_end) pairs.  When ``refine`` supplies
    the closed-form value of the column as a function of time, interval
    boundaries that fall between grid points are sharpened by bisection
    on it; otherwise the grid times are returned.
    """
    t = trace.times
    y = trace.column(column)
    dead = y <= threshold
    intervals: list[tuple[float, float]] = []
    i = 0
    n = len(t)
    while i < n:
        if not dead[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and dead[j + 1]:
            j += 1
        t_start, t_end = t[i], t[j]
        if refine is not None:
            if i > 0:
                t_start = _bisect_boundary(refine, t[i - 1], t[i], threshold)
            if j + 1 < n:
                t_end = _bisect_boundary(refine, t[j + 1], t[j], threshold)
        intervals.append((float(t_start), float(t_end)))
        i = j + 1
    return intervals


def _bisect_boundary(fun: Callable[[float], float], t_live: float, t_dead: float,
                     threshold: float, iters: int = 60) -> float:
    """Bisect between a live sample and a dead one; returns the dead-side edge."""
    if fun(t_live) <= threshold:
        return t_live  # the whole bracket is dead already
    for _ in range(iters):
        mid = 0.5 * (t_live + t_dead)
        if fun(mid) <= threshold:
            t_dead = mid
        else:
            t_live = mid
    return t_dead


def _spectral_peaks(t: np.ndarray, y: np.ndarray, min_freq: float | None,
                    ) -> list[tuple[float, float]]:
    """Interior local maxima of the Hann-windowed DFT magnitude, strongest first.

    Returns (angular frequency, magnitude) pairs; each frequency is
    refined by quadratic interpolation of the log magnitude around the
    peak bin.  Frequencies below ``min_freq`` (default: 8 bin widths,
    where the detrended baseline still leaks) are excluded.
    """
    n = len(y)
    dt = t[1] - t[0]
    detrended = y - np.mean(y)
    mag = np.abs(np.fft.rfft(detrended * np.hanning(n)))
    omegas = 2.0 * math.pi * np.fft.rfftfreq(n, dt)
    bin_width = omegas[1] - omegas[0]
    if min_freq is None:
        min_freq = 8.0 * bin_width

    idx = _interior_maxima(mag)
    idx = idx[omegas[idx] >= min_freq]
    idx = idx[np.argsort(mag[idx])[::-1]]

    peaks = []
    for k in idx:
        if mag[k] <= 0.0:
            continue
        with np.errstate(divide="ignore"):
            la, lb, lc = np.log(mag[k - 1: k + 2])
        denom = la - 2.0 * lb + lc
        shift = 0.5 * (la - lc) / denom if np.isfinite(denom) and denom != 0 else 0.0
        shift = float(np.clip(shift, -0.5, 0.5))
        peaks.append((float((k + shift) * bin_width), float(mag[k])))
    return peaks


def beat_analysis(trace: CorrelationTrace, column: str, *,
                  beat_depth: float = BEAT_DEPTH,
                  oscillation_depth: float = OSCILLATION_DEPTH,
                  min_freq: float | None = None) -> BeatReport:
    """Classify the oscillation of one column as beat or plain oscillation.

    The amplitude envelope comes from cubic interpolation through the
    local maxima and minima of the signal; interior minima of that
    envelope mark the beat nodes.  The modulation depth
    (env_max - env_min)/env_max is evaluated on the two-tone envelope
    implied by the two dominant spectral peaks P1 >= P2, i.e.
    2 P2/(P1 + P2): the correlation oscillations ride on a decaying
    baseline, and the spectral route is what stays invariant to that
    decay.  Carrier and envelope frequencies are the mean and half
    difference of the two peak frequencies.
    """
    t = trace.times
    y = trace.column(column)
    peaks = _interior_maxima(y)
    troughs = _interior_maxima(-y)
    if len(peaks) < 4 or len(troughs) < 4:
        raise OscillationError(
            f"insufficient oscillation in column {column!r}: "
            f"{len(peaks)} maxima / {len(troughs)} minima, need at least 4")

    upper = CubicSpline(t[peaks], y[peaks])
    lower = CubicSpline(t[troughs], y[troughs])
    lo = max(t[peaks][0], t[troughs][0])
    hi = min(t[peaks][-1], t[troughs][-1])
    window = t[(t >= lo) & (t <= hi)]
    amplitude = 0.5 * (upper(window) - lower(window))
    minima_idx = _interior_maxima(-amplitude)
    minima_times = tuple(float(x) for x in window[minima_idx])

    spec = _spectral_peaks(t, y, min_freq)
    if len(spec) >= 2:
        (f1, p1), (f2, p2) = spec[0], spec[1]
        depth = 2.0 * p2 / (p1 + p2)
        carrier = 0.5 * (f1 + f2)
        envelope = 0.5 * abs(f1 - f2)
    elif len(spec) == 1:
        f1, _p1 = spec[0]
        depth, carrier, envelope = 0.0, f1, 0.0
    else:
        depth, carrier, envelope = 0.0, 0.0, 0.0

    if depth > beat_depth:
        verdict = "beat"
    elif depth < oscillation_depth:
        verdict = "oscillation"
    else:
        verdict = "indeterminate"
    return BeatReport(envelope_minima_times=minima_times, modulation_depth=float(depth),
                      carrier_freq=float(carrier), envelope_freq=float(envelope),
                      verdict=verdict)


def dominant_frequency(times: Sequence[float], values: Sequence[float],
                       min_freq: float | None = None) -> float:
    """Angular frequency of the strongest spectral peak of a series."""
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    peaks = _spectral_peaks(t, y, min_freq)
    if not peaks:
        raise OscillationError("no spectral peak found above the low-frequency cut")
    return peaks[0][0]


def decay_summary(trace: CorrelationTrace, column: str) -> DecaySummary:
    """First time the column halves, and its final value.

    The crossing time interpolates linearly between samples; a column
    that never falls below half its initial value gets t_half = inf.
    """
    t = trace.times
    y = trace.column(column)
    target = 0.5 * y[0]
    below = np.where(y < target)[0]
    if len(below) == 0:
        return DecaySummary(t_half=math.inf, final_value=float(y[-1]))
    k = int(below[0])
    if k == 0:
        return DecaySummary(t_half=float(t[0]), final_value=float(y[-1]))
    frac = (y[k - 1] - target) / (y[k - 1] - y[k])
    t_half = t[k - 1] + frac * (t[k] - t[k - 1])
    return DecaySummary(t_half=float(t_half), final_value=float(y[-1]))
