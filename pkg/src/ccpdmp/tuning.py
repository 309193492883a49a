"""Horizon adaptation, efficiency accounting, and trajectory estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def nearest_rank_percentile(values, q: float) -> float:
    """q-th percentile by nearest rank on the sorted values."""
    if not 0.0 < q <= 100.0:
        raise ValueError("percentile must lie in (0, 100]")
    ordered = np.sort(np.asarray(values, dtype=float))
    rank = max(1, math.ceil(q / 100.0 * ordered.size))
    return float(ordered[rank - 1])


class AdaptiveHorizon:
    """Look-ahead window tracking a percentile of past event gaps.

    Accepted inter-event durations are pushed into a bounded buffer; after
    every ``window`` pushes the horizon resets to the ``q``-th nearest-rank
    percentile of the buffer.  Adapting the window changes only how often
    proposals are wasted, never the sampled distribution, so it can run
    throughout a simulation.
    """

    def __init__(self, tau_max: float = 1.0, percentile: float = 80.0, window: int = 100):
        if tau_max <= 0.0:
            raise ValueError("initial horizon must be positive")
        if window < 1:
            raise ValueError("update window must be at least 1")
        if not 0.0 < percentile <= 100.0:
            raise ValueError("percentile must lie in (0, 100]")
        self.percentile = percentile
        self.window = window
        self._tau_max = tau_max
        self._buffer: list[float] = []
        self._since_update = 0
        self.history: list[float] = [tau_max]

    @property
    def tau_max(self) -> float:
        return self._tau_max

    def push(self, duration: float) -> None:
        if duration <= 0.0:
            raise ValueError("event durations must be positive")
        self._buffer.append(duration)
        if len(self._buffer) > self.window:
            self._buffer.pop(0)
        self._since_update += 1
        if self._since_update >= self.window:
            self._tau_max = nearest_rank_percentile(self._buffer, self.percentile)
            self.history.append(self._tau_max)
            self._since_update = 0


def update_horizon(ah: AdaptiveHorizon, new_duration: float) -> AdaptiveHorizon:
    """Push one accepted duration; returns the same tracker for chaining."""
    ah.push(new_duration)
    return ah


@dataclass
class EfficiencyCounter:
    events: int = 0
    shadow_events: int = 0

    def efficiency(self) -> float:
        return efficiency(self)


def efficiency(counter: EfficiencyCounter) -> float:
    """Fraction of iterations that produced an event."""
    total = counter.events + counter.shadow_events
    if total <= 0:
        raise ValueError("efficiency undefined without iterations")
    return counter.events / total


def discretize(skeleton, m_samples: int) -> np.ndarray:
    """Positions at m equally spaced times along the recorded path.

    Samples sit at t_first + j * (t_last - t_first) / m for j = 1..m, found
    by linear interpolation inside the piece containing each time.
    """
    times = skeleton.times
    if times.size < 2:
        raise ValueError("need at least two recorded states to discretise")
    if m_samples < 1:
        raise ValueError("need at least one sample")
    span = times[-1] - times[0]
    if span <= 0.0:
        raise ValueError("skeleton spans no time")
    step = span / m_samples
    sample_times = times[0] + step * np.arange(1, m_samples + 1)
    idx = np.clip(np.searchsorted(times, sample_times, side="right") - 1, 0, times.size - 1)
    dt = sample_times - times[idx]
    return skeleton.positions[idx] + dt[:, None] * skeleton.velocities[idx]


def path_integral_mean(skeleton, kind: str = "coordinate", index: int = 0) -> float:
    """Time average of a coordinate or its square along the exact path.

    Linear dynamics make both integrals closed form on each inter-event
    piece, so no discretisation error enters.
    """
    times = skeleton.times
    if times.size < 2 or times[-1] <= times[0]:
        raise ValueError("skeleton spans no time")
    dt = np.diff(times)
    th = skeleton.positions[:-1, index]
    vel = skeleton.velocities[:-1, index]
    if kind == "coordinate":
        piece = th * dt + 0.5 * vel * dt**2
    elif kind == "coordinate_square":
        piece = th**2 * dt + th * vel * dt**2 + vel**2 * dt**3 / 3.0
    else:
        raise ValueError(f"unsupported integrand {kind!r}")
    return float(np.sum(piece) / (times[-1] - times[0]))


def ess(samples) -> float:
    """Effective sample size from the initial positive autocorrelation run.

    N / (1 + 2 sum of leading positive empirical autocorrelations), with the
    sum truncated at the first nonpositive lag.
    """
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 10:
        raise ValueError("need at least 10 samples")
    x = x - x.mean()
    variance = float(x @ x) / n
    if variance <= 0.0 or not math.isfinite(variance):
        raise ValueError("constant series has no effective sample size")
    nfft = 1 << (2 * n - 1).bit_length()
    spec = np.fft.rfft(x, nfft)
    acov = np.fft.irfft(spec * np.conj(spec), nfft)[:n].real / n
    rho = acov / acov[0]
    tail = 0.0
    for k in range(1, n):
        if rho[k] <= 0.0:
            break
        tail += rho[k]
    return n / (1.0 + 2.0 * tail)
