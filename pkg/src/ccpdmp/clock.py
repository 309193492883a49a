"""Exact event-time simulation for inhomogeneous Poisson processes.

Rates are piecewise linear in time; each segment carries its own intercept,
so the rate on a segment is ``a + b * (t - t_start)``.  The effective
intensity is the positive part ``max(0, .)``; integration and inversion
clip each segment at its internal zero crossing analytically instead of
subdividing the segment list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import EnvelopeViolationError

# Absolute residual target for |Lambda(tau) - E| on returned arrivals.
INVERSION_TOL = 1e-12


@dataclass(frozen=True)
class LinearSegment:
    """Rate a + b*(t - t_start) on [t_start, t_end)."""

    t_start: float
    t_end: float
    a: float
    b: float

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError(f"segment end {self.t_end} must exceed start {self.t_start}")
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("segment coefficients must be finite")

    def value(self, t: float) -> float:
        return self.a + self.b * (t - self.t_start)


@dataclass(frozen=True)
class PiecewiseLinearRate:
    """Contiguous linear segments starting at time 0."""

    segments: tuple[LinearSegment, ...]

    def __init__(self, segments: Sequence[LinearSegment]):
        segments = tuple(segments)
        if not segments:
            raise ValueError("at least one segment required")
        if segments[0].t_start != 0.0:
            raise ValueError("first segment must start at 0")
        for prev, cur in zip(segments, segments[1:]):
            if prev.t_end != cur.t_start:
                raise ValueError(
                    f"segments not contiguous at {prev.t_end} vs {cur.t_start}"
                )
        object.__setattr__(self, "segments", segments)

    @property
    def horizon(self) -> float:
        return self.segments[-1].t_end

    def value(self, t: float) -> float:
        """Raw (unclipped) rate at t."""
        for seg in self.segments:
            if t < seg.t_end:
                return seg.value(t)
        return self.segments[-1].value(t)


@dataclass(frozen=True)
class ClockOutcome:
    """Either an arrival strictly inside the window or expiry at its end."""

    time: float
    is_event: bool

    @classmethod
    def event(cls, tau: float) -> "ClockOutcome":
        return cls(time=tau, is_event=True)

    @classmethod
    def no_event(cls, horizon: float) -> "ClockOutcome":
        return cls(time=horizon, is_event=False)


def _segment_mass(a: float, b: float, u: float) -> float:
    """Integral of max(0, a + b*s) for s in [0, u]."""
    if u <= 0.0:
        return 0.0
    if b == 0.0:
        return a * u if a > 0.0 else 0.0
    uc = -a / b
    if b > 0.0:
        if a >= 0.0:
            return u * (a + 0.5 * b * u)
        if u <= uc:
            return 0.0
        w = u - uc
        return 0.5 * b * w * w
    # b < 0: decreasing rate
    if a <= 0.0:
        return 0.0
    ue = min(u, uc)
    return ue * (a + 0.5 * b * ue)


def _segment_invert(a: float, b: float, length: float, target: float) -> float:
    """Local time u with segment mass(u) == target, 0 < target < mass(length)."""
    if b == 0.0:
        return target / a
    if b > 0.0 and a < 0.0:
        return -a / b + math.sqrt(2.0 * target / b)
    disc = a * a + 2.0 * b * target
    if disc < 1e-12:
        # Near-tangent quadratic (b < 0, target close to the attainable
        # maximum): closed form is ill-conditioned, bisect instead.
        lo, hi = 0.0, length if b > 0.0 else min(length, -a / b)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if _segment_mass(a, b, mid) < target:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * max(1.0, hi):
                break
        return 0.5 * (lo + hi)
    return 2.0 * target / (a + math.sqrt(disc))


def integrated_rate(plr: PiecewiseLinearRate, t: float) -> float:
    """Cumulative intensity of max(0, rate) from 0 to t."""
    if t < 0.0 or t > plr.horizon:
        raise ValueError(f"time {t} outside rate domain [0, {plr.horizon}]")
    total = 0.0
    for seg in plr.segments:
        if t <= seg.t_start:
            break
        u = min(t, seg.t_end) - seg.t_start
        total += _segment_mass(seg.a, seg.b, u)
    return total


def first_arrival(plr: PiecewiseLinearRate, exp_draw: float) -> ClockOutcome:
    """First arrival time given unit-exponential draw E, or expiry.

    Returns Event(tau) with ``integrated_rate(plr, tau) == E`` (to within
    1e-9 absolute), or NoEvent(horizon) when the total mass never reaches E.
    """
    if exp_draw < 0.0:
        raise ValueError("exponential draw must be nonnegative")
    remaining = exp_draw
    for seg in plr.segments:
        length = seg.t_end - seg.t_start
        mass = _segment_mass(seg.a, seg.b, length)
        if mass > remaining:
            u = _segment_invert(seg.a, seg.b, length, remaining)
            tau = seg.t_start + u
            tau = _polish_arrival(plr, seg, tau, exp_draw)
            if tau >= plr.horizon:
                return ClockOutcome.no_event(plr.horizon)
            return ClockOutcome.event(tau)
        remaining -= mass
    return ClockOutcome.no_event(plr.horizon)


def _polish_arrival(
    plr: PiecewiseLinearRate, seg: LinearSegment, tau: float, exp_draw: float
) -> float:
    """Newton-correct tau so the global inverse property holds exactly."""
    lo = seg.t_start
    hi = seg.t_end
    for _ in range(6):
        resid = integrated_rate(plr, tau) - exp_draw
        if abs(resid) <= INVERSION_TOL:
            break
        rate = max(seg.value(tau), 0.0)
        if rate <= 0.0:
            break
        tau = min(max(tau - resid / rate, lo), hi)
    return tau


def first_arrival_draw(plr, rng) -> ClockOutcome:
    """Convenience wrapper drawing E = -log(U) from the supplied generator."""
    return first_arrival(plr, rng.exponential())


def superposition_first_arrival(arrivals: Sequence[ClockOutcome]) -> ClockOutcome:
    """Minimum of independent per-component arrivals (ties: lowest index)."""
    if not arrivals:
        raise ValueError("superposition over an empty arrival list")
    horizons = {o.time for o in arrivals if not o.is_event}
    if len(horizons) > 1:
        raise ValueError(f"mismatched horizons in superposition: {sorted(horizons)}")
    best = None
    for outcome in arrivals:
        if outcome.is_event and (best is None or outcome.time < best.time):
            best = outcome
    if best is not None:
        return best
    return arrivals[0]


def thinning_accept(
    target_value: float,
    proposal_value: float,
    unif_draw: float,
    *,
    abs_tol: float = 1e-8,
    rel_tol: float = 1e-10,
) -> bool:
    """Accept a proposed event with probability max(0, target)/proposal.

    Raises EnvelopeViolationError when the ratio exceeds 1 beyond tolerance,
    which indicates a broken decomposition rather than bad luck; ratios
    inside the tolerance band are clamped to 1.
    """
    if proposal_value <= 0.0:
        raise ValueError(f"proposal rate must be positive, got {proposal_value}")
    lam = max(0.0, target_value)
    if lam > proposal_value + abs_tol + rel_tol * proposal_value:
        raise EnvelopeViolationError(
            f"target rate {lam} exceeds proposal {proposal_value}; "
            "the dominating envelope is invalid"
        )
    ratio = min(1.0, lam / proposal_value)
    # a nonpositive target never accepts, even on a zero uniform draw
    return ratio > 0.0 and unif_draw <= ratio


def affine_first_arrival(a: float, b: float, exp_draw: float) -> float:
    """First arrival for rate max(0, a + b*t) on [0, inf); inf if never.

    Closed form used for rates known to be exactly affine for all time,
    where no finite look-ahead window is needed.
    """
    if exp_draw < 0.0:
        raise ValueError("exponential draw must be nonnegative")
    if b == 0.0:
        return exp_draw / a if a > 0.0 else math.inf
    if b > 0.0:
        if a >= 0.0:
            return 2.0 * exp_draw / (a + math.sqrt(a * a + 2.0 * b * exp_draw))
        return -a / b + math.sqrt(2.0 * exp_draw / b)
    if a <= 0.0:
        return math.inf
    disc = a * a + 2.0 * b * exp_draw
    if disc <= 0.0:
        return math.inf
    return 2.0 * exp_draw / (a + math.sqrt(disc))


def exp_rate_first_arrival(coef: float, growth: float, exp_draw: float) -> float:
    """First arrival for rate max(0, coef * e^(growth*t)) on [0, inf)."""
    if exp_draw < 0.0:
        raise ValueError("exponential draw must be nonnegative")
    if coef <= 0.0:
        return math.inf
    if growth == 0.0:
        return exp_draw / coef
    z = 1.0 + growth * exp_draw / coef
    if z <= 0.0:
        return math.inf
    return math.log(z) / growth


@dataclass(frozen=True)
class AffineClockTerm:
    """Closed-form clock for the rate component a + b*t."""

    a: float
    b: float

    def value(self, t: float) -> float:
        return self.a + self.b * t

    def first_arrival(self, exp_draw: float) -> float:
        return affine_first_arrival(self.a, self.b, exp_draw)

    def shifted(self, dt: float) -> "AffineClockTerm":
        return AffineClockTerm(a=self.a + self.b * dt, b=self.b)


@dataclass(frozen=True)
class ExpClockTerm:
    """Closed-form clock for the rate component coef * e^(growth*t)."""

    coef: float
    growth: float

    def value(self, t: float) -> float:
        return self.coef * math.exp(self.growth * t)

    def first_arrival(self, exp_draw: float) -> float:
        return exp_rate_first_arrival(self.coef, self.growth, exp_draw)

    def shifted(self, dt: float) -> "ExpClockTerm":
        return ExpClockTerm(coef=self.coef * math.exp(self.growth * dt), growth=self.growth)
