"""Piecewise-linear upper envelopes from concave-convex rate decompositions.

A rate on a finite look-ahead window is written as the sum of a convex part
and a concave part.  Chords dominate the convex part, tangents dominate the
concave part, and their sum is a piecewise-linear rate that can be simulated
exactly.  Rejections tighten the envelope by inserting the rejected time as
a new abscissa, reusing the evaluations already paid for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .clock import (
    ClockOutcome,
    LinearSegment,
    PiecewiseLinearRate,
    first_arrival,
    thinning_accept,
)
from .errors import ConcavityViolationError, ThinningStallError

# Two abscissae (window endpoints) cost the same per unit time as any finer
# grid, so they are the default.
DEFAULT_ABSCISSAE = 2

_COINCIDENT_TOL = 1e-12
_TSTAR_SLACK = 1e-9


@dataclass(frozen=True)
class CCFunction:
    """Evaluator bundle for one rate decomposition on [0, horizon)."""

    eval_convex: Callable[[float], float]
    eval_concave: Callable[[float], float]
    eval_concave_deriv: Callable[[float], float]
    horizon: float

    def __post_init__(self):
        if not self.horizon > 0.0:
            raise ValueError("horizon must be positive")

    def total(self, t: float) -> float:
        return self.eval_convex(t) + self.eval_concave(t)


@dataclass(frozen=True)
class Abscissae:
    """Strictly increasing evaluation points with cached decompositions."""

    points: tuple[float, ...]
    fu: tuple[float, ...]
    fn: tuple[float, ...]
    fnd: tuple[float, ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("need at least two abscissae")
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("abscissae must be strictly increasing")
        cached = self.fu + self.fn + self.fnd
        if not all(math.isfinite(v) for v in cached):
            raise ValueError("cached evaluations must be finite")

    @classmethod
    def build(cls, cc: CCFunction, points: Sequence[float]) -> "Abscissae":
        pts = tuple(float(p) for p in points)
        return cls(
            points=pts,
            fu=tuple(cc.eval_convex(p) for p in pts),
            fn=tuple(cc.eval_concave(p) for p in pts),
            fnd=tuple(cc.eval_concave_deriv(p) for p in pts),
        )

    @classmethod
    def initial(cls, cc: CCFunction, n_points: int = DEFAULT_ABSCISSAE) -> "Abscissae":
        if n_points < 2:
            raise ValueError("need at least two abscissae")
        step = cc.horizon / (n_points - 1)
        points = [i * step for i in range(n_points - 1)] + [cc.horizon]
        return cls.build(cc, points)


@dataclass(frozen=True)
class Envelope:
    """Piecewise-linear dominating rate, in local time from ``t_offset``."""

    plr: PiecewiseLinearRate
    t_offset: float = 0.0

    def value(self, t: float) -> float:
        """Envelope at absolute window time t."""
        return self.plr.value(t - self.t_offset)

    @property
    def end(self) -> float:
        return self.t_offset + self.plr.horizon


@dataclass(frozen=True)
class ThinningResult:
    outcome: ClockOutcome
    events_proposed: int
    rejections: int
    rate_evaluations: int


def chord_bound(
    cc: CCFunction,
    t1: float,
    t2: float,
    f1: Optional[float] = None,
    f2: Optional[float] = None,
) -> LinearSegment:
    """Line through the convex part's evaluations at t1 and t2."""
    if not 0.0 <= t1 < t2 <= cc.horizon:
        raise ValueError(f"invalid chord interval [{t1}, {t2}]")
    if f1 is None:
        f1 = cc.eval_convex(t1)
    if f2 is None:
        f2 = cc.eval_convex(t2)
    if not (math.isfinite(f1) and math.isfinite(f2)):
        raise ValueError(f"non-finite convex evaluations {f1}, {f2} on [{t1}, {t2}]")
    slope = (f2 - f1) / (t2 - t1)
    return LinearSegment(t_start=t1, t_end=t2, a=f1, b=slope)


def tangent_bound(
    cc: CCFunction,
    t1: float,
    t2: float,
    fn1: Optional[float] = None,
    fnd1: Optional[float] = None,
    fn2: Optional[float] = None,
    fnd2: Optional[float] = None,
) -> list[LinearSegment]:
    """Tangent lines of the concave part, switching at their intersection.

    Returns one segment when the endpoint derivatives agree (the tangent is
    a single line), otherwise the left tangent up to the intersection point
    and the right tangent beyond it.
    """
    if not 0.0 <= t1 < t2 <= cc.horizon:
        raise ValueError(f"invalid tangent interval [{t1}, {t2}]")
    if fn1 is None:
        fn1 = cc.eval_concave(t1)
    if fnd1 is None:
        fnd1 = cc.eval_concave_deriv(t1)
    if fn2 is None:
        fn2 = cc.eval_concave(t2)
    if fnd2 is None:
        fnd2 = cc.eval_concave_deriv(t2)
    if not all(math.isfinite(v) for v in (fn1, fnd1, fn2, fnd2)):
        raise ValueError(f"non-finite concave evaluations on [{t1}, {t2}]")

    if abs(fnd1 - fnd2) <= 1e-12:
        return [LinearSegment(t_start=t1, t_end=t2, a=fn1, b=fnd1)]

    t_star = (fn2 - fnd2 * t2 - fn1 + fnd1 * t1) / (fnd1 - fnd2)
    slack = _TSTAR_SLACK * max(1.0, abs(t2))
    if t_star < t1 - slack or t_star > t2 + slack:
        raise ConcavityViolationError(
            f"tangent intersection {t_star} outside [{t1}, {t2}]; "
            "concave part is not concave on this interval"
        )
    t_star = min(max(t_star, t1), t2)

    segments = []
    if t_star > t1:
        segments.append(LinearSegment(t_start=t1, t_end=t_star, a=fn1, b=fnd1))
    if t_star < t2:
        a_right = fn2 + fnd2 * (t_star - t2)
        segments.append(LinearSegment(t_start=t_star, t_end=t2, a=a_right, b=fnd2))
    return segments


def build_envelope(cc: CCFunction, abscissae: Abscissae) -> Envelope:
    """Sum of chord and tangent bounds over consecutive abscissae."""
    t0 = abscissae.points[0]
    pieces: list[LinearSegment] = []
    for i in range(len(abscissae.points) - 1):
        t1, t2 = abscissae.points[i], abscissae.points[i + 1]
        chord = chord_bound(cc, t1, t2, f1=abscissae.fu[i], f2=abscissae.fu[i + 1])
        tangents = tangent_bound(
            cc,
            t1,
            t2,
            fn1=abscissae.fn[i],
            fnd1=abscissae.fnd[i],
            fn2=abscissae.fn[i + 1],
            fnd2=abscissae.fnd[i + 1],
        )
        for tan in tangents:
            start, end = tan.t_start, tan.t_end
            a = chord.value(start) + tan.a
            b = chord.b + tan.b
            # adjacent pieces share the exact same endpoint floats, so the
            # local segments stay exactly contiguous
            pieces.append(
                LinearSegment(t_start=start - t0, t_end=end - t0, a=a, b=b)
            )
    return Envelope(plr=PiecewiseLinearRate(pieces), t_offset=t0)


def refine(
    cc: CCFunction,
    abscissae: Abscissae,
    t_rej: float,
    fu_rej: Optional[float] = None,
    fn_rej: Optional[float] = None,
) -> Abscissae:
    """Restart the abscissae at a rejected proposal time.

    Points at or before the rejection are dropped; the rejection time becomes
    the new left endpoint, reusing the evaluations from the acceptance test
    and adding one derivative evaluation.
    """
    points = abscissae.points
    if not points[0] < t_rej < points[-1]:
        raise ValueError(f"refinement time {t_rej} outside ({points[0]}, {points[-1]})")
    for i, p in enumerate(points):
        if abs(p - t_rej) <= _COINCIDENT_TOL:
            if i == len(points) - 1:
                i -= 1  # keep a valid two-point window
            return Abscissae(
                points=points[i:],
                fu=abscissae.fu[i:],
                fn=abscissae.fn[i:],
                fnd=abscissae.fnd[i:],
            )
    keep = next(i for i, p in enumerate(points) if p > t_rej)
    if fu_rej is None:
        fu_rej = cc.eval_convex(t_rej)
    if fn_rej is None:
        fn_rej = cc.eval_concave(t_rej)
    fnd_rej = cc.eval_concave_deriv(t_rej)
    return Abscissae(
        points=(t_rej,) + points[keep:],
        fu=(fu_rej,) + abscissae.fu[keep:],
        fn=(fn_rej,) + abscissae.fn[keep:],
        fnd=(fnd_rej,) + abscissae.fnd[keep:],
    )


def cc_first_event(
    cc: CCFunction,
    abscissae: Optional[Abscissae] = None,
    rng=None,
    max_iters: int = 1000,
    target: Optional[Callable[[float], float]] = None,
) -> ThinningResult:
    """Simulate the first event of max(0, f) on the window by adaptive thinning.

    Proposals come from the current envelope; each rejection refines the
    envelope at the rejected time and the loop continues on the remaining
    window.  Expiry of the window is reported as NoEvent so the caller can
    advance the process and restart.  ``target`` overrides the acceptance
    rate when the decomposition dominates the true rate instead of equalling
    it (polynomial upper bounds).
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    if rng is None:
        raise ValueError("an explicit random generator is required")
    if abscissae is None:
        abscissae = Abscissae.initial(cc)

    proposed = 0
    rejections = 0
    evaluations = len(abscissae.points)
    envelope = build_envelope(cc, abscissae)
    for _ in range(max_iters):
        arrival = first_arrival(envelope.plr, rng.exponential())
        if not arrival.is_event:
            return ThinningResult(
                outcome=ClockOutcome.no_event(cc.horizon),
                events_proposed=proposed,
                rejections=rejections,
                rate_evaluations=evaluations,
            )
        tau = envelope.t_offset + arrival.time
        proposed += 1
        fu_t = cc.eval_convex(tau)
        fn_t = cc.eval_concave(tau)
        evaluations += 1
        target_value = fu_t + fn_t if target is None else target(tau)
        if thinning_accept(target_value, envelope.value(tau), rng.uniform()):
            return ThinningResult(
                outcome=ClockOutcome.event(tau),
                events_proposed=proposed,
                rejections=rejections,
                rate_evaluations=evaluations,
            )
        rejections += 1
        abscissae = refine(cc, abscissae, tau, fu_rej=fu_t, fn_rej=fn_t)
        envelope = build_envelope(cc, abscissae)
    raise ThinningStallError(
        f"no accepted event after {max_iters} thinning iterations",
        envelope=envelope,
    )


def sum_cc(parts: Sequence[CCFunction]) -> CCFunction:
    """Sum of decompositions; valid because each class is closed under sums."""
    if not parts:
        raise ValueError("cannot sum an empty list of decompositions")
    horizon = parts[0].horizon
    if any(p.horizon != horizon for p in parts):
        raise ValueError("summed decompositions must share one horizon")
    if len(parts) == 1:
        return parts[0]
    parts = tuple(parts)
    return CCFunction(
        eval_convex=lambda t: sum(p.eval_convex(t) for p in parts),
        eval_concave=lambda t: sum(p.eval_concave(t) for p in parts),
        eval_concave_deriv=lambda t: sum(p.eval_concave_deriv(t) for p in parts),
        horizon=horizon,
    )
