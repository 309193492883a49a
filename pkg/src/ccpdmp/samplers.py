"""PDMP state evolution with adaptive-thinning event clocks.

One event-driven core serves every sampler here.  Coordinates are grouped
into factors, each factor owns a Poisson clock simulated by concave-convex
thinning on a finite look-ahead window (or in closed form when its rate is
exactly affine), and a priority queue holds one pending record per factor.
An accepted proposal applies the factor's velocity kernel and re-simulates
only the factors whose rates read a changed coordinate; a window expiry
re-simulates just the expiring factor from its advanced position.

Specialisations: every factor a single coordinate with the flip kernel
gives the Zig-Zag sampler; one all-coordinates factor with the reflection
kernel plus a constant-rate velocity refresh gives the global Bouncy
Particle Sampler; anything between is a local sampler over a partition.
"""

from __future__ import annotations

import heapq
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .clock import (
    ClockOutcome,
    affine_first_arrival,
    first_arrival,
    thinning_accept,
)
from .envelope import Abscissae, CCFunction, ThinningResult, build_envelope, refine
from .errors import ThinningStallError
from .polyrate import Polynomial, poly_to_cc
from .tuning import AdaptiveHorizon, EfficiencyCounter, efficiency

logger = logging.getLogger(__name__)

_PROPOSAL, _EXPIRY, _SURE, _NEVER = range(4)

VELOCITY_SPACES = ("gaussian", "unit_sphere", "zigzag")


# ---------------------------------------------------------------------------
# State, skeleton, factorisation
# ---------------------------------------------------------------------------


@dataclass
class PDMPState:
    t: float
    theta: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        if self.theta.shape != self.v.shape or self.theta.ndim != 1:
            raise ValueError("position and velocity must be 1-d and equal length")
        if not (np.all(np.isfinite(self.theta)) and np.all(np.isfinite(self.v))):
            raise ValueError("state entries must be finite")


@dataclass
class Skeleton:
    """Recorded event states plus run counters.

    Rows cover the initial state and every velocity change (rate events,
    refreshes, boundary reflections); positions between rows follow the
    linear flow.  ``events`` counts rate events plus refreshes; boundary
    reflections are recorded but counted separately.
    """

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    events: int
    shadow_events: int
    rate_evaluations: int
    resimulations: int
    refreshes: int
    boundary_reflections: int
    horizons_used: tuple[float, ...]
    factor_events: np.ndarray
    factor_shadows: np.ndarray

    def efficiency(self) -> float:
        return efficiency(EfficiencyCounter(self.events, self.shadow_events))

    @property
    def total_time(self) -> float:
        return float(self.times[-1] - self.times[0])


@dataclass(frozen=True)
class Factorisation:
    """Partition of coordinates into factors plus invalidation neighbours."""

    partition: tuple[tuple[int, ...], ...]
    neighbours: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for coords in self.partition:
            if not coords:
                raise ValueError("empty factor")
            if seen.intersection(coords):
                raise ValueError("factors must be disjoint")
            seen.update(coords)
        if seen != set(range(len(seen))):
            raise ValueError("factors must cover coordinates 0..p-1")
        if len(self.neighbours) != len(self.partition):
            raise ValueError("one neighbour set per factor required")
        for f, neigh in enumerate(self.neighbours):
            if f not in neigh:
                raise ValueError(f"factor {f} must invalidate itself")

    @property
    def n_factors(self) -> int:
        return len(self.partition)

    @property
    def dim(self) -> int:
        return sum(len(c) for c in self.partition)


def singleton_partition(p: int) -> tuple[tuple[int, ...], ...]:
    return tuple((k,) for k in range(p))


def block_partition(p: int, block: int) -> tuple[tuple[int, ...], ...]:
    if block < 1:
        raise ValueError("block size must be positive")
    return tuple(
        tuple(range(lo, min(lo + block, p))) for lo in range(0, p, block)
    )


def neighbours_from_reads(
    partition: Sequence[Sequence[int]], reads: Sequence[frozenset]
) -> tuple[tuple[int, ...], ...]:
    """Factors to re-simulate after each factor's event.

    Factor m must be re-drawn when its rate reads any coordinate whose
    velocity changed, i.e. any coordinate of the triggering factor; the
    triggering factor always re-draws itself.
    """
    factor_of = {}
    for f, coords in enumerate(partition):
        for k in coords:
            factor_of[k] = f
    factor_reads = [
        frozenset().union(*(reads[k] for k in coords)) for coords in partition
    ]
    reading: dict[int, set[int]] = {}
    for m, fr in enumerate(factor_reads):
        for k in fr:
            reading.setdefault(k, set()).add(m)
    neighbours = []
    for f, coords in enumerate(partition):
        n = {f}
        for k in coords:
            n.update(reading.get(k, ()))
        neighbours.append(tuple(sorted(n)))
    return tuple(neighbours)


def make_factorisation(model, partition: Sequence[Sequence[int]]) -> Factorisation:
    partition = tuple(tuple(sorted(c)) for c in partition)
    return Factorisation(
        partition=partition,
        neighbours=neighbours_from_reads(partition, model.reads),
    )


# ---------------------------------------------------------------------------
# Velocity kernels and boundary handling
# ---------------------------------------------------------------------------


def flip(v: np.ndarray, i: int) -> np.ndarray:
    """Negate one velocity component."""
    if not 0 <= i < v.shape[0]:
        raise IndexError(f"coordinate {i} out of range")
    out = v.copy()
    out[i] = -out[i]
    return out


def reflect_full(v: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Reflect the velocity off the hyperplane orthogonal to the gradient."""
    norm2 = float(grad @ grad)
    if norm2 <= 0.0:
        raise ValueError("degenerate reflection: zero gradient")
    return v - (2.0 * float(v @ grad) / norm2) * grad


def reflect_subset(v: np.ndarray, grad: np.ndarray, coords) -> np.ndarray:
    """Reflect only the sub-vector indexed by coords; others unchanged."""
    c = np.asarray(sorted(coords), dtype=int)
    out = v.copy()
    out[c] = reflect_full(v[c], grad[c])
    return out


def refresh_velocity(rng, p: int, space: str = "gaussian") -> np.ndarray:
    """Draw a fresh velocity from the chosen velocity distribution."""
    if space == "gaussian":
        return rng.standard_normal(p)
    if space == "unit_sphere":
        raw = rng.standard_normal(p)
        return raw / np.linalg.norm(raw)
    if space == "zigzag":
        return rng.integers(0, 2, size=p) * 2.0 - 1.0
    raise ValueError(f"unknown velocity space {space!r}")


def boundary_hit_time(state: PDMPState, lower_bounds) -> Optional[tuple[float, int]]:
    """Earliest time a coordinate reaches its lower bound, with its index."""
    if lower_bounds is None:
        return None
    bounds = np.asarray(lower_bounds, dtype=float)
    finite = np.isfinite(bounds)
    if np.any(state.theta[finite] <= bounds[finite]):
        raise ValueError("state must be strictly inside the domain")
    approaching = finite & (state.v < 0.0)
    if not approaching.any():
        return None
    gaps = (state.theta[approaching] - bounds[approaching]) / -state.v[approaching]
    order = np.flatnonzero(approaching)
    j = int(np.argmin(gaps))
    return float(gaps[j]), int(order[j])


# ---------------------------------------------------------------------------
# Tuning knobs
# ---------------------------------------------------------------------------


@dataclass
class TuningParams:
    """Runtime knobs for the thinning machinery.

    ``tau_max`` is the look-ahead window; with ``adaptive`` set it tracks the
    ``percentile``-th nearest-rank percentile of recent inter-event gaps,
    refreshed every ``window`` accepted events.  ``exact_affine_shortcut``
    lets exactly-affine factor rates skip the windowed envelope entirely and
    invert their clocks in closed form.
    """

    tau_max: float = 1.0
    adaptive: bool = False
    percentile: float = 80.0
    window: int = 100
    n_abscissae: int = 2
    max_thinning_iters: int = 1000
    refresh_rate: float = 0.0
    velocity_space: str = "gaussian"
    exact_affine_shortcut: bool = True

    def __post_init__(self):
        if self.tau_max <= 0.0:
            raise ValueError("tau_max must be positive")
        if self.velocity_space not in VELOCITY_SPACES:
            raise ValueError(f"velocity space must be one of {VELOCITY_SPACES}")
        if self.n_abscissae < 2:
            raise ValueError("need at least two abscissae")


# ---------------------------------------------------------------------------
# Event-driven core
# ---------------------------------------------------------------------------


class _FactorClock:
    __slots__ = (
        "coords",
        "window_base",
        "chain_base",
        "cc",
        "abscissae",
        "envelope",
        "target",
        "pending_time",
        "pending_kind",
        "window_rejections",
    )

    def __init__(self, coords: np.ndarray):
        self.coords = coords
        self.window_base = 0.0
        # start of the current window chain: reset when the clock restarts
        # because state it reads changed, carried across own expiries
        self.chain_base = 0.0
        self.cc = None
        self.abscissae = None
        self.envelope = None
        self.target = None
        self.pending_time = math.inf
        self.pending_kind = _NEVER
        self.window_rejections = 0


class _Runner:
    def __init__(
        self,
        model,
        factorisation: Factorisation,
        kernel: str,
        tuning: TuningParams,
        rng,
        state: PDMPState,
        refresh_rate: float,
        trace: Optional[list],
    ):
        if kernel not in ("flip", "reflect"):
            raise ValueError(f"unknown kernel {kernel!r}")
        if factorisation.dim != model.dim:
            raise ValueError("factorisation does not match model dimension")
        if refresh_rate < 0.0:
            raise ValueError("refresh rate must be nonnegative")
        self.model = model
        self.fact = factorisation
        self.kernel = kernel
        self.tuning = tuning
        self.rng = rng
        self.trace = trace
        self.p = model.dim

        self.t = state.t
        self.theta = state.theta.copy()
        self.v = state.v.copy()

        self.horizon = (
            AdaptiveHorizon(tuning.tau_max, tuning.percentile, tuning.window)
            if tuning.adaptive
            else None
        )
        self.refresh_rate = refresh_rate
        self.refresh_next = (
            self.t + self.rng.exponential() / refresh_rate
            if refresh_rate > 0.0
            else math.inf
        )

        self.factor_coords = [np.asarray(c, dtype=int) for c in factorisation.partition]
        factor_of = np.empty(self.p, dtype=int)
        for f, coords in enumerate(factorisation.partition):
            for k in coords:
                factor_of[k] = f
        reading: dict[int, set[int]] = {}
        factor_reads = [
            frozenset().union(*(model.reads[k] for k in coords))
            for coords in factorisation.partition
        ]
        for m, fr in enumerate(factor_reads):
            for k in fr:
                reading.setdefault(k, set()).add(m)
        self.resim_for_coord = [
            tuple(sorted(reading.get(k, set()) | {int(factor_of[k])}))
            for k in range(self.p)
        ]

        self.lower = model.lower_bounds
        if self.lower is not None and boundary_hit_time(state, self.lower) is None:
            pass  # validates strict interiority as a side effect
        self.boundary_time = math.inf
        self.boundary_coord = -1

        n_factors = factorisation.n_factors
        self.clocks = [_FactorClock(c) for c in self.factor_coords]
        self.seq = [0] * n_factors
        self.heap: list[tuple[float, int, int]] = []

        self.events = 0
        self.shadow_events = 0
        self.rate_evaluations = 0
        self.resimulations = 0
        self.refreshes = 0
        self.boundary_reflections = 0
        self.factor_events = np.zeros(n_factors, dtype=int)
        self.factor_shadows = np.zeros(n_factors, dtype=int)

        self.times = [self.t]
        self.positions = [self.theta.copy()]
        self.velocities = [self.v.copy()]
        self.last_event_time = self.t

        self._recompute_boundary()
        for f in range(n_factors):
            self._resimulate(f, self.t)

    # -- window management ---------------------------------------------------

    def _tau_max(self) -> float:
        return self.horizon.tau_max if self.horizon is not None else self.tuning.tau_max

    def _window_horizon(self, t_from: float) -> float:
        tau = self._tau_max()
        if self.boundary_time < math.inf:
            tau = min(tau, self.boundary_time - t_from)
        return max(tau, 1e-12)

    def _position_at(self, t_abs: float) -> np.ndarray:
        return self.theta + (t_abs - self.t) * self.v

    def _push(self, f: int):
        self.seq[f] += 1
        heapq.heappush(self.heap, (self.clocks[f].pending_time, f, self.seq[f]))

    def _resimulate(self, f: int, t_from: float, continue_chain: bool = False):
        clock = self.clocks[f]
        self.resimulations += 1
        if self.trace is not None:
            self.trace.append(("resim", f, t_from))
        theta_now = self._position_at(t_from)
        horizon = self._window_horizon(t_from)
        rate = self.model.factor_rate(theta_now, self.v, clock.coords, horizon)
        clock.window_base = t_from
        if not continue_chain:
            clock.chain_base = t_from
        clock.window_rejections = 0

        if isinstance(rate, Polynomial):
            if (
                self.model.exact_rates
                and rate.is_affine()
                and self.tuning.exact_affine_shortcut
            ):
                coeffs = rate.coeffs
                slope = coeffs[1] if len(coeffs) > 1 else 0.0
                tau = affine_first_arrival(coeffs[0], slope, self.rng.exponential())
                clock.cc = None
                clock.target = None
                if math.isfinite(tau):
                    clock.pending_time = t_from + tau
                    clock.pending_kind = _SURE
                else:
                    clock.pending_time = math.inf
                    clock.pending_kind = _NEVER
                self._push(f)
                return
            clock.cc = poly_to_cc(rate, horizon)
            clock.target = (
                None
                if self.model.exact_rates
                else self.model.factor_target(theta_now, self.v, clock.coords)
            )
        else:
            clock.cc = rate
            clock.target = None

        clock.abscissae = Abscissae.initial(clock.cc, self.tuning.n_abscissae)
        self.rate_evaluations += self.tuning.n_abscissae
        clock.envelope = build_envelope(clock.cc, clock.abscissae)
        self._draw_pending(f)

    def _draw_pending(self, f: int):
        clock = self.clocks[f]
        arrival = first_arrival(clock.envelope.plr, self.rng.exponential())
        if arrival.is_event:
            clock.pending_time = (
                clock.window_base + clock.envelope.t_offset + arrival.time
            )
            clock.pending_kind = _PROPOSAL
        else:
            clock.pending_time = clock.window_base + clock.cc.horizon
            clock.pending_kind = _EXPIRY
        self._push(f)

    def _peek(self) -> float:
        while self.heap:
            t_head, f, seq = self.heap[0]
            if seq == self.seq[f]:
                return t_head
            heapq.heappop(self.heap)
        return math.inf

    # -- transitions -----------------------------------------------------------

    def _record_row(self):
        self.times.append(self.t)
        self.positions.append(self.theta.copy())
        self.velocities.append(self.v.copy())

    def _advance_to(self, t_abs: float):
        dt = t_abs - self.t
        if dt != 0.0:
            self.theta += dt * self.v
            self.t = t_abs

    def _resim_set(self, factors: Sequence[int], t_abs: float):
        for g in factors:
            self._resimulate(g, t_abs)

    def _recompute_boundary(self):
        if self.lower is None:
            self.boundary_time = math.inf
            return
        bounds = np.asarray(self.lower, dtype=float)
        approaching = np.isfinite(bounds) & (self.v < 0.0)
        if not approaching.any():
            self.boundary_time = math.inf
            return
        gaps = (self.theta[approaching] - bounds[approaching]) / -self.v[approaching]
        idx = np.flatnonzero(approaching)
        j = int(np.argmin(gaps))
        t_hit = self.t + float(gaps[j])
        # reflect strictly before the wall so rate evaluators stay finite
        self.boundary_time = max(t_hit - 1e-9 * max(1.0, abs(t_hit)), self.t)
        self.boundary_coord = int(idx[j])

    def _apply_event(self, f: int, t_abs: float):
        # the accepted clock's run length since its chain restarted is the
        # "simulated event time" the adaptive horizon tracks
        duration = t_abs - self.clocks[f].chain_base
        self._advance_to(t_abs)
        coords = self.factor_coords[f]
        if self.kernel == "flip":
            self.v[coords] = -self.v[coords]
        else:
            grad = self.model.grad(self.theta)
            sub = grad[coords]
            norm2 = float(sub @ sub)
            if norm2 <= 0.0:
                logger.warning(
                    "zero gradient at reflection (t=%g); falling back to a full "
                    "velocity refresh",
                    t_abs,
                )
                self.v = refresh_velocity(self.rng, self.p, self.tuning.velocity_space)
            else:
                vc = self.v[coords]
                self.v[coords] = vc - (2.0 * float(vc @ sub) / norm2) * sub
        self._record_row()
        self.events += 1
        self.factor_events[f] += 1
        if self.trace is not None:
            self.trace.append(("event", f, t_abs))
        self.last_event_time = t_abs
        if self.horizon is not None and duration > 0.0:
            self.horizon.push(duration)
        self._recompute_boundary()
        self._resim_set(self.fact.neighbours[f], t_abs)

    def _handle_refresh(self):
        t_abs = self.refresh_next
        self._advance_to(t_abs)
        self.v = refresh_velocity(self.rng, self.p, self.tuning.velocity_space)
        self._record_row()
        self.events += 1
        self.refreshes += 1
        if self.trace is not None:
            self.trace.append(("refresh", -1, t_abs))
        self.last_event_time = t_abs
        self.refresh_next = t_abs + self.rng.exponential() / self.refresh_rate
        self._recompute_boundary()
        self._resim_set(range(self.fact.n_factors), t_abs)

    def _handle_boundary(self):
        t_abs = self.boundary_time
        i = self.boundary_coord
        self._advance_to(t_abs)
        self.v[i] = -self.v[i]
        self._record_row()
        self.boundary_reflections += 1
        if self.trace is not None:
            self.trace.append(("boundary", i, t_abs))
        self._recompute_boundary()
        self._resim_set(self.resim_for_coord[i], t_abs)

    def _handle_proposal(self, f: int):
        clock = self.clocks[f]
        t_abs = clock.pending_time
        if clock.pending_kind == _SURE:
            self._apply_event(f, t_abs)
            return
        s = t_abs - clock.window_base
        fu = clock.cc.eval_convex(s)
        fn = clock.cc.eval_concave(s)
        self.rate_evaluations += 1
        target_value = fu + fn if clock.target is None else clock.target(s)
        proposal_value = clock.envelope.value(s)
        if thinning_accept(target_value, proposal_value, self.rng.uniform()):
            self._apply_event(f, t_abs)
            return
        self.shadow_events += 1
        self.factor_shadows[f] += 1
        clock.window_rejections += 1
        if self.trace is not None:
            self.trace.append(("reject", f, t_abs))
        if clock.window_rejections > self.tuning.max_thinning_iters:
            raise ThinningStallError(
                f"factor {f} exceeded {self.tuning.max_thinning_iters} rejections "
                f"in one window starting at t={clock.window_base:g}",
                envelope=clock.envelope,
            )
        clock.abscissae = refine(clock.cc, clock.abscissae, s, fu_rej=fu, fn_rej=fn)
        clock.envelope = build_envelope(clock.cc, clock.abscissae)
        self._draw_pending(f)

    def _handle_expiry(self, f: int):
        """Advance the expiring clock(s) by their window and restart thinning.

        Clocks rebuilt together share window endpoints, so in densely coupled
        models every factor expires at the same instant; that joint expiry is
        a single pass of the sampler over an eventless window and counts as
        one shadow event, attributed to the lowest factor id.
        """
        t_abs = self.clocks[f].pending_time
        batch = [f]
        while self.heap:
            t_head, g, seq = self.heap[0]
            if (
                t_head == t_abs
                and seq == self.seq[g]
                and self.clocks[g].pending_kind == _EXPIRY
            ):
                heapq.heappop(self.heap)
                batch.append(g)
                continue
            if seq != self.seq[g]:
                heapq.heappop(self.heap)
                continue
            break
        self.shadow_events += 1
        self.factor_shadows[batch[0]] += 1
        if self.trace is not None:
            self.trace.append(("expiry", tuple(batch), t_abs))
        for g in batch:
            self._resimulate(g, t_abs, continue_chain=True)

    # -- main loop --------------------------------------------------------------

    def run(
        self,
        n_events: int,
        max_time: Optional[float] = None,
        max_total_iters: Optional[int] = None,
    ) -> Skeleton:
        while self.events < n_events:
            if max_time is not None and self.t >= max_time:
                break
            if (
                max_total_iters is not None
                and self.events + self.shadow_events >= max_total_iters
            ):
                break
            t_head = self._peek()
            t_next = min(t_head, self.refresh_next, self.boundary_time)
            if not math.isfinite(t_next):
                raise RuntimeError(
                    "all event clocks are silent; the target appears improper"
                )
            if self.boundary_time <= t_next:
                self._handle_boundary()
                continue
            if self.refresh_next <= t_head:
                self._handle_refresh()
                continue
            _, f, _ = heapq.heappop(self.heap)
            clock = self.clocks[f]
            if clock.pending_kind == _EXPIRY:
                self._handle_expiry(f)
            else:
                self._handle_proposal(f)
        return self._skeleton()

    def _skeleton(self) -> Skeleton:
        horizons = (
            tuple(self.horizon.history)
            if self.horizon is not None
            else (self.tuning.tau_max,)
        )
        return Skeleton(
            times=np.array(self.times),
            positions=np.vstack(self.positions),
            velocities=np.vstack(self.velocities),
            events=self.events,
            shadow_events=self.shadow_events,
            rate_evaluations=self.rate_evaluations,
            resimulations=self.resimulations,
            refreshes=self.refreshes,
            boundary_reflections=self.boundary_reflections,
            horizons_used=horizons,
            factor_events=self.factor_events,
            factor_shadows=self.factor_shadows,
        )


# ---------------------------------------------------------------------------
# Public sampler entry points
# ---------------------------------------------------------------------------


def _default_state(model, kernel: str, tuning: TuningParams, rng) -> PDMPState:
    theta0 = model.initial_position()
    if kernel == "flip":
        v0 = np.ones(model.dim)
    else:
        v0 = refresh_velocity(rng, model.dim, tuning.velocity_space)
    return PDMPState(t=0.0, theta=theta0, v=v0)


def run_local(
    model,
    factorisation: Factorisation,
    kernel: str,
    n_events: int,
    tuning: Optional[TuningParams] = None,
    rng=None,
    state0: Optional[PDMPState] = None,
    refresh_rate: Optional[float] = None,
    max_time: Optional[float] = None,
    max_total_iters: Optional[int] = None,
    trace: Optional[list] = None,
) -> Skeleton:
    """Simulate a local PDMP over an explicit factorisation.

    ``kernel`` is ``"flip"`` (negate the factor's velocities) or
    ``"reflect"`` (reflect the factor's sub-velocity off its sub-gradient).
    """
    if rng is None:
        raise ValueError("an explicit random generator is required")
    tuning = tuning if tuning is not None else TuningParams()
    if refresh_rate is None:
        refresh_rate = tuning.refresh_rate
    if state0 is None:
        state0 = _default_state(model, kernel, tuning, rng)
    runner = _Runner(model, factorisation, kernel, tuning, rng, state0, refresh_rate, trace)
    return runner.run(n_events, max_time=max_time, max_total_iters=max_total_iters)


def run_zigzag(
    model,
    n_events: int,
    tuning: Optional[TuningParams] = None,
    rng=None,
    state0: Optional[PDMPState] = None,
    max_time: Optional[float] = None,
    max_total_iters: Optional[int] = None,
    trace: Optional[list] = None,
) -> Skeleton:
    """Zig-Zag sampling: singleton factors, one velocity flip per event."""
    if state0 is not None and not np.all(np.abs(state0.v) == 1.0):
        raise ValueError("zig-zag velocities must be +-1 in every coordinate")
    fact = make_factorisation(model, singleton_partition(model.dim))
    return run_local(
        model,
        fact,
        "flip",
        n_events,
        tuning=tuning,
        rng=rng,
        state0=state0,
        refresh_rate=0.0,
        max_time=max_time,
        max_total_iters=max_total_iters,
        trace=trace,
    )


def run_bps_global(
    model,
    n_events: int,
    refresh_rate: float,
    tuning: Optional[TuningParams] = None,
    rng=None,
    state0: Optional[PDMPState] = None,
    method: str = "cc",
    max_time: Optional[float] = None,
    trace: Optional[list] = None,
) -> Skeleton:
    """Global Bouncy Particle Sampler with refreshment.

    ``method`` selects how events of the summed canonical rate are drawn:
    ``"cc"`` uses one concave-convex clock over all coordinates,
    ``"superposition"`` uses one exact clock per additive rate term and
    thins their minimum.
    """
    if refresh_rate < 0.0:
        raise ValueError("refresh rate must be nonnegative")
    if refresh_rate == 0.0:
        warnings.warn(
            "refresh rate 0 disables velocity refreshment; the bouncy particle "
            "sampler is known to lose ergodicity on rotationally symmetric targets",
            stacklevel=2,
        )
    if method == "cc":
        fact = make_factorisation(model, [tuple(range(model.dim))])
        return run_local(
            model,
            fact,
            "reflect",
            n_events,
            tuning=tuning,
            rng=rng,
            state0=state0,
            refresh_rate=refresh_rate,
            max_time=max_time,
            trace=trace,
        )
    if method == "superposition":
        return _run_bps_superposition(
            model, n_events, refresh_rate, tuning, rng, state0, max_time
        )
    raise ValueError(f"unknown event simulation method {method!r}")


def superposition_event(terms, rng, max_iters: int = 1000) -> ThinningResult:
    """First event of a sum of rate terms via per-term exact clocks.

    Each term exposes ``value(t)``, ``first_arrival(exp_draw)``, and
    ``shifted(dt)``.  The proposal is the minimum of the per-term arrivals,
    accepted with probability max(0, sum of values) over sum of positive
    parts; on rejection every clock restarts from the rejected time.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("need at least one rate term")
    elapsed = 0.0
    proposed = 0
    rejections = 0
    evaluations = 0
    for _ in range(max_iters):
        draws = rng.exponential(size=len(terms))
        tau = min(term.first_arrival(e) for term, e in zip(terms, draws))
        if not math.isfinite(tau):
            return ThinningResult(
                outcome=ClockOutcome.no_event(math.inf),
                events_proposed=proposed,
                rejections=rejections,
                rate_evaluations=evaluations,
            )
        proposed += 1
        values = [term.value(tau) for term in terms]
        evaluations += len(values)
        total = sum(values)
        positive = sum(max(0.0, val) for val in values)
        if positive > 0.0 and thinning_accept(total, positive, rng.uniform()):
            return ThinningResult(
                outcome=ClockOutcome.event(elapsed + tau),
                events_proposed=proposed,
                rejections=rejections,
                rate_evaluations=evaluations,
            )
        rejections += 1
        elapsed += tau
        terms = [term.shifted(tau) for term in terms]
    raise ThinningStallError(
        f"no accepted event after {max_iters} superposition proposals"
    )


def _run_bps_superposition(
    model,
    n_events: int,
    refresh_rate: float,
    tuning: Optional[TuningParams],
    rng,
    state0: Optional[PDMPState],
    max_time: Optional[float],
) -> Skeleton:
    if rng is None:
        raise ValueError("an explicit random generator is required")
    if model.superposition_terms is None:
        raise ValueError(f"model {model.name!r} exposes no additive clock terms")
    tuning = tuning if tuning is not None else TuningParams()
    if state0 is None:
        state0 = _default_state(model, "reflect", tuning, rng)
    t = state0.t
    theta = state0.theta.copy()
    v = state0.v.copy()
    refresh_next = (
        t + rng.exponential() / refresh_rate if refresh_rate > 0.0 else math.inf
    )

    times = [t]
    positions = [theta.copy()]
    velocities = [v.copy()]
    events = shadows = refreshes = evaluations = 0
    last_event = t

    while events < n_events and (max_time is None or t < max_time):
        terms = model.superposition_terms(theta, v)
        draws = rng.exponential(size=len(terms))
        tau = min(term.first_arrival(e) for term, e in zip(terms, draws))
        t_prop = t + tau
        if refresh_next <= t_prop:
            dt = refresh_next - t
            theta += dt * v
            t = refresh_next
            v = refresh_velocity(rng, model.dim, tuning.velocity_space)
            times.append(t)
            positions.append(theta.copy())
            velocities.append(v.copy())
            events += 1
            refreshes += 1
            last_event = t
            refresh_next = t + rng.exponential() / refresh_rate
            continue
        if not math.isfinite(tau):
            raise RuntimeError(
                "all event clocks are silent; the target appears improper"
            )
        values = [term.value(tau) for term in terms]
        evaluations += len(values)
        total = sum(values)
        positive = sum(max(0.0, val) for val in values)
        theta += tau * v
        t = t_prop
        if positive > 0.0 and thinning_accept(total, positive, rng.uniform()):
            v = reflect_full(v, model.grad(theta))
            times.append(t)
            positions.append(theta.copy())
            velocities.append(v.copy())
            events += 1
            last_event = t
        else:
            shadows += 1

    return Skeleton(
        times=np.array(times),
        positions=np.vstack(positions),
        velocities=np.vstack(velocities),
        events=events,
        shadow_events=shadows,
        rate_evaluations=evaluations,
        resimulations=0,
        refreshes=refreshes,
        boundary_reflections=0,
        horizons_used=(),
        factor_events=np.array([events]),
        factor_shadows=np.array([shadows]),
    )
