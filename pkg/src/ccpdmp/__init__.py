"""Piecewise-deterministic MCMC with concave-convex adaptive thinning."""

from .clock import (
    ClockOutcome,
    LinearSegment,
    PiecewiseLinearRate,
    first_arrival,
    integrated_rate,
    superposition_first_arrival,
    thinning_accept,
)
from .envelope import Abscissae, CCFunction, Envelope, ThinningResult, cc_first_event
from .polyrate import Polynomial, poly_to_cc, split_concave_convex

__all__ = [
    "Abscissae",
    "CCFunction",
    "ClockOutcome",
    "Envelope",
    "LinearSegment",
    "PiecewiseLinearRate",
    "Polynomial",
    "ThinningResult",
    "cc_first_event",
    "first_arrival",
    "integrated_rate",
    "poly_to_cc",
    "split_concave_convex",
    "superposition_first_arrival",
    "thinning_accept",
]
