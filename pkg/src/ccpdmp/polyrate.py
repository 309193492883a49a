"""Polynomial rate functions and their concave-convex splits.

A polynomial event rate in elapsed time splits into a convex part (constant
term plus positive-coefficient powers) and a concave part (negative
coefficients), both valid on t >= 0.  Taylor and interpolation constructions
produce dominating polynomials from derivative bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .envelope import CCFunction

MAX_DEGREE = 16


def _normalize(coeffs: Sequence[float]) -> tuple[float, ...]:
    c = list(coeffs) if coeffs else [0.0]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(float(x) for x in c)


@dataclass(frozen=True)
class Polynomial:
    """Coefficients a_0..a_d of a_0 + a_1 t + ... + a_d t^d."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Sequence[float]):
        coeffs = tuple(float(c) for c in coeffs) or (0.0,)
        if not all(math.isfinite(c) for c in coeffs):
            raise ValueError("polynomial coefficients must be finite")
        if len(_normalize(coeffs)) - 1 > MAX_DEGREE:
            raise ValueError(f"polynomial degree exceeds cap {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(_normalize(self.coeffs)) - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return _normalize(self.coeffs) == _normalize(other.coeffs)

    def __hash__(self):
        return hash(_normalize(self.coeffs))

    def evaluate(self, t: float) -> float:
        """Horner evaluation, highest degree first."""
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __call__(self, t: float) -> float:
        return self.evaluate(t)

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial([0.0])
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        summed = list(a)
        for i, c in enumerate(b):
            summed[i] += c
        return Polynomial(summed)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Polynomial([other * c for c in self.coeffs])
        if not isinstance(other, Polynomial):
            return NotImplemented
        out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            for j, cj in enumerate(other.coeffs):
                out[i + j] += ci * cj
        return Polynomial(out)

    __rmul__ = __mul__

    def is_affine(self) -> bool:
        return self.degree <= 1


def split_concave_convex(p: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Split into (convex, concave) parts valid on t >= 0.

    The convex part keeps the constant term and all positive coefficients;
    the concave part keeps the negative ones.  The parts sum back to p.
    The constant could go either way; placing it with the convex part keeps
    chord bounds of affine pieces exact.
    """
    convex = [0.0] * len(p.coeffs)
    concave = [0.0] * len(p.coeffs)
    convex[0] = p.coeffs[0]
    for i, c in enumerate(p.coeffs[1:], start=1):
        if c > 0.0:
            convex[i] = c
        elif c < 0.0:
            concave[i] = c
    return Polynomial(convex), Polynomial(concave)


def taylor_upper_bound(derivs_at_0: Sequence[float], m_bound: float) -> Polynomial:
    """Dominating polynomial from derivatives at zero plus a remainder cap.

    Given f(0), f'(0), ..., f^(k)(0) and M >= sup |f^(k+1)| on the horizon,
    returns sum_j f^(j)(0) t^j / j!  +  M t^(k+1) / (k+1)!.
    """
    if m_bound < 0.0:
        raise ValueError("derivative bound must be nonnegative")
    if not derivs_at_0:
        raise ValueError("need at least f(0)")
    coeffs = [d / math.factorial(j) for j, d in enumerate(derivs_at_0)]
    k = len(coeffs) - 1
    coeffs.append(m_bound / math.factorial(k + 1))
    return Polynomial(coeffs)


def lagrange_upper_bound(
    samples: Sequence[tuple[float, float]], m_bound: float, horizon: float
) -> Polynomial:
    """Interpolating polynomial shifted up by the interpolation error cap.

    With k+1 sample points and M >= sup |f^(k+1)|, the shift is
    horizon^(k+1) * M / (k+1)!, added as a constant.
    """
    if m_bound < 0.0:
        raise ValueError("derivative bound must be nonnegative")
    ts = [t for t, _ in samples]
    if len(set(ts)) != len(ts):
        raise ValueError("sample abscissae must be distinct")
    poly = _newton_interpolate(samples)
    k = len(samples) - 1
    shift = horizon ** (k + 1) * m_bound / math.factorial(k + 1)
    return poly + Polynomial([shift])


def _newton_interpolate(samples: Sequence[tuple[float, float]]) -> Polynomial:
    ts = [t for t, _ in samples]
    dd = [v for _, v in samples]
    n = len(samples)
    # divided differences in place: dd[i] becomes f[t_0..t_i]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (ts[i] - ts[i - level])
    poly = Polynomial([dd[n - 1]])
    for i in range(n - 2, -1, -1):
        poly = poly * Polynomial([-ts[i], 1.0]) + Polynomial([dd[i]])
    return poly


def poly_to_cc(p: Polynomial, horizon: float) -> CCFunction:
    """Concave-convex evaluator bundle for a polynomial rate."""
    if horizon <= 0.0:
        raise ValueError("horizon must be positive")
    convex, concave = split_concave_convex(p)
    concave_deriv = concave.derivative()
    return CCFunction(
        eval_convex=convex.evaluate,
        eval_concave=concave.evaluate,
        eval_concave_deriv=concave_deriv.evaluate,
        horizon=horizon,
    )
