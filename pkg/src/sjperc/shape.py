"""Closed-form limit shapes, fluctuation coefficients and exact zero hits.

Two parameter conventions are easy to confuse and are therefore named
explicitly throughout: `p_bern` is P(weight = 1) of a Bernoulli weight law,
`q0` is P(weight = 0) of an arbitrary nonnegative law.  For Bernoulli
weights q0 = 1 - p_bern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _check_p(p_bern):
    if not 0.0 < p_bern < 1.0:
        raise ValueError(f"Bernoulli parameter must lie in (0,1): {p_bern}")


def critical_slope(p_bern: float) -> float:
    """Slope of the line x = ((1-p)/p) y separating the two shape branches."""
    _check_p(p_bern)
    return (1.0 - p_bern) / p_bern


def limit_shape_bernoulli(p_bern: float, x: float, y: float) -> float:
    """Horizontal-model limit shape for Bernoulli(p) weights.

    (sqrt(px) - sqrt((1-p)y))^2 on x >= ((1-p)/p) y, zero below.
    """
    _check_p(p_bern)
    if x < 0 or y < 0:
        raise ValueError(f"direction must be nonnegative: ({x},{y})")
    lead = p_bern * x
    trail = (1.0 - p_bern) * y
    if lead < trail:
        return 0.0
    return (math.sqrt(lead) - math.sqrt(trail)) ** 2


def limit_shape_model(p_h, c_h, p_v, c_v, x, y) -> float:
    """Limit shape of the switched model: max of the two one-sided shapes.

    Both weight families must be (scaled) Bernoulli: horizontal weights take
    the value c_h with probability p_h, vertical weights c_v with
    probability p_v.  The vertical branch is the horizontal formula with the
    roles of x and y swapped.
    """
    if c_h < 0 or c_v < 0:
        raise ValueError("scales must be nonnegative")
    return max(
        c_h * limit_shape_bernoulli(p_h, x, y),
        c_v * limit_shape_bernoulli(p_v, y, x),
    )


@dataclass(frozen=True)
class ShapeCoefficients:
    """Limit value and fluctuation scales at one direction.

    f is the limit shape value, chi the fluctuation scale (n^{1/3} normal-
    ization), tau the transversal scale (n^{2/3}) and rho the local slope.
    """

    f: float
    tau: float
    chi: float
    rho: float
    x: float
    y: float
    p_bern: float


def coefficients(p_bern: float, x: float, y: float) -> ShapeCoefficients:
    """Fluctuation coefficients for Bernoulli(p) horizontal weights.

    Defined for x,y > 0 strictly above the critical line x > ((1-p)/p) y.
    """
    _check_p(p_bern)
    if x <= 0 or y <= 0:
        raise ValueError(f"direction must be positive: ({x},{y})")
    if p_bern * x <= (1.0 - p_bern) * y:
        raise ValueError(
            f"({x},{y}) not above the critical line x > {(1 - p_bern) / p_bern} y"
        )
    q = 1.0 - p_bern
    diff = math.sqrt(p_bern * x) - math.sqrt(q * y)
    grow = math.sqrt(q * x) + math.sqrt(p_bern * y)
    tau = 2.0 * (x * x / (y * math.sqrt(p_bern * q)) * diff * grow) ** (1.0 / 3.0)
    chi = (p_bern * q / (x * y) * diff * diff * grow * grow) ** (1.0 / 3.0)
    rho = p_bern - math.sqrt(p_bern * q * y / x)
    return ShapeCoefficients(diff * diff, tau, chi, rho, x, y, p_bern)


def chi_from_curvature(p_bern: float, x: float, y: float) -> float:
    """Fluctuation scale from the curvature consistency chi = f_xx tau^2 / 2.

    Unlike the quoted chi formula this normalization is scale covariant
    (chi(cx,cy) = c^{1/3} chi(x,y), as the n^{1/3} scaling requires); the
    two differ by the factor (xy/(p(1-p)))^{1/6}.  Empirically this is the
    scale at which the fluctuations match the reflected TW-GUE law.
    """
    coeffs = coefficients(p_bern, x, y)
    f_xx = 0.5 * math.sqrt(p_bern * (1.0 - p_bern) * y) * x ** (-1.5)
    return 0.5 * f_xx * coeffs.tau**2


def scaled_fluctuation(value: float, n: int, coeffs: ShapeCoefficients) -> float:
    """(value - n f) / (chi n^{1/3}), the KPZ-scaled deviation."""
    if n < 1:
        raise ValueError(f"scale parameter must be >= 1: {n}")
    return (value - n * coeffs.f) / (coeffs.chi * n ** (1.0 / 3.0))


def prob_zero_exact(m: int, q0: float, n: int) -> float:
    """Exact P(F_H(m,n) = 0) when the horizontal weights have P(0) = q0.

    A zero-weight path exists iff the m column climbs, i.i.d. geometric on
    {0,1,...} with success probability q0, sum to at most n; this is the
    negative-binomial tail sum_{k<=n} C(m-1+k,k) q0^m (1-q0)^k, evaluated
    with a stable term recurrence.
    """
    if m < 1:
        raise ValueError(f"need m >= 1: {m}")
    if n < 0:
        raise ValueError(f"need n >= 0: {n}")
    if not 0.0 < q0 <= 1.0:
        raise ValueError(f"zero probability must lie in (0,1]: {q0}")
    if q0 == 1.0:
        return 1.0
    term = q0**m
    total = term
    for k in range(1, n + 1):
        term *= (m - 1 + k) / k * (1.0 - q0)
        total += term
    return min(total, 1.0)
