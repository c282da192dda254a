"""Deterministic verification of the boundary-flip identity.

With all xi >= 0, all eta >= 0 off the y-axis and all eta <= 0 on the
y-axis, the full-model value F(m,n) coincides with the horizontal-model
value that keeps the (signed) y-axis vertical weights, at every lattice
point.  This is an exact statement about arbitrary number collections, so
in integer mode the only acceptable discrepancy is zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fpp import REL_TOL, Variant, first_passage_grid, departure_point, values_equal


class SignPatternError(ValueError):
    """Environment violates the identity's sign hypotheses."""


class BoundaryNegatedEnvironment:
    """View of an environment with eta negated on the y-axis (column 0).

    The only place signed weights are allowed; everything off the axis is
    forwarded to the base environment untouched.
    """

    def __init__(self, base):
        self.base = base
        self.extent = base.extent
        self.arithmetic_mode = base.arithmetic_mode
        self.weight_dtype = base.weight_dtype
        self.config = getattr(base, "config", None)

    def switch_row(self, j, m=None):
        return self.base.switch_row(j, m)

    def xi_row(self, j, m=None):
        return self.base.xi_row(j, m)

    def eta_row(self, j, m=None):
        row = self.base.eta_row(j, m).copy()
        row[0] = -row[0]
        return row

    def rows(self, j, m=None):
        return self.switch_row(j, m), self.xi_row(j, m), self.eta_row(j, m)

    def horizontal_row(self, j, m=None):
        return self.base.horizontal_row(j, m)

    def vertical_row(self, j, m=None):
        row = self.base.vertical_row(j, m).copy()
        row[0] = -row[0]
        return row

    def switch_at(self, i, j):
        return self.base.switch_at(i, j)

    def xi_at(self, i, j):
        return self.base.xi_at(i, j)

    def eta_at(self, i, j):
        value = self.base.eta_at(i, j)
        return -value if i == 0 else value


def negate_boundary(env) -> BoundaryNegatedEnvironment:
    """View with eta(0,j) replaced by -eta(0,j); all other weights unchanged."""
    return BoundaryNegatedEnvironment(env)


@dataclass(frozen=True)
class IdentityReport:
    """Pointwise comparison of the full and boundary-keeping horizontal models."""

    extent: tuple
    max_abs_discrepancy: float
    violations: int
    arithmetic_mode: str

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _check_sign_pattern(env, m, n):
    for j in range(n + 1):
        xi = env.xi_row(j, m)
        if np.any(xi < 0):
            raise SignPatternError(f"negative xi in row {j}")
        eta = env.eta_row(j, m)
        if eta[0] > 0:
            raise SignPatternError(f"positive eta on the y-axis at j={j}")
        if m >= 1 and np.any(eta[1:] < 0):
            raise SignPatternError(f"negative off-axis eta in row {j}")


def verify_identity(env, m, n) -> IdentityReport:
    """Compare F and the axis-keeping F_H over the whole (m+1) x (n+1) grid.

    The environment must satisfy the sign pattern (xi >= 0 everywhere,
    eta >= 0 off the y-axis, eta <= 0 on it), as produced by
    negate_boundary on a standard nonnegative environment.
    """
    _check_sign_pattern(env, m, n)
    full = first_passage_grid(env, Variant.FULL, m, n, "full")
    horiz = first_passage_grid(env, Variant.H_AXIS, m, n, "full")
    gap = np.abs(full.values - horiz.values)
    max_abs = gap.max().item()
    if env.arithmetic_mode == "integer":
        violations = int(np.count_nonzero(gap))
    else:
        scale = np.maximum(1.0, np.maximum(np.abs(full.values), np.abs(horiz.values)))
        violations = int(np.count_nonzero(gap > REL_TOL * scale))
    return IdentityReport((m, n), float(max_abs), violations, env.arithmetic_mode)


@dataclass(frozen=True)
class UpperBoundWitness:
    """Both sides of the geodesic sandwich F_H <= F <= F_H + boundary sum."""

    full_value: float
    horizontal_value: float
    departure: int
    boundary_sum: float
    holds: bool


def upper_bound_check(env, m, n) -> UpperBoundWitness:
    """Check F_H(m,n) <= F(m,n) <= F_H(m,n) + sum_{j<=D} eta(0,j).

    The boundary sum uses the raw eta values (not the switched vertical
    weights): a geodesic re-routed along the y-axis pays at most eta there.
    """
    full = first_passage_grid(env, Variant.FULL, m, n, "rolling").final
    horiz = first_passage_grid(env, Variant.H, m, n, "rolling").final
    depart = departure_point(env, m, n)
    boundary = sum(env.eta_at(0, j) for j in range(1, depart + 1))

    if env.arithmetic_mode == "integer":
        holds = horiz <= full <= horiz + boundary
    else:
        slack = REL_TOL * max(1.0, abs(full), abs(horiz) + abs(boundary))
        holds = (horiz <= full + slack) and (full <= horiz + boundary + slack)
    return UpperBoundWitness(full, horiz, depart, boundary, bool(holds))
