"""Min-plus dynamic programming engine for directed first passage.

The first-passage value to (i,j) obeys

    F(i,j) = min(F(i-1,j) + horiz(i,j), F(i,j-1) + vert(i,j))

because every up-right path enters (i,j) through exactly one of the two
incoming edges.  A whole row follows from the previous one by a prefix
scan: with C the prefix sums of the row's horizontal weights,

    F(i,j) = C[i] + min_{k<=i} ( F(k,j-1) + vert(k,j) - C[k] ),

which vectorizes as cumsum + minimum.accumulate.  Exact in integer mode;
in real mode the reassociation stays within ~1e-12 of the sequential
recursion at desk scales, and all equality checks use 1e-9 relative
tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

DEFAULT_MAX_CELLS = 10**8
REL_TOL = 1e-9


class MemoryBudgetError(RuntimeError):
    """Full-storage grid would exceed the cell budget."""


class ConsistencyError(RuntimeError):
    """Increment recursions disagree with the value grid (DP bug)."""


class Variant(Enum):
    """Which weights the passage values see.

    FULL    horizontal B*xi and vertical (1-B)*eta
    H       horizontal weights only, vertical edges free
    V       vertical weights only, horizontal edges free
    H_AXIS  horizontal weights plus vertical weights on the y-axis only
            (the boundary-flip identity's horizontal-model variant)
    """

    FULL = "full"
    H = "h"
    V = "v"
    H_AXIS = "h_axis"


def values_equal(a, b, arithmetic_mode) -> bool:
    """Equality of passage values: exact for integers, 1e-9 relative for reals."""
    if arithmetic_mode == "integer":
        return a == b
    return abs(a - b) <= REL_TOL * max(1.0, abs(a), abs(b))


def _variant_rows(env, variant, j, m):
    """(horiz, vert) weight rows for DP row j; None means identically zero."""
    if variant is Variant.FULL:
        return env.horizontal_row(j, m), env.vertical_row(j, m)
    if variant is Variant.H:
        return env.horizontal_row(j, m), None
    if variant is Variant.V:
        return None, env.vertical_row(j, m)
    horiz = env.horizontal_row(j, m)
    vert = np.zeros(m + 1, dtype=horiz.dtype)
    vert[0] = env.vertical_row(j, 0)[0]
    return horiz, vert


def _prefix_sums(horiz):
    # horiz[0] weights no edge; treat it as 0
    csum = np.empty_like(horiz)
    csum[0] = 0
    np.cumsum(horiz[1:], out=csum[1:])
    return csum


def base_row(horiz, m, dtype):
    """Row-0 values F(i,0): running sum of the axis horizontal weights."""
    if horiz is None:
        return np.zeros(m + 1, dtype=dtype)
    return _prefix_sums(horiz)


def advance_row(prev, horiz, vert):
    """Values on row j from row j-1 via the min-plus prefix scan."""
    if horiz is None:
        entry = prev + vert if vert is not None else prev.copy()
        np.minimum.accumulate(entry, out=entry)
        return entry
    csum = _prefix_sums(horiz)
    entry = (prev + vert - csum) if vert is not None else (prev - csum)
    np.minimum.accumulate(entry, out=entry)
    entry += csum
    return entry


@dataclass
class ValueGrid:
    """First-passage values over [a,m] x [b,n] for one variant.

    Full storage keeps values[j - b, i - a]; rolling storage keeps only the
    last row, the column trace at i=m and the final value.
    """

    env: object
    variant: Variant
    origin: tuple
    m: int
    n: int
    storage: str
    values: np.ndarray | None
    last_row: np.ndarray
    column_trace: np.ndarray

    @property
    def final(self):
        return self.column_trace[-1].item()

    def value(self, i, j):
        if self.values is None:
            raise ValueError("point values need full storage")
        a, b = self.origin
        return self.values[j - b, i - a].item()


def _sweep(env, variant, a, b, m, n, storage):
    dtype = env.weight_dtype
    width = m - a + 1

    def rows(j):
        horiz, vert = _variant_rows(env, variant, j, m)
        if a:
            horiz = None if horiz is None else horiz[a:]
            vert = None if vert is None else vert[a:]
        return horiz, vert

    horiz0, _ = rows(b)
    row = base_row(horiz0, width - 1, dtype)
    trace = np.empty(n - b + 1, dtype=dtype)
    trace[0] = row[-1]
    values = None
    if storage == "full":
        values = np.empty((n - b + 1, width), dtype=dtype)
        values[0] = row
    for j in range(b + 1, n + 1):
        horiz, vert = rows(j)
        row = advance_row(row, horiz, vert)
        trace[j - b] = row[-1]
        if values is not None:
            values[j - b] = row
    return values, row, trace


def first_passage_grid(env, variant, m, n, storage="full", max_cells=DEFAULT_MAX_CELLS):
    """DP values from the origin over [0,m] x [0,n]."""
    if storage not in ("full", "rolling"):
        raise ValueError(f"unknown storage mode {storage!r}")
    m_max, n_max = env.extent
    if not (0 <= m <= m_max and 0 <= n <= n_max):
        raise IndexError(f"grid ({m},{n}) outside extent {env.extent}")
    if storage == "full" and (m + 1) * (n + 1) > max_cells:
        raise MemoryBudgetError(f"{(m + 1) * (n + 1)} cells exceed budget {max_cells}")
    values, last_row, trace = _sweep(env, variant, 0, 0, m, n, storage)
    return ValueGrid(env, variant, (0, 0), m, n, storage, values, last_row, trace)


def first_passage_between(env, variant, a, b, m, n):
    """F(a,b; m,n): minimum weight over up-right paths from (a,b) to (m,n)."""
    if a > m or b > n:
        raise ValueError(f"directed metric needs a<=m and b<=n, got ({a},{b})->({m},{n})")
    m_max, n_max = env.extent
    if not (0 <= a and 0 <= b and m <= m_max and n <= n_max):
        raise IndexError(f"rectangle ({a},{b})-({m},{n}) outside extent {env.extent}")
    _, last_row, _ = _sweep(env, variant, a, b, m, n, "rolling")
    return last_row[-1].item()


@dataclass
class Geodesic:
    """A minimizing up-right path with its per-edge weights."""

    vertices: list
    weights: list

    @property
    def total(self):
        return sum(self.weights)


def geodesic(env, variant, m, n, max_cells=DEFAULT_MAX_CELLS):
    """Backtrack one minimizing path; ties prefer the horizontal predecessor."""
    grid = first_passage_grid(env, variant, m, n, "full", max_cells)
    values = grid.values

    def effective(j):
        horiz, vert = _variant_rows(env, variant, j, m)
        zeros = np.zeros(m + 1, dtype=env.weight_dtype)
        return (zeros if horiz is None else horiz), (zeros if vert is None else vert)

    i, j = m, n
    horiz, vert = effective(j)
    rev_vertices = [(m, n)]
    rev_weights = []
    while i > 0 or j > 0:
        go_right = i > 0 and (
            j == 0 or values[j, i - 1] + horiz[i] <= values[j - 1, i] + vert[i]
        )
        if go_right:
            rev_weights.append(horiz[i].item())
            i -= 1
        else:
            rev_weights.append(vert[i].item())
            j -= 1
            horiz, vert = effective(j)
        rev_vertices.append((i, j))
    return Geodesic(rev_vertices[::-1], rev_weights[::-1])


@dataclass
class IncrementGrids:
    """Directional differences of a full value grid.

    horizontal[j, i-1] = F(i,j) - F(i-1,j)   for i >= 1
    vertical[j-1, i]   = F(i,j-1) - F(i,j)   for j >= 1
    """

    horizontal: np.ndarray
    vertical: np.ndarray

    def reconstruct(self, m, n):
        """F(m,n) from row-0 horizontal and column-m vertical increments."""
        return (self.horizontal[0, :m].sum() - self.vertical[:n, m].sum()).item()


def increments(grid: ValueGrid) -> IncrementGrids:
    """Increment grids of a full-storage grid, verified against their recursions."""
    if grid.values is None:
        raise ValueError("increments need full storage")
    values = grid.values
    m, n = grid.m, grid.n
    inc_h = values[:, 1:] - values[:, :-1]
    inc_v = values[:-1, :] - values[1:, :]

    env, variant = grid.env, grid.variant
    zeros = np.zeros(m + 1, dtype=env.weight_dtype)
    weights_h = np.empty_like(values)
    weights_v = np.empty_like(values)
    for j in range(n + 1):
        horiz, vert = _variant_rows(env, variant, j, m)
        weights_h[j] = zeros if horiz is None else horiz
        weights_v[j] = zeros if vert is None else vert

    if n >= 1 and m >= 1:
        through = inc_h[:-1, :] + inc_v[:, :-1]  # X(i,j-1) + Y(i-1,j)
        want_h = np.minimum(weights_h[1:, 1:], through + weights_v[1:, 1:])
        want_v = np.maximum(through - weights_h[1:, 1:], -weights_v[1:, 1:])
        err = max(
            np.abs(inc_h[1:, :] - want_h).max(),
            np.abs(inc_v[:, 1:] - want_v).max(),
        )
        scale = max(1.0, float(np.abs(values).max()))
        limit = 0 if grid.env.arithmetic_mode == "integer" else REL_TOL * scale
        if err > limit:
            raise ConsistencyError(f"increment recursion mismatch: {err} > {limit}")
    return IncrementGrids(inc_h, inc_v)


def departure_point(env, m, n) -> int:
    """Top-most y-axis height from which a horizontal-model geodesic can start.

    Computes the reverse-model values G(0,k) = F_H(0,k; m,n) for all k in one
    backward sweep and returns max{k : G(0,k) = G(0,0)}.  Depends only on the
    switch and xi fields.
    """
    if m < 1:
        raise ValueError("departure point needs m >= 1")
    m_max, n_max = env.extent
    if not (m <= m_max and 0 <= n <= n_max):
        raise IndexError(f"point ({m},{n}) outside extent {env.extent}")

    csum = _prefix_sums(env.horizontal_row(n, m))
    cost_to_go = csum[m] - csum  # along the top row
    from_axis = np.empty(n + 1, dtype=env.weight_dtype)
    from_axis[n] = cost_to_go[0]
    for j in range(n - 1, -1, -1):
        csum = _prefix_sums(env.horizontal_row(j, m))
        through = csum + cost_to_go
        np.minimum.accumulate(through[::-1], out=through[::-1])
        cost_to_go = through - csum
        from_axis[j] = cost_to_go[0]

    base = from_axis[0].item()
    best = 0
    for k in range(n, -1, -1):
        if values_equal(from_axis[k].item(), base, env.arithmetic_mode):
            best = k
            break
    return best


def entry_point(env, m, n) -> int:
    """Largest k with F_H(m, n-k) = F_H(m, n), from the forward column trace."""
    m_max, n_max = env.extent
    if not (0 <= m <= m_max and 0 <= n <= n_max):
        raise IndexError(f"point ({m},{n}) outside extent {env.extent}")
    grid = first_passage_grid(env, Variant.H, m, n, "rolling")
    return entry_from_trace(grid.column_trace, env.arithmetic_mode)


def entry_from_trace(column_trace, arithmetic_mode) -> int:
    """Entry point off a column trace F_H(m, 0..n)."""
    n = len(column_trace) - 1
    base = column_trace[n].item()
    best = 0
    for k in range(n, -1, -1):
        if values_equal(column_trace[n - k].item(), base, arithmetic_mode):
            best = k
            break
    return best


def brute_force_value(env, variant, m, n):
    """Minimum path weight by exhaustive enumeration (test oracle only)."""
    if m + n > 16:
        raise ValueError(f"refusing {math.comb(m + n, m)} paths; need m+n <= 16")
    m_max, n_max = env.extent
    if not (0 <= m <= m_max and 0 <= n <= n_max):
        raise IndexError(f"point ({m},{n}) outside extent {env.extent}")

    zeros = np.zeros(m + 1, dtype=env.weight_dtype)
    horiz, vert = [], []
    for j in range(n + 1):
        h, v = _variant_rows(env, variant, j, m)
        horiz.append((zeros if h is None else h).tolist())
        vert.append((zeros if v is None else v).tolist())

    best = None
    for rights in itertools.combinations(range(m + n), m):
        right_steps = set(rights)
        i = j = 0
        total = 0
        for t in range(m + n):
            if t in right_steps:
                i += 1
                total += horiz[j][i]
            else:
                j += 1
                total += vert[j][i]
        if best is None or total < best:
            best = total
    return 0 if best is None else best
