"""The random walk web: the subgraph of zero-weight incoming edges.

Each interior vertex (i,j) keeps exactly one incoming edge, the free one:
horizontal when B(i,j)=0, vertical when B(i,j)=1.  Followed backward
(south-west), the kept edges form coalescing walks; passage values count
the weights paid for jumping across removed edges.  The web is a pure
function of the switch field, shared by all xi/eta re-randomizations.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

KEEP_HORIZONTAL = 0
KEEP_VERTICAL = 1


@dataclass(frozen=True)
class WebGraph:
    """Kept-edge directions at interior vertices; kept[j-1, i-1] is vertex (i,j)."""

    extent: tuple
    kept: np.ndarray

    def direction(self, i, j) -> str:
        """'H' when the kept incoming edge is horizontal, 'V' when vertical."""
        return "V" if self.kept[j - 1, i - 1] else "H"


def build_web(env) -> WebGraph:
    """Kept-edge table over the interior of the environment's extent."""
    m, n = env.extent
    kept = np.empty((n, m), dtype=np.uint8)
    for j in range(1, n + 1):
        kept[j - 1] = env.switch_row(j, m)[1:].astype(np.uint8)
    return WebGraph((m, n), kept)


def jump_distance(env, m, n) -> int:
    """Minimum number of removed-edge crossings from the origin to (m,n).

    Requires a unit environment (xi = eta = 1 everywhere), where the
    full-model passage value counts exactly the jumps between walks.
    """
    from .env import DistributionSpec
    from .fpp import Variant, first_passage_grid

    config = getattr(env, "config", None)
    unit = DistributionSpec.constant(1)
    if config is not None:
        if config.xi_dist != unit or config.eta_dist != unit:
            raise ValueError("jump distance needs xi = eta = const:1")
    else:
        for j in range(n + 1):
            if not (np.all(env.xi_row(j, m) == 1) and np.all(env.eta_row(j, m) == 1)):
                raise ValueError("jump distance needs xi = eta = 1 on the rectangle")
    return int(first_passage_grid(env, Variant.FULL, m, n, "rolling").final)


def export_web(web: WebGraph, destination) -> None:
    """Write the kept-edge list as CSV rows "i,j,dir" (one per interior vertex)."""
    m, n = web.extent

    def _write(fh):
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "dir"])
        for j in range(1, n + 1):
            for i in range(1, m + 1):
                writer.writerow([i, j, web.direction(i, j)])

    if hasattr(destination, "write"):
        _write(destination)
    else:
        with open(destination, "w", newline="") as fh:
            _write(fh)


def trace_backward(web: WebGraph, i: int, j: int) -> list:
    """Vertices visited following kept edges backward until an axis is hit."""
    m, n = web.extent
    if not (1 <= i <= m and 1 <= j <= n):
        raise IndexError(f"start ({i},{j}) outside interior of {web.extent}")
    path = [(i, j)]
    while i >= 1 and j >= 1:
        if web.kept[j - 1, i - 1]:
            j -= 1
        else:
            i -= 1
        path.append((i, j))
    return path
