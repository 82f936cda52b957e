"""Competition interfaces between the three growth clusters.

Two directed paths separate the center cluster from its neighbors: the
minus interface starts (0,0), (0,1) and hugs the upper cluster, the plus
interface starts (0,0), (1,0) and hugs the right cluster.  Each step is
decided by the source label of the north-east neighbor; equivalently the
next vertex is whichever candidate site is infected first.  Once the two
paths meet they coincide, and the meeting index equals the largest
L1-norm of a center-labeled site.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lpp import LABEL_RIGHT, LABEL_UP, PassageGrid, _require_window

__all__ = [
    "InterfaceTrace",
    "LabelCoordinates",
    "trace_interfaces",
    "meeting_index",
    "angles",
    "label_coordinates",
]


@dataclass(eq=False)
class InterfaceTrace:
    """The two interface paths up to L1-length n_max, with event times."""

    phi_minus: np.ndarray     # int64 (n_max + 1, 2); phi_minus[n] is the n-th vertex
    phi_plus: np.ndarray
    times_minus: np.ndarray   # float64, passage time of each vertex
    times_plus: np.ndarray
    meet_index: int | None    # minimal n >= 1 with equal vertices, None if censored
    n_max: int

    @property
    def theta_minus(self) -> np.ndarray:
        """Angles of phi_minus[1:] against the horizontal axis, in [0, pi/2]."""
        return np.arctan2(self.phi_minus[1:, 1], self.phi_minus[1:, 0])

    @property
    def theta_plus(self) -> np.ndarray:
        return np.arctan2(self.phi_plus[1:, 1], self.phi_plus[1:, 0])

    def csv_rows(self):
        """Rows (n, x_minus, y_minus, x_plus, y_plus, met) for export."""
        for n in range(self.n_max + 1):
            met = self.meet_index is not None and n >= self.meet_index
            yield (
                n,
                int(self.phi_minus[n, 0]),
                int(self.phi_minus[n, 1]),
                int(self.phi_plus[n, 0]),
                int(self.phi_plus[n, 1]),
                int(met),
            )


def trace_interfaces(grid: PassageGrid, n_max: int) -> InterfaceTrace:
    """Build both interfaces by the label rule on north-east neighbors.

    The minus path steps right exactly when its north-east neighbor lies
    in the upper cluster; the plus path steps up exactly when its
    north-east neighbor lies in the right cluster.  A trace that reaches
    n_max without the two paths meeting is censored (meet_index None),
    never reported as "no meeting".
    """
    _require_window(grid.width, grid.height, n_max)
    lab = grid.source_label
    pm = np.empty((n_max + 1, 2), dtype=np.int64)
    pp = np.empty((n_max + 1, 2), dtype=np.int64)
    pm[0] = (0, 0)
    pm[1] = (0, 1)
    pp[0] = (0, 0)
    pp[1] = (1, 0)
    for n in range(1, n_max):
        x, y = pm[n]
        if lab[x + 1, y + 1] == LABEL_UP:
            pm[n + 1] = (x + 1, y)
        else:
            pm[n + 1] = (x, y + 1)
        x, y = pp[n]
        if lab[x + 1, y + 1] == LABEL_RIGHT:
            pp[n + 1] = (x, y + 1)
        else:
            pp[n + 1] = (x + 1, y)
    equal = np.nonzero((pm[1:] == pp[1:]).all(axis=1))[0]
    meet = int(equal[0]) + 1 if equal.size else None
    return InterfaceTrace(
        phi_minus=pm,
        phi_plus=pp,
        times_minus=grid.times[pm[:, 0], pm[:, 1]],
        times_plus=grid.times[pp[:, 0], pp[:, 1]],
        meet_index=meet,
        n_max=n_max,
    )


def _trace_by_infection(grid: PassageGrid, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Alternative construction: each step picks the earlier-infected candidate.

    Used to cross-check the label rule; the two must agree on every trial.
    """
    _require_window(grid.width, grid.height, n_max)
    g = grid.times
    paths = []
    for first in ((0, 1), (1, 0)):
        p = np.empty((n_max + 1, 2), dtype=np.int64)
        p[0] = (0, 0)
        p[1] = first
        for n in range(1, n_max):
            x, y = p[n]
            p[n + 1] = (x + 1, y) if g[x + 1, y] < g[x, y + 1] else (x, y + 1)
        paths.append(p)
    return paths[0], paths[1]


def meeting_index(trace: InterfaceTrace) -> int | None:
    """Minimal n >= 1 where the interfaces coincide, None when censored.

    When present it equals the largest x + y over center-labeled sites.
    """
    return trace.meet_index


def angles(trace: InterfaceTrace) -> tuple[np.ndarray, np.ndarray]:
    """Angle sequences of both interfaces for n >= 1 (the origin has none)."""
    return trace.theta_minus, trace.theta_plus


@dataclass(eq=False)
class LabelCoordinates:
    """Interface vertices as right-continuous step functions of shifted time.

    Jump times are the vertex infection times minus the infection time of
    (0, 1), so the clock starts when the site (0, 1) is infected.
    """

    times_minus: np.ndarray   # shifted jump times, one per vertex
    coords_minus: np.ndarray  # (n_max + 1, 2) vertex coordinates
    times_plus: np.ndarray
    coords_plus: np.ndarray

    def minus_at(self, t: float) -> tuple[int, int]:
        i = int(np.searchsorted(self.times_minus, t, side="right")) - 1
        i = max(i, 0)
        return int(self.coords_minus[i, 0]), int(self.coords_minus[i, 1])

    def plus_at(self, t: float) -> tuple[int, int]:
        i = int(np.searchsorted(self.times_plus, t, side="right")) - 1
        i = max(i, 0)
        return int(self.coords_plus[i, 0]), int(self.coords_plus[i, 1])


def label_coordinates(trace: InterfaceTrace, grid: PassageGrid) -> LabelCoordinates:
    """Step functions t -> interface vertex, with time origin at G(0, 1)."""
    g01 = grid.times[0, 1]
    return LabelCoordinates(
        times_minus=trace.times_minus - g01,
        coords_minus=trace.phi_minus,
        times_plus=trace.times_plus - g01,
        coords_plus=trace.phi_plus,
    )
