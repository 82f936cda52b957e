"""Directed last-passage times, geodesics, and the three-cluster split.

The passage time G(x, y) is the maximal total weight of a monotone
lattice path from the origin, built by the recurrence

    G(z) = w(z) + max(G(z - (1,0)), G(z - (0,1)))

with G = 0 outside the quadrant.  Every site with x + y >= 2 is labeled
by the unique source among (0,2), (1,1), (2,0) its geodesic passes, and
``alpha(n)`` counts center-labeled sites on the anti-diagonal x + y = n.
The center cluster survives the window when alpha stays positive.

Exact float ties in the recurrence (a measure-zero event) break toward
the horizontal predecessor so that results are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from numba import njit

from .errors import TooManyPathsError, WindowTooSmallError
from .weights import WeightField

__all__ = [
    "PassageGrid",
    "AlphaProfile",
    "CoexistenceStatus",
    "passage_times",
    "brute_force_passage_time",
    "geodesic",
    "alpha_profile",
    "scan_alpha",
    "coexistence_status",
    "early_death_test",
    "LABEL_NONE",
    "LABEL_UP",
    "LABEL_CENTER",
    "LABEL_RIGHT",
    "BP_ORIGIN",
    "BP_LEFT",
    "BP_BELOW",
    "SOURCE_SITES",
]

# Source labels for sites with x + y >= 2.
LABEL_NONE = 0
LABEL_UP = 1      # geodesic passes (0, 2)
LABEL_CENTER = 2  # geodesic passes (1, 1)
LABEL_RIGHT = 3   # geodesic passes (2, 0)

SOURCE_SITES = {LABEL_UP: (0, 2), LABEL_CENTER: (1, 1), LABEL_RIGHT: (2, 0)}

# Backpointer codes.
BP_ORIGIN = 0
BP_LEFT = 1   # predecessor (x - 1, y)
BP_BELOW = 2  # predecessor (x, y - 1)

PATH_GUARD = 10**6  # brute-force enumeration cap


@njit(cache=True)
def _dp_grid(weights):  # pragma: no cover - exercised through passage_times
    width, height = weights.shape
    times = np.empty((width, height), np.float64)
    backpointer = np.empty((width, height), np.int8)
    labels = np.zeros((width, height), np.int8)
    for y in range(height):
        for x in range(width):
            left = times[x - 1, y] if x > 0 else 0.0
            below = times[x, y - 1] if y > 0 else 0.0
            from_left = left >= below
            times[x, y] = weights[x, y] + (left if from_left else below)
            n = x + y
            if n == 0:
                backpointer[x, y] = 0
            elif from_left:
                backpointer[x, y] = 1
            else:
                backpointer[x, y] = 2
            if n == 2:
                labels[x, y] = x + 1
            elif n > 2:
                labels[x, y] = labels[x - 1, y] if from_left else labels[x, y - 1]
    return times, backpointer, labels


@njit(cache=True)
def _alpha_scan(weights, n_max, alphas):  # pragma: no cover - exercised via scan_alpha
    """Anti-diagonal sweep of the recurrence, stopping at the first empty level.

    Fills ``alphas[n]`` for 2 <= n <= n_max (zeros past the death level)
    and returns the first n with alpha(n) == 0, or -1 when the center
    cluster is still present at n_max.  Arithmetic is identical to
    _dp_grid: one max and one add per site.
    """
    g_prev = np.zeros(n_max + 2, np.float64)
    g_cur = np.zeros(n_max + 2, np.float64)
    lab_prev = np.zeros(n_max + 2, np.int8)
    lab_cur = np.zeros(n_max + 2, np.int8)
    g_prev[0] = weights[0, 0]
    g_cur[0] = weights[0, 1] + g_prev[0]
    g_cur[1] = weights[1, 0] + g_prev[0]
    tmp = g_prev
    g_prev = g_cur
    g_cur = tmp
    for n in range(2, n_max + 1):
        alpha = 0
        for x in range(n + 1):
            left = g_prev[x - 1] if x >= 1 else 0.0
            below = g_prev[x] if x <= n - 1 else 0.0
            from_left = left >= below
            g_cur[x] = weights[x, n - x] + (left if from_left else below)
            if n == 2:
                lab_cur[x] = x + 1
            else:
                lab_cur[x] = lab_prev[x - 1] if from_left else lab_prev[x]
            if lab_cur[x] == 2:
                alpha += 1
        alphas[n] = alpha
        if alpha == 0:
            return n
        tmp = g_prev
        g_prev = g_cur
        g_cur = tmp
        tmpl = lab_prev
        lab_prev = lab_cur
        lab_cur = tmpl
    return -1


@dataclass(eq=False)
class PassageGrid:
    """Passage times with backpointers and source labels over a window."""

    width: int
    height: int
    times: np.ndarray         # float64 (width, height)
    backpointer: np.ndarray   # int8, BP_* codes
    source_label: np.ndarray  # int8, LABEL_* codes; LABEL_NONE where x + y < 2

    def time(self, x: int, y: int) -> float:
        return float(self.times[x, y])


@dataclass(frozen=True)
class AlphaProfile:
    """Center-cluster counts alpha(2), ..., alpha(n_max) per anti-diagonal."""

    values: np.ndarray  # int64, values[i] = alpha(2 + i)
    n_max: int

    def alpha(self, n: int) -> int:
        if not 2 <= n <= self.n_max:
            raise IndexError(f"alpha defined for 2 <= n <= {self.n_max}, got {n}")
        return int(self.values[n - 2])

    def truncated(self, n_max: int) -> "AlphaProfile":
        if not 2 <= n_max <= self.n_max:
            raise IndexError(f"cannot truncate to {n_max}")
        return AlphaProfile(self.values[: n_max - 1], n_max)


@dataclass(frozen=True)
class CoexistenceStatus:
    """Censored survival status: died at a level, or alive at the horizon."""

    died_at: int | None
    horizon: int

    @property
    def alive(self) -> bool:
        return self.died_at is None

    def __str__(self) -> str:
        if self.alive:
            return f"AliveAtHorizon({self.horizon})"
        return f"DiedAt({self.died_at})"


def passage_times(field: WeightField) -> PassageGrid:
    """Full dynamic program over the rectangle.

    Backpointers record which predecessor attained the maximum; source
    labels are propagated along backpointers from the three sources on
    the anti-diagonal x + y = 2.
    """
    times, backpointer, labels = _dp_grid(field.weights)
    return PassageGrid(field.width, field.height, times, backpointer, labels)


def brute_force_passage_time(field: WeightField, z: tuple[int, int]) -> float:
    """Maximum path weight to ``z`` by explicit enumeration of every path.

    Independent oracle for :func:`passage_times`: it never touches the
    recurrence, it walks each of the C(x+y, x) monotone paths and sums
    weights along the way.
    """
    x, y = z
    if not (0 <= x < field.width and 0 <= y < field.height):
        raise ValueError(f"site {z} outside the field")
    n_paths = math.comb(x + y, x)
    if n_paths > PATH_GUARD:
        raise TooManyPathsError(f"{n_paths} paths exceed the guard of {PATH_GUARD}")
    w = field.weights
    steps = x + y
    best = -math.inf
    for right_steps in combinations(range(steps), x):
        rights = frozenset(right_steps)
        cx = cy = 0
        total = w[0, 0]
        for s in range(steps):
            if s in rights:
                cx += 1
            else:
                cy += 1
            total += w[cx, cy]
        if total > best:
            best = total
    return best


def geodesic(grid: PassageGrid, z: tuple[int, int]) -> np.ndarray:
    """Directed path (0,0), ..., z obtained by backpointer descent."""
    x, y = z
    if not (0 <= x < grid.width and 0 <= y < grid.height):
        raise ValueError(f"site {z} outside the grid")
    path = []
    while True:
        path.append((x, y))
        code = grid.backpointer[x, y]
        if code == BP_ORIGIN:
            break
        if code == BP_LEFT:
            x -= 1
        else:
            y -= 1
    path.reverse()
    return np.array(path, dtype=np.int64)


def _require_window(width: int, height: int, n_max: int) -> None:
    if n_max < 2:
        raise WindowTooSmallError(f"n_max must be at least 2, got {n_max}")
    if not (n_max < width and n_max < height):
        raise WindowTooSmallError(
            f"n_max={n_max} needs width and height > n_max, got {width}x{height}"
        )


def alpha_profile(grid: PassageGrid, n_max: int) -> AlphaProfile:
    """Counts of center-labeled sites per anti-diagonal n = 2, ..., n_max.

    Requires n_max strictly below both dimensions so that every reported
    anti-diagonal lies fully inside the window.
    """
    _require_window(grid.width, grid.height, n_max)
    xs, ys = np.nonzero(grid.source_label == LABEL_CENTER)
    counts = np.bincount(xs + ys, minlength=n_max + 1)
    return AlphaProfile(counts[2 : n_max + 1].astype(np.int64), n_max)


def scan_alpha(field: WeightField, n_max: int) -> tuple[int | None, np.ndarray]:
    """Streamed alpha computation with early exit at the first empty level.

    Returns (died_at, values) where died_at is None when the center
    cluster is still present at n_max, and values lists alpha(2..n_max)
    (zeros past the death level).  Matches alpha_profile on the same
    field bit for bit; the sweep just stops early.
    """
    _require_window(field.width, field.height, n_max)
    alphas = np.zeros(n_max + 1, dtype=np.int64)
    died = _alpha_scan(field.weights, n_max, alphas)
    return (None if died < 0 else int(died)), alphas[2 : n_max + 1]


def coexistence_status(profile: AlphaProfile) -> CoexistenceStatus:
    """First level with alpha = 0, or alive at the profile's horizon."""
    zeros = np.nonzero(profile.values == 0)[0]
    if zeros.size:
        return CoexistenceStatus(died_at=int(zeros[0]) + 2, horizon=profile.n_max)
    return CoexistenceStatus(died_at=None, horizon=profile.n_max)


def early_death_test(field: WeightField) -> bool:
    """Sufficient condition on the five corner weights for death at level 3.

    True when min(w(1,0)+w(2,0), w(0,1)+w(0,2)) > w(1,1) + max(w(1,0), w(0,1)),
    in which case the center cluster is exactly its source site.
    """
    w = field.weights
    lhs = min(w[1, 0] + w[2, 0], w[0, 1] + w[0, 2])
    rhs = w[1, 1] + max(w[1, 0], w[0, 1])
    return bool(lhs > rhs)
