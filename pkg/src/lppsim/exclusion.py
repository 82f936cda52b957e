"""Event-driven exclusion processes on finite windows of the integer line.

Sites carry integer particle labels or the hole sentinel, which compares
greater than every label.  A bond (x, x+1) that rings swaps its two
labels exactly when the left one is smaller.  Rings are realized by
presampling the superposed Poisson stream: the ring count over
[0, horizon] is Poisson(#bonds * horizon), ring times are sorted
uniforms, and each ring picks an independent uniform bond.  By
memorylessness this is the same law as independent rate-1 clocks per
bond resampled after every ring.  Bonds outside the window never ring
(frozen boundary), so windows must be sized so that boundary influence
cannot reach the particles being tracked.

The module also provides the deterministic construction of a TASEP from
a passage-time grid (labeled particles and holes exchange positions at
the grid times), the staircase reading of an infected region as a
configuration, the embedding of two tagged hole-particle pairs as
second-class labels 2 and 3, and the shared-clock coupling of two
processes.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import (
    AbsentLabelError,
    HorizonExceedsWindowError,
    InvalidGapError,
    NotDownClosedError,
    WindowTooSmallError,
)
from .lpp import PassageGrid
from .rng import Seed

__all__ = [
    "HOLE",
    "Configuration",
    "Trajectory",
    "TaggedPairTrack",
    "RostLabeling",
    "make_initial",
    "two_pair_tasep",
    "three_type_initial",
    "identity_multi",
    "step_tasep",
    "simulate",
    "basic_couple",
    "tagged_pairs",
    "psi",
    "three_type_from_tagged",
    "verify_three_type_coupling",
    "rost_tasep",
    "border_to_config",
    "position_of",
    "overtake_time",
]

HOLE = np.int64(2**62)  # orders above every particle label


# ---------------------------------------------------------------------------
# configurations


@dataclass(eq=False)
class Configuration:
    """Labels on the integer window [lo, hi]; ``cells[i]`` sits at lo + i."""

    lo: int
    hi: int
    cells: np.ndarray  # int64
    kind: str = "tasep"   # "tasep", "ktype", or "multi"
    k: int | None = None  # label bound for the ktype kind

    def __post_init__(self) -> None:
        if self.hi <= self.lo:
            raise ValueError("window must contain at least two sites")
        if self.cells.shape != (self.hi - self.lo + 1,):
            raise ValueError("cells array does not match the window")

    @property
    def window(self) -> tuple[int, int]:
        return self.lo, self.hi

    @property
    def bond_count(self) -> int:
        return self.hi - self.lo

    def index(self, x: int) -> int:
        if not self.lo <= x <= self.hi:
            raise IndexError(f"site {x} outside window [{self.lo}, {self.hi}]")
        return x - self.lo

    def label_at(self, x: int) -> int:
        return int(self.cells[self.index(x)])

    def copy(self) -> "Configuration":
        return Configuration(self.lo, self.hi, self.cells.copy(), self.kind, self.k)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Configuration)
            and self.window == other.window
            and self.kind == other.kind
            and self.k == other.k
            and bool(np.array_equal(self.cells, other.cells))
        )

    def to_glyphs(self) -> str:
        """One-line rendering: '.' for holes, decimal labels otherwise.

        Tasep and ktype labels are single digits and concatenate directly;
        multi labels are comma-separated.
        """
        tokens = ["." if c == HOLE else str(int(c)) for c in self.cells]
        return ",".join(tokens) if self.kind == "multi" else "".join(tokens)


def _require_contains(window: tuple[int, int], lo_need: int, hi_need: int) -> None:
    lo, hi = window
    if lo > lo_need or hi < hi_need:
        raise WindowTooSmallError(
            f"window [{lo}, {hi}] must contain [{lo_need}, {hi_need}]"
        )


def two_pair_tasep(m: int, window: tuple[int, int]) -> Configuration:
    """TASEP state with two tagged hole-particle pairs separated by m holes.

    Particles fill sites <= -2 and sit at 0 and m + 2; the pairs are the
    hole-particle adjacencies at (-1, 0) and (m + 1, m + 2).
    """
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    _require_contains(window, -2, m + 3)
    lo, hi = window
    cells = np.full(hi - lo + 1, HOLE, dtype=np.int64)
    cells[: -2 - lo + 1] = 1          # sites lo..-2
    cells[0 - lo] = 1
    cells[m + 2 - lo] = 1
    return Configuration(lo, hi, cells, "tasep")


def three_type_initial(m: int, window: tuple[int, int]) -> Configuration:
    """Three-type state: first-class particles up to -1, a 2 at 0, a 3 at m + 1."""
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    _require_contains(window, -2, m + 3)
    lo, hi = window
    cells = np.full(hi - lo + 1, HOLE, dtype=np.int64)
    cells[: -1 - lo + 1] = 1          # sites lo..-1
    cells[0 - lo] = 2
    cells[m + 1 - lo] = 3
    return Configuration(lo, hi, cells, "ktype", k=3)


def identity_multi(window: tuple[int, int]) -> Configuration:
    """Fully labeled state with label x at every site x."""
    lo, hi = window
    return Configuration(lo, hi, np.arange(lo, hi + 1, dtype=np.int64), "multi")


def step_tasep(window: tuple[int, int]) -> Configuration:
    """Step profile: particles on nonpositive sites, holes on positive ones."""
    lo, hi = window
    cells = np.where(np.arange(lo, hi + 1) <= 0, np.int64(1), HOLE)
    return Configuration(lo, hi, cells.astype(np.int64), "tasep")


_INITIAL_KINDS = {
    "two-pair": lambda window, m: two_pair_tasep(m, window),
    "three-type": lambda window, m: three_type_initial(m, window),
    "identity": lambda window, m: identity_multi(window),
    "step": lambda window, m: step_tasep(window),
}


def make_initial(kind: str, window: tuple[int, int], m: int = 0) -> Configuration:
    """Named initial states: "two-pair", "three-type", "identity", "step"."""
    try:
        build = _INITIAL_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown initial kind {kind!r}; expected one of {sorted(_INITIAL_KINDS)}")
    return build(window, m)


# ---------------------------------------------------------------------------
# dynamics


@njit(cache=True)
def _run_record(cells, bond_idx, swapped, left_out, right_out):  # pragma: no cover
    for i in range(bond_idx.shape[0]):
        b = bond_idx[i]
        left = cells[b]
        right = cells[b + 1]
        left_out[i] = left
        right_out[i] = right
        if left < right:
            cells[b] = right
            cells[b + 1] = left
            swapped[i] = True


@njit(cache=True)
def _run_plain(cells, bond_idx):  # pragma: no cover
    for i in range(bond_idx.shape[0]):
        b = bond_idx[i]
        left = cells[b]
        right = cells[b + 1]
        if left < right:
            cells[b] = right
            cells[b + 1] = left


@njit(cache=True)
def _overtake_scan(cells, bond_idx, pos):  # pragma: no cover
    """Apply rings, tracking positions (as indices) of labels 0..len(pos)-1.

    Returns (ring index at which label 0 first exceeds all other tracked
    labels, or -1; min tracked index seen; max tracked index seen).
    """
    n_tracked = pos.shape[0]
    mn = pos[0]
    mx = pos[0]
    for k in range(n_tracked):
        if pos[k] < mn:
            mn = pos[k]
        if pos[k] > mx:
            mx = pos[k]
    for i in range(bond_idx.shape[0]):
        b = bond_idx[i]
        left = cells[b]
        right = cells[b + 1]
        if left < right:
            cells[b] = right
            cells[b + 1] = left
            moved = False
            if 0 <= left < n_tracked:
                pos[left] = b + 1
                moved = True
                if b + 1 > mx:
                    mx = b + 1
            if 0 <= right < n_tracked:
                pos[right] = b
                moved = True
                if b < mn:
                    mn = b
            if moved:
                p0 = pos[0]
                ahead = True
                for k in range(1, n_tracked):
                    if pos[k] >= p0:
                        ahead = False
                        break
                if ahead:
                    return i, mn, mx
    return -1, mn, mx


@dataclass(eq=False)
class Trajectory:
    """Event history of one run: every ring, whether or not it swapped.

    State at a time is reconstructed by replay; only events are stored.
    ``bonds`` holds absolute bond coordinates (the ring at bond x touches
    sites x and x + 1) and the label columns record the bond's labels
    just before the ring.
    """

    initial: Configuration
    times: np.ndarray        # float64, nondecreasing
    bonds: np.ndarray        # int64, absolute coordinates
    swapped: np.ndarray      # bool
    left_labels: np.ndarray  # int64
    right_labels: np.ndarray
    horizon: float

    @property
    def event_count(self) -> int:
        return int(self.times.shape[0])

    def replay(self):
        """Yield (event index, working cells) after applying each event.

        The yielded array is a live working copy: callers may read it but
        must not modify it.
        """
        cells = self.initial.cells.copy()
        lo = self.initial.lo
        for i in range(self.times.shape[0]):
            if self.swapped[i]:
                b = self.bonds[i] - lo
                cells[b], cells[b + 1] = cells[b + 1], cells[b]
            yield i, cells

    def state_at(self, t: float) -> Configuration:
        """Configuration right after every event with time <= t."""
        cells = self.initial.cells.copy()
        lo = self.initial.lo
        stop = int(np.searchsorted(self.times, t, side="right"))
        for i in range(stop):
            if self.swapped[i]:
                b = self.bonds[i] - lo
                cells[b], cells[b + 1] = cells[b + 1], cells[b]
        cfg = self.initial.copy()
        cfg.cells = cells
        return cfg

    def csv_rows(self):
        """Rows (time, bond, swapped, left_label, right_label)."""
        for i in range(self.event_count):
            yield (
                float(self.times[i]),
                int(self.bonds[i]),
                int(self.swapped[i]),
                int(self.left_labels[i]),
                int(self.right_labels[i]),
            )


def _draw_rings(rng: np.random.Generator, bonds: int, horizon: float):
    count = int(rng.poisson(bonds * horizon))
    times = np.sort(rng.random(count)) * horizon
    bond_idx = rng.integers(0, bonds, count)
    return times, bond_idx


def simulate(config: Configuration, horizon: float, seed: Seed) -> Trajectory:
    """Run the exclusion dynamics on the window up to the horizon.

    Deterministic given (config, horizon, seed).  Bonds outside the
    window never ring; see the module docstring for window sizing.
    """
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    rng = seed.generator()
    times, bond_idx = _draw_rings(rng, config.bond_count, horizon)
    cells = config.cells.copy()
    n = bond_idx.shape[0]
    swapped = np.zeros(n, dtype=np.bool_)
    left = np.empty(n, dtype=np.int64)
    right = np.empty(n, dtype=np.int64)
    _run_record(cells, bond_idx, swapped, left, right)
    return Trajectory(
        initial=config.copy(),
        times=times,
        bonds=bond_idx.astype(np.int64) + config.lo,
        swapped=swapped,
        left_labels=left,
        right_labels=right,
        horizon=horizon,
    )


def basic_couple(
    a: Configuration, b: Configuration, horizon: float, seed: Seed
) -> tuple[Trajectory, Trajectory]:
    """Drive two processes with one shared clock stream.

    Both windows must coincide; every ring is applied to each process
    under its own swap rule.  The first trajectory equals
    ``simulate(a, horizon, seed)`` exactly, so coupling is by clocks only.
    """
    if a.window != b.window:
        raise ValueError("coupled configurations must share the same window")
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    rng = seed.generator()
    times, bond_idx = _draw_rings(rng, a.bond_count, horizon)
    out = []
    for config in (a, b):
        cells = config.cells.copy()
        n = bond_idx.shape[0]
        swapped = np.zeros(n, dtype=np.bool_)
        left = np.empty(n, dtype=np.int64)
        right = np.empty(n, dtype=np.int64)
        _run_record(cells, bond_idx, swapped, left, right)
        out.append(
            Trajectory(
                initial=config.copy(),
                times=times,
                bonds=bond_idx.astype(np.int64) + config.lo,
                swapped=swapped,
                left_labels=left,
                right_labels=right,
                horizon=horizon,
            )
        )
    return out[0], out[1]


def position_of(config: Configuration, label: int) -> int:
    """Site of the unique cell carrying ``label``."""
    hits = np.nonzero(config.cells == label)[0]
    if hits.size != 1:
        raise AbsentLabelError(
            f"label {label} present {hits.size} times; expected exactly once"
        )
    return int(hits[0]) + config.lo


# ---------------------------------------------------------------------------
# tagged pairs


@dataclass(eq=False)
class TaggedPairTrack:
    """Hole positions of the two tagged pairs as step functions of time.

    ``times[0]`` is 0 with the initial positions; later entries record
    every pair move.  After the collision time the two positions agree.
    A track is censored when a pair got within one site of the frozen
    window edge, where the truncated dynamics stops being faithful.
    """

    times: np.ndarray    # float64, first entry 0.0
    h_minus: np.ndarray  # int64 positions after each entry
    h_plus: np.ndarray
    t_col: float | None
    censored: bool

    def minus_at(self, t: float) -> int:
        i = max(int(np.searchsorted(self.times, t, side="right")) - 1, 0)
        return int(self.h_minus[i])

    def plus_at(self, t: float) -> int:
        i = max(int(np.searchsorted(self.times, t, side="right")) - 1, 0)
        return int(self.h_plus[i])


def _find_pairs(config: Configuration) -> list[int]:
    cells = config.cells
    holes = (cells[:-1] == HOLE) & (cells[1:] == 1)
    return [int(i) + config.lo for i in np.nonzero(holes)[0]]


def _step_pair(h: int, bond: int) -> int:
    """Move a pair's hole for a swap at ``bond``; position is unchanged otherwise.

    A particle jumping into the hole drags the pair one site left; the
    pair's own particle jumping right pushes it one site right.
    """
    if bond + 1 == h:
        return h - 1
    if bond == h + 1:
        return h + 1
    return h


def tagged_pairs(trajectory: Trajectory) -> TaggedPairTrack:
    """Track the two tagged hole-particle pairs through a TASEP trajectory.

    The initial configuration must contain exactly two hole-particle
    adjacencies (as the two-pair state does).  Collision is detected
    structurally: the single swap that moves the left pair right and the
    right pair left at once, after which one merged pair remains.
    """
    if trajectory.initial.kind != "tasep":
        raise ValueError("tagged pairs are defined for TASEP trajectories")
    pairs = _find_pairs(trajectory.initial)
    if len(pairs) != 2:
        raise ValueError(f"expected exactly two tagged pairs, found {len(pairs)}")
    h_minus, h_plus = pairs
    lo, hi = trajectory.initial.window
    times = [0.0]
    track_minus = [h_minus]
    track_plus = [h_plus]
    t_col: float | None = None
    censored = h_minus - 1 <= lo or h_plus + 2 >= hi
    for i in range(trajectory.event_count):
        if not trajectory.swapped[i]:
            continue
        b = int(trajectory.bonds[i])
        new_minus = _step_pair(h_minus, b)
        new_plus = _step_pair(h_plus, b)
        if new_minus == h_minus and new_plus == h_plus:
            continue
        h_minus, h_plus = new_minus, new_plus
        t = float(trajectory.times[i])
        times.append(t)
        track_minus.append(h_minus)
        track_plus.append(h_plus)
        if t_col is None and h_minus == h_plus:
            t_col = t
        if h_minus - 1 <= lo or h_plus + 2 >= hi:
            censored = True
    return TaggedPairTrack(
        times=np.array(times),
        h_minus=np.array(track_minus, dtype=np.int64),
        h_plus=np.array(track_plus, dtype=np.int64),
        t_col=t_col,
        censored=censored,
    )


# ---------------------------------------------------------------------------
# second-class embedding


def _psi_site(cells: np.ndarray, lo: int, x: int, y: int, z: int) -> int:
    """Label of the embedded three-type state at site z (pointwise rule)."""
    if y >= x + 2:
        if z <= x:
            return int(cells[z - 1 - lo])
        if z == x + 1:
            return 2
        if z <= y - 1:
            return int(cells[z - lo])
        if z == y:
            return 3
        return int(cells[z + 1 - lo])
    # merged case y == x
    if z <= x - 1:
        return int(cells[z - 1 - lo])
    if z == x:
        return 3
    if z == x + 1:
        return 2
    return int(cells[z + 1 - lo])


def psi(x: int, y: int, config: Configuration) -> Configuration:
    """Embed a two-pair TASEP state as a three-type state.

    The pair with hole at x becomes a 2 at x + 1, the pair with hole at y
    becomes a 3 at y; the tail left of x shifts right one site and the
    tail right of y + 1 shifts left one site, shrinking the window by one
    site on each end.  Defined for pair gaps y >= x + 2 and for the
    merged case y == x; the gap y == x + 1 never occurs and is an error.
    """
    if config.kind != "tasep":
        raise ValueError("the embedding applies to TASEP configurations")
    if y != x and y < x + 2:
        raise InvalidGapError(f"pair gap y - x = {y - x} is not 0 or >= 2")
    lo, hi = config.window
    if not (lo <= x and y + 1 <= hi and lo + 1 <= hi - 1):
        raise WindowTooSmallError(
            f"pair positions x={x}, y={y} do not fit window [{lo}, {hi}]"
        )
    cells = config.cells
    out = np.empty(hi - lo - 1, dtype=np.int64)
    for z in range(lo + 1, hi):
        out[z - (lo + 1)] = _psi_site(cells, lo, x, y, z)
    return Configuration(lo + 1, hi - 1, out, "ktype", k=3)


def _map_bond(b: int, h_minus: int, h_plus: int) -> int | None:
    """Bond correspondence of the embedding; None for pair-interior bonds."""
    if b == h_minus or b == h_plus:
        return None
    if b < h_minus:
        return b + 1
    if b < h_plus:
        return b
    return b - 1


def three_type_from_tagged(
    trajectory: Trajectory, track: TaggedPairTrack | None = None
) -> Trajectory:
    """Pointwise embedding of a two-pair TASEP trajectory, up to collision.

    Every ring of the source trajectory maps to a ring of the embedded
    process at the corresponding bond (pair-interior bonds, which can
    never swap, are dropped).  The result is a three-type trajectory on
    the shrunk window whose swaps are exactly the source swaps; it ends
    at the collision time when there is one, with the merged embedding
    applied at that final event.  A supplied pair track is only used to
    cross-check the collision time.
    """
    pairs = _find_pairs(trajectory.initial)
    if len(pairs) != 2:
        raise ValueError(f"expected exactly two tagged pairs, found {len(pairs)}")
    h_minus, h_plus = pairs
    lo, hi = trajectory.initial.window
    initial3 = psi(h_minus, h_plus, trajectory.initial)
    cells = trajectory.initial.cells.copy()
    out_t: list[float] = []
    out_b: list[int] = []
    out_s: list[bool] = []
    out_l: list[int] = []
    out_r: list[int] = []
    horizon = trajectory.horizon
    for i in range(trajectory.event_count):
        b = int(trajectory.bonds[i])
        swapped = bool(trajectory.swapped[i])
        mapped = _map_bond(b, h_minus, h_plus)
        if mapped is None:
            if swapped:
                raise RuntimeError("pair-interior bond swapped; trajectory inconsistent")
            continue
        out_t.append(float(trajectory.times[i]))
        out_b.append(mapped)
        out_s.append(swapped)
        out_l.append(_psi_site(cells, lo, h_minus, h_plus, mapped))
        out_r.append(_psi_site(cells, lo, h_minus, h_plus, mapped + 1))
        if swapped:
            bi = b - lo
            cells[bi], cells[bi + 1] = cells[bi + 1], cells[bi]
            h_minus = _step_pair(h_minus, b)
            h_plus = _step_pair(h_plus, b)
            if h_minus == h_plus:
                horizon = float(trajectory.times[i])
                break
    if track is not None and track.t_col is not None and track.t_col != horizon:
        raise RuntimeError(
            f"supplied track collides at {track.t_col} but the replay ends at {horizon}"
        )
    return Trajectory(
        initial=initial3,
        times=np.array(out_t),
        bonds=np.array(out_b, dtype=np.int64),
        swapped=np.array(out_s, dtype=np.bool_),
        left_labels=np.array(out_l, dtype=np.int64),
        right_labels=np.array(out_r, dtype=np.int64),
        horizon=horizon,
    )


def verify_three_type_coupling(trajectory: Trajectory) -> list[str]:
    """Check that the embedded process is a genuine three-type TASEP path.

    Replays the source trajectory next to a directly simulated three-type
    process driven by the mapped clock stream and compares them: the swap
    decisions must agree ring by ring, the second-class positions must
    satisfy pos(2) = hole(-pair) + 1 and pos(3) = hole(+pair) at every
    event before collision, and at the collision event the merged
    embedding must reproduce the direct state exactly.  Returns a list of
    failure descriptions (empty when the coupling holds).
    """
    failures: list[str] = []
    pairs = _find_pairs(trajectory.initial)
    if len(pairs) != 2:
        return [f"expected exactly two tagged pairs, found {len(pairs)}"]
    h_minus, h_plus = pairs
    lo, hi = trajectory.initial.window
    xi = trajectory.initial.cells.copy()
    direct = psi(h_minus, h_plus, trajectory.initial)
    dcells = direct.cells
    dlo = direct.lo
    for i in range(trajectory.event_count):
        t = float(trajectory.times[i])
        b = int(trajectory.bonds[i])
        swapped = bool(trajectory.swapped[i])
        mapped = _map_bond(b, h_minus, h_plus)
        if mapped is None:
            if swapped:
                failures.append(f"t={t}: pair-interior bond {b} swapped")
            continue
        mi = mapped - dlo
        d_left = dcells[mi]
        d_right = dcells[mi + 1]
        d_swap = d_left < d_right
        if bool(d_swap) != swapped:
            failures.append(
                f"t={t}: swap decision differs at mapped bond {mapped} "
                f"(direct {bool(d_swap)}, embedded {swapped})"
            )
            break
        if swapped:
            dcells[mi], dcells[mi + 1] = dcells[mi + 1], dcells[mi]
            bi = b - lo
            xi[bi], xi[bi + 1] = xi[bi + 1], xi[bi]
            h_minus = _step_pair(h_minus, b)
            h_plus = _step_pair(h_plus, b)
            collided = h_minus == h_plus
            # spot-check the embedding at the touched sites
            for z in (mapped, mapped + 1):
                want = _psi_site(xi, lo, h_minus, h_plus, z)
                if dcells[z - dlo] != want:
                    failures.append(
                        f"t={t}: direct state at {z} is {int(dcells[z - dlo])}, "
                        f"embedding gives {want}"
                    )
            if collided:
                expect = np.array(
                    [_psi_site(xi, lo, h_minus, h_plus, z) for z in range(dlo, direct.hi + 1)],
                    dtype=np.int64,
                )
                if not np.array_equal(expect, dcells):
                    failures.append(f"t={t}: merged embedding differs from direct state")
                return failures
    expect = np.array(
        [_psi_site(xi, lo, h_minus, h_plus, z) for z in range(dlo, direct.hi + 1)],
        dtype=np.int64,
    )
    if not np.array_equal(expect, dcells):
        failures.append("final embedding differs from the directly driven state")
    return failures


# ---------------------------------------------------------------------------
# passage-grid driven TASEP


@dataclass(eq=False)
class RostLabeling:
    """Labeled particle and hole motion of the grid-driven TASEP.

    Particle j starts at -j and moves right one site per exchange; hole i
    starts at i + 1 and moves left one site per exchange.  The exchange
    of particle j and hole i happens exactly at the grid time G(i, j),
    and both label families stay sorted over time.
    """

    hole_index: np.ndarray      # i per exchange, time-ordered
    particle_index: np.ndarray  # j per exchange
    times: np.ndarray
    width: int
    height: int
    _by_particle: list[np.ndarray] = field(init=False, repr=False)
    _by_hole: list[np.ndarray] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        by_p: list[list[float]] = [[] for _ in range(self.height)]
        by_h: list[list[float]] = [[] for _ in range(self.width)]
        for i, j, t in zip(self.hole_index, self.particle_index, self.times):
            by_p[j].append(t)
            by_h[i].append(t)
        self._by_particle = [np.array(ts) for ts in by_p]
        self._by_hole = [np.array(ts) for ts in by_h]

    def particle_position(self, j: int, t: float) -> int:
        """Position of particle j right after every exchange with time <= t."""
        return -j + bisect_right(self._by_particle[j], t)

    def hole_position(self, i: int, t: float) -> int:
        return i + 1 - bisect_right(self._by_hole[i], t)

    def exchange_log(self):
        """Time-ordered (i, j, time) exchange triples."""
        for i, j, t in zip(self.hole_index, self.particle_index, self.times):
            yield int(i), int(j), float(t)


def rost_tasep(grid: PassageGrid, horizon: float) -> tuple[Trajectory, RostLabeling]:
    """Deterministic TASEP built from a passage-time grid.

    Exchanges are the grid sites with time <= horizon, sorted by time.
    The grid must contain the whole sub-level set: if any edge site is
    already infected by the horizon, exchanges outside the grid could be
    missing and the construction refuses to run.
    """
    g = grid.times
    edge_min = min(float(g[-1, :].min()), float(g[:, -1].min()))
    if edge_min <= horizon:
        raise HorizonExceedsWindowError(
            f"sub-level set at horizon {horizon} touches the grid edge "
            f"(first edge infection at {edge_min})"
        )
    mask = g <= horizon
    xs, ys = np.nonzero(mask)
    gs = g[xs, ys]
    order = np.lexsort((ys, xs, gs))
    hole_idx = xs[order].astype(np.int64)
    part_idx = ys[order].astype(np.int64)
    times = gs[order]
    lo, hi = -(grid.height - 1), grid.width
    initial = step_tasep((lo, hi))
    pos_p = -np.arange(grid.height, dtype=np.int64)
    pos_h = np.arange(grid.width, dtype=np.int64) + 1
    bonds = np.empty(times.shape[0], dtype=np.int64)
    for k in range(times.shape[0]):
        i = hole_idx[k]
        j = part_idx[k]
        p = pos_p[j]
        if pos_h[i] != p + 1:
            raise RuntimeError(
                f"exchange ({i}, {j}) at non-adjacent positions; grid inconsistent"
            )
        bonds[k] = p
        pos_p[j] = p + 1
        pos_h[i] = p
    n = times.shape[0]
    trajectory = Trajectory(
        initial=initial,
        times=times,
        bonds=bonds,
        swapped=np.ones(n, dtype=np.bool_),
        left_labels=np.ones(n, dtype=np.int64),
        right_labels=np.full(n, HOLE, dtype=np.int64),
        horizon=horizon,
    )
    labeling = RostLabeling(
        hole_index=hole_idx,
        particle_index=part_idx,
        times=times,
        width=grid.width,
        height=grid.height,
    )
    return trajectory, labeling


def largest_safe_horizon(grid: PassageGrid) -> float:
    """Largest horizon the grid can realize: just below the first edge infection."""
    g = grid.times
    edge_min = min(float(g[-1, :].min()), float(g[:, -1].min()))
    return float(np.nextafter(edge_min, -np.inf))


# ---------------------------------------------------------------------------
# infected region -> configuration


def _heights_from_infected(infected) -> np.ndarray:
    pts = {(int(x), int(y)) for x, y in infected}
    if not pts:
        return np.zeros(0, dtype=np.int64)
    for x, y in pts:
        if x < 0 or y < 0:
            raise NotDownClosedError(f"site ({x}, {y}) outside the quadrant")
        if x > 0 and (x - 1, y) not in pts:
            raise NotDownClosedError(f"site ({x}, {y}) lacks predecessor ({x - 1}, {y})")
        if y > 0 and (x, y - 1) not in pts:
            raise NotDownClosedError(f"site ({x}, {y}) lacks predecessor ({x}, {y - 1})")
    max_x = max(x for x, _ in pts)
    heights = np.zeros(max_x + 1, dtype=np.int64)
    for x, _ in pts:
        heights[x] += 1
    return heights


def _staircase_cells(heights: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Read the border of a staircase region as labels on [lo, hi].

    The border is walked from north to east in the dual lattice; vertical
    unit segments become particles and horizontal ones holes.  The origin
    of the line is the last segment lying before the diagonal y = x: a
    vertical segment at dual abscissa x - 1/2 and center height y is
    before the diagonal iff y >= x, a horizontal segment on top of column
    x at height h iff h >= x + 1.
    """
    n_cols = int(heights.shape[0])
    h0 = int(heights[0]) if n_cols else 0
    pad = abs(lo) + abs(hi) + 4
    labels: list[bool] = []  # True for a vertical segment (particle)
    before: list[bool] = []
    for x in range(n_cols + pad + 1):
        hx = int(heights[x]) if x < n_cols else 0
        if x == 0:
            hprev = h0 + pad
        elif x - 1 < n_cols:
            hprev = int(heights[x - 1])
        else:
            hprev = 0
        for yy in range(hprev - 1, hx - 1, -1):
            labels.append(True)
            before.append(yy >= x)
        labels.append(False)
        before.append(hx >= x + 1)
    origin = max(i for i, flag in enumerate(before) if flag)
    if origin + lo < 0 or origin + hi >= len(labels):
        raise RuntimeError("staircase padding too small")  # unreachable by construction
    return np.array(
        [1 if labels[origin + s] else HOLE for s in range(lo, hi + 1)], dtype=np.int64
    )


def border_to_config(infected, window: tuple[int, int]) -> Configuration:
    """Configuration read off the border of a down-left-closed infected set.

    The empty set gives the step profile; adding infected sites one by
    one reproduces the grid-driven TASEP states.
    """
    heights = _heights_from_infected(infected)
    lo, hi = window
    return Configuration(lo, hi, _staircase_cells(heights, lo, hi), "tasep")


# ---------------------------------------------------------------------------
# multi-type observables


def overtake_time(trajectory: Trajectory, m: int) -> float | None:
    """First time label 0 sits strictly right of labels 1..m+1, if any.

    Censored runs (no overtake within the horizon) return None.
    """
    if trajectory.initial.kind != "multi":
        raise ValueError("overtaking is tracked on fully labeled trajectories")
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    pos = {lab: position_of(trajectory.initial, lab) for lab in range(0, m + 2)}
    if pos[0] > max(pos[lab] for lab in range(1, m + 2)):
        return 0.0
    for i in range(trajectory.event_count):
        if not trajectory.swapped[i]:
            continue
        left = int(trajectory.left_labels[i])
        right = int(trajectory.right_labels[i])
        b = int(trajectory.bonds[i])
        moved = False
        if 0 <= left <= m + 1:
            pos[left] = b + 1
            moved = True
        if 0 <= right <= m + 1:
            pos[right] = b
            moved = True
        if moved and pos[0] > max(pos[lab] for lab in range(1, m + 2)):
            return float(trajectory.times[i])
    return None
