"""Exp(1) weight fields on rectangles of the nonnegative quadrant.

A weight field assigns an independent unit-rate exponential delay to
every site (x, y) with 0 <= x < width and 0 <= y < height.  The integer
statistic computed by :func:`compute_N` measures the head start of the
bottom row over the first column site: it is the largest m >= 1 such
that w(1,0) + ... + w(m,0) < w(0,1), and 0 when already w(1,0) >= w(0,1).

Conditioning a field on a given value of that statistic is done by
rejection on the bottom-row weights and w(0,1), which are the only
weights the statistic depends on; everything else is drawn once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooSmallError, WindowExhaustedError, WindowTooSmallError
from .rng import Seed, exponential

__all__ = ["WeightField", "sample_field", "compute_N", "sample_conditioned_on_N"]

MIN_SIDE = 3  # sources (2,0) and (0,2) must exist


@dataclass(frozen=True)
class WeightField:
    """Rectangle of positive site weights; ``weights[x, y]`` is the delay at (x, y)."""

    width: int
    height: int
    weights: np.ndarray  # float64, shape (width, height)

    def __post_init__(self) -> None:
        if self.weights.shape != (self.width, self.height):
            raise ValueError("weights array does not match the declared dimensions")

    def weight(self, x: int, y: int) -> float:
        return float(self.weights[x, y])


def sample_field(seed: Seed, width: int, height: int) -> WeightField:
    """Draw a fresh field of i.i.d. Exp(1) weights from the seed's stream.

    Pure function of (seed, width, height): the same arguments always
    return a bit-identical field.
    """
    if width < MIN_SIDE or height < MIN_SIDE:
        raise DimensionTooSmallError(
            f"field must be at least {MIN_SIDE}x{MIN_SIDE}, got {width}x{height}"
        )
    rng = seed.generator()
    weights = exponential(rng, (width, height))
    return WeightField(width, height, weights)


def compute_N(field: WeightField) -> int:
    """Largest m >= 1 with w(1,0) + ... + w(m,0) < w(0,1), or 0 if none.

    Raises :class:`WindowExhaustedError` when the running bottom-row sum
    never reaches w(0,1) inside the field, since then the maximum cannot
    be certified; the caller must widen the field.
    """
    row_sums = np.cumsum(field.weights[1:, 0])
    w01 = field.weights[0, 1]
    if row_sums[-1] < w01:
        raise WindowExhaustedError(
            "bottom-row running sum stays below w(0,1) inside the field; widen the window"
        )
    # First index where the running sum reaches w(0,1); the head start is
    # the number of strictly smaller partial sums before it.
    return int(np.searchsorted(row_sums, w01, side="left"))


def _accepts(weights: np.ndarray, target: int) -> bool:
    """True when the head-start statistic of ``weights`` equals ``target`` >= 1.

    Decidable from the first target+1 partial sums alone, so no window
    exhaustion can occur when width > target + 1.
    """
    w01 = weights[0, 1]
    partial = np.cumsum(weights[1 : target + 2, 0])
    return bool(partial[target - 1] < w01 <= partial[target])


def sample_conditioned_on_N(seed: Seed, m: int, width: int, height: int) -> WeightField:
    """Field distributed as an unconditioned draw given head start m + 1.

    Rejection sampling: the full rectangle is drawn once, then only the
    bottom row w(k,0), k >= 1, and w(0,1) are redrawn until the statistic
    equals m + 1.  Acceptance probability is 2**-(m+2) per round.
    """
    field, _ = _sample_conditioned_with_rounds(seed, m, width, height)
    return field


def _sample_conditioned_with_rounds(
    seed: Seed, m: int, width: int, height: int
) -> tuple[WeightField, int]:
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    if width <= m + 2:
        raise WindowTooSmallError(
            f"width must exceed m + 2 = {m + 2} so the statistic is decidable, got {width}"
        )
    if width < MIN_SIDE or height < MIN_SIDE:
        raise DimensionTooSmallError(
            f"field must be at least {MIN_SIDE}x{MIN_SIDE}, got {width}x{height}"
        )
    rng = seed.generator()
    weights = exponential(rng, (width, height))
    target = m + 1
    rounds = 1
    while not _accepts(weights, target):
        weights[1:, 0] = exponential(rng, width - 1)
        weights[0, 1] = exponential(rng, 1)[0]
        rounds += 1
    return WeightField(width, height, weights), rounds
