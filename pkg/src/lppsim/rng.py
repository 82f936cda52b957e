"""Reproducible random streams for parallel Monte Carlo trials.

Every trial draws from its own counter-based stream keyed by a
(master, trial_index) pair of unsigned 64-bit integers.  Equal keys give
bit-identical streams; distinct trial indices under one master give
statistically independent streams.  Trials can therefore run in any
order on any number of workers without changing a single result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Seed", "substream", "exponential"]

_TINY = np.nextafter(0.0, 1.0)  # smallest positive double


@dataclass(frozen=True)
class Seed:
    """Key of one reproducible random stream."""

    master: int
    trial_index: int = 0

    def __post_init__(self) -> None:
        for name in ("master", "trial_index"):
            value = getattr(self, name)
            if not 0 <= int(value) < 2**64:
                raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {value!r}")

    def with_trial(self, trial_index: int) -> "Seed":
        return Seed(self.master, trial_index)

    def generator(self) -> np.random.Generator:
        return substream(self.master, self.trial_index)


def substream(master: int, trial_index: int) -> np.random.Generator:
    """Counter-based generator for one (master, trial_index) key.

    The two key words of a 128-bit Philox key are the master seed and the
    trial index, so streams for distinct trials never overlap.
    """
    key = np.array([master, trial_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def exponential(rng: np.random.Generator, size) -> np.ndarray:
    """Unit-rate exponential draws via the inverse transform -log(1 - U).

    U is uniform on [0, 1), so the transform is branch-free and always
    finite.  The measure-zero draw U = 0 would yield weight 0, which the
    weight-field contract forbids; it is clamped to the smallest positive
    double instead.
    """
    u = rng.random(size)
    w = -np.log1p(-u)
    return np.maximum(w, _TINY, out=w)
