import numpy as np

from lppsim import WeightField


def explicit_field(entries, width=5, height=5, fill=1.0):
    """Field with the given {(x, y): weight} entries and a constant fill."""
    weights = np.full((width, height), fill, dtype=np.float64)
    for (x, y), value in entries.items():
        weights[x, y] = value
    return WeightField(width, height, weights)


def early_death_field(width=5, height=5):
    """Deterministic field whose center cluster is exactly its source.

    Corner weights satisfy min(w(1,0)+w(2,0), w(0,1)+w(0,2)) >
    w(1,1) + max(w(1,0), w(0,1)); the constant fill keeps the rest tame.
    """
    return explicit_field(
        {(1, 0): 1.0, (0, 1): 1.0, (2, 0): 5.0, (0, 2): 5.0, (1, 1): 0.1},
        width=width,
        height=height,
    )
