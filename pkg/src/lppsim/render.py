"""Deterministic raster images of the three-cluster decomposition.

Images are written as binary PPM (P6) so byte-identical goldens can be
pinned in tests.  Pixel (x, y) takes the color of its source label; the
y axis points upward, so file row 0 holds y = n.
"""

from __future__ import annotations

import numpy as np

from .lpp import PassageGrid, passage_times
from .rng import Seed
from .weights import sample_field

__all__ = ["PALETTE", "cluster_image", "write_ppm", "render_clusters"]

# Row index is the source label code: none, up, center, right.
PALETTE = np.array(
    [
        [0, 0, 0],        # sites with x + y < 2
        [0, 0, 139],      # upper cluster: dark blue
        [135, 206, 235],  # center cluster: light blue
        [220, 20, 60],    # right cluster: red
    ],
    dtype=np.uint8,
)

MAX_RENDER = 4096


def cluster_image(grid: PassageGrid, n: int) -> np.ndarray:
    """RGB array of the (n+1) x (n+1) corner, file row 0 at y = n."""
    if n + 1 > grid.width or n + 1 > grid.height:
        raise ValueError(f"grid {grid.width}x{grid.height} cannot render n={n}")
    labels = grid.source_label[: n + 1, : n + 1]
    return PALETTE[labels.T[::-1, :]]


def write_ppm(path, image: np.ndarray) -> None:
    """Binary PPM: header ``P6\\n<w> <h>\\n255\\n`` then raw RGB rows."""
    height, width = image.shape[:2]
    with open(path, "wb") as handle:
        handle.write(f"P6\n{width} {height}\n255\n".encode("ascii"))
        handle.write(image.astype(np.uint8).tobytes())


def render_clusters(seed: Seed, n: int, path) -> None:
    """Sample a field, label its clusters, and write the image."""
    if n > MAX_RENDER:
        raise ValueError(f"render size n={n} exceeds the cap of {MAX_RENDER}")
    field = sample_field(seed, n + 1, n + 1)
    grid = passage_times(field)
    write_ppm(path, cluster_image(grid, n))
