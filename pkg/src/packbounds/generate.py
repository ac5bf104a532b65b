"""Reproducible random instances for tests, demos and the ``gen`` command."""
from __future__ import annotations

import random
from fractions import Fraction

from .model import Box, Instance, NormalizedInstance, normalize


def random_instance(dim: int, n: int, seed: int, grid: int = 10,
                    values: bool = False, min_size: int = 1) -> Instance:
    """Container of side ``grid`` in every axis; box sides drawn uniformly
    from ``min_size..grid``; values (if requested) from 1..20."""
    if dim < 1 or n < 0 or grid < 1 or not 1 <= min_size <= grid:
        raise ValueError("need dim >= 1, n >= 0 and 1 <= min_size <= grid")
    rng = random.Random(seed)
    boxes = []
    for k in range(n):
        size = tuple(Fraction(rng.randint(min_size, grid)) for _ in range(dim))
        value = Fraction(rng.randint(1, 20)) if values else None
        boxes.append(Box(str(k + 1), size, value))
    return Instance(dim, (Fraction(grid),) * dim, tuple(boxes))


def random_normalized(dim: int, n: int, seed: int, grid: int = 10,
                      values: bool = False) -> NormalizedInstance:
    return normalize(random_instance(dim, n, seed, grid, values))
