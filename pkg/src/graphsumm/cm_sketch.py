"""Count-min sketch over a supernode's scaled neighbor vector.

Coordinate i of the vector carries cross_e(a,i)/sqrt(size_n(i)); the sketch
supports signed coordinate updates (needed when merges move mass between
coordinates) and a row-minimum inner-product estimate. Because every cell is
a sum of final coordinate values and all final values are non-negative, each
row's dot product is the true inner product plus non-negative collision
terms, so the estimate never underestimates; one row overshoots the true
value by more than ||A||_1 * ||B||_1 / width with probability at most ~1/2
under pairwise-independent hashing, and taking the minimum over d rows
drives the failure probability down exponentially in d.

All sketches of one run must share the same hash seeds: that is what makes
cell-wise addition of two sketches equal the sketch of the summed vectors.
"""

from __future__ import annotations

import random

import numpy as np

_MERSENNE_61 = (1 << 61) - 1


def make_hash_seeds(depth: int, master_seed: int) -> tuple[tuple[int, int], ...]:
    """One (multiplier, offset) pair per row, derived from a master seed."""
    if depth < 1:
        raise ValueError("depth must be positive")
    rng = random.Random(master_seed)
    return tuple((rng.randrange(1, _MERSENNE_61), rng.randrange(_MERSENNE_61))
                 for _ in range(depth))


class CountMinSketch:
    __slots__ = ("width", "depth", "seeds", "cells", "l1_mass")

    def __init__(self, width: int, depth: int, seeds: tuple[tuple[int, int], ...]):
        if width < 1 or depth < 1:
            raise ValueError(f"width and depth must be positive, got {width}, {depth}")
        if len(seeds) != depth:
            raise ValueError(f"need {depth} hash seeds, got {len(seeds)}")
        self.width = width
        self.depth = depth
        self.seeds = seeds
        self.cells = np.zeros((depth, width))
        self.l1_mass = 0.0

    def bucket(self, row: int, coordinate: int) -> int:
        a, b = self.seeds[row]
        return ((a * coordinate + b) % _MERSENNE_61) % self.width

    def update(self, coordinate: int, delta: float) -> None:
        """Add delta to one coordinate (all rows). Caller guarantees the
        true value of every coordinate stays non-negative."""
        cells = self.cells
        width = self.width
        for row, (a, b) in enumerate(self.seeds):
            cells[row, ((a * coordinate + b) % _MERSENNE_61) % width] += delta
        self.l1_mass += delta

    def row_sums(self) -> np.ndarray:
        return self.cells.sum(axis=1)

    def _check_compatible(self, other: "CountMinSketch") -> None:
        if (self.width != other.width or self.depth != other.depth
                or self.seeds != other.seeds):
            raise ValueError("incompatible sketches")

    def inner_product_estimate(self, other: "CountMinSketch",
                               exclude: tuple = ()) -> float:
        """Minimum over rows of the cell-wise dot product; never below the
        true inner product of the sketched vectors.

        ``exclude`` holds (coordinate, self_value, other_value) triples whose
        known contributions are removed from the respective sketches before
        the product is taken, as if those coordinates had never been inserted.
        The overestimate guarantee then applies to the reduced vectors.
        """
        self._check_compatible(other)
        best = None
        for row in range(self.depth):
            prod = float(np.dot(self.cells[row], other.cells[row]))
            if exclude:
                prod += self._exclusion_delta(other, row, exclude)
            if best is None or prod < best:
                best = prod
        return best

    def _exclusion_delta(self, other: "CountMinSketch", row: int,
                         exclude: tuple) -> float:
        # Only the buckets hit by excluded coordinates change, so recompute
        # just those products. Multiple exclusions may share a bucket.
        reduced: dict[int, list[float]] = {}
        for coordinate, self_value, other_value in exclude:
            j = self.bucket(row, coordinate)
            if j not in reduced:
                reduced[j] = [float(self.cells[row, j]), float(other.cells[row, j])]
            reduced[j][0] -= self_value
            reduced[j][1] -= other_value
        delta = 0.0
        for j, (x, y) in reduced.items():
            delta += x * y - float(self.cells[row, j]) * float(other.cells[row, j])
        return delta

    @classmethod
    def combined(cls, first: "CountMinSketch", second: "CountMinSketch") -> "CountMinSketch":
        """Sketch of the coordinate-wise sum of two vectors (shared seeds
        make cell-wise addition exact)."""
        first._check_compatible(second)
        merged = cls(first.width, first.depth, first.seeds)
        merged.cells = first.cells + second.cells
        merged.l1_mass = first.l1_mass + second.l1_mass
        return merged
