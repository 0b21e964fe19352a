"""Nearest-neighbor queries over a growing vertex set.

The index is a vectorized linear scan: exact by construction, with the
documented tie rule (smaller id wins).  Ids are dense integers assigned in
insertion order starting at 0.
"""

from __future__ import annotations

import math

import numpy as np

from .cspace import SpaceDefinition, distances_to, validate_config

#: RRG/RRT* neighbor constant, valid for every problem instance.
K_RRG = 2.0 * math.e


def rrg_neighbor_count(n: int) -> int:
    """Number of neighbors to consider when the roadmap holds n vertices:
    ceil(2e * ln(n)), never below 1."""
    if n < 1:
        raise ValueError("vertex count must be >= 1")
    return max(1, math.ceil(K_RRG * math.log(n)))


class NeighborIndex:
    """Append-only store of configurations with metric k-NN queries."""

    def __init__(self, space: SpaceDefinition):
        self.space = space
        self._coords = np.empty((64, space.dimension))
        self._n = 0

    def __len__(self) -> int:
        return self._n

    def insert(self, q: np.ndarray) -> int:
        q = validate_config(self.space, q)
        if self._n == self._coords.shape[0]:
            grown = np.empty((2 * self._n, self.space.dimension))
            grown[: self._n] = self._coords
            self._coords = grown
        vid = self._n
        self._coords[vid] = q
        self._n += 1
        return vid

    def config(self, vid: int) -> np.ndarray:
        if not 0 <= vid < self._n:
            raise IndexError(f"vertex id {vid} out of range")
        return self._coords[vid].copy()

    def coords(self) -> np.ndarray:
        """Read-only view of all stored configurations, in id order."""
        view = self._coords[: self._n]
        view.flags.writeable = False
        return view

    def _dists(self, q: np.ndarray) -> np.ndarray:
        return distances_to(self.space, self._coords[: self._n], q)

    def nearest(self, q: np.ndarray) -> int:
        if self._n == 0:
            raise ValueError("nearest query on an empty index")
        # argmin returns the first (= smallest id) minimizer
        return int(np.argmin(self._dists(q)))

    def k_nearest(self, q: np.ndarray, k: int, exclude: int | None = None) -> list[int]:
        if self._n == 0:
            raise ValueError("k_nearest query on an empty index")
        if k <= 0:
            return []
        d = self._dists(q)
        if exclude is not None:
            d = d.copy()
            d[exclude] = np.inf
        order = np.lexsort((np.arange(self._n), d))
        if exclude is not None:
            order = order[: self._n - 1]
        return [int(i) for i in order[:k]]

    def radius_near(self, q: np.ndarray, r: float, exclude: int | None = None) -> list[int]:
        if r < 0:
            raise ValueError("radius must be nonnegative")
        if self._n == 0:
            return []
        d = self._dists(q)
        ids = np.flatnonzero(d <= r)
        if exclude is not None:
            ids = ids[ids != exclude]
        order = np.lexsort((ids, d[ids]))
        return [int(i) for i in ids[order]]
