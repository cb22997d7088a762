"""Lookup tables for the lattice of subspaces of GF(2)^m.

Every subspace gets an integer id; sums, intersections and the action of a
label matrix become array lookups. Tables grow like (number of subspaces)^2,
so this is meant for m <= 5 (374 subspaces).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..gf2 import SubspaceBasis, all_subspaces, apply_matrix

__all__ = ["SubspaceAlgebra", "subspace_algebra", "MAX_TABLE_M"]

MAX_TABLE_M = 5


class SubspaceAlgebra:
    def __init__(self, m: int):
        if not 1 <= m <= MAX_TABLE_M:
            raise ValueError(f"subspace tables support 1 <= m <= {MAX_TABLE_M}, got {m}")
        self.m = m
        self.q = 1 << m
        self.subspaces: list[SubspaceBasis] = all_subspaces(m)
        n = len(self.subspaces)
        self.dims = np.array([s.dim for s in self.subspaces])
        self.member = np.zeros((n, self.q), dtype=bool)
        for i, s in enumerate(self.subspaces):
            self.member[i, s.elements()] = True
        self._weights = (1 << np.arange(self.q, dtype=np.int64))
        self.masks = self.member.astype(np.int64) @ self._weights
        self._order = np.argsort(self.masks)
        self._sorted = self.masks[self._order]
        self.zero = int(self.lookup(np.array([1]))[0])
        self.full = int(self.lookup(np.array([(1 << self.q) - 1]))[0])
        self.intersect = self.lookup(self.masks[:, None] & self.masks[None, :])
        self.sum = self._sum_table()
        # coordinate subspaces indexed by the erasure pattern (bit j = coordinate j erased)
        pats = np.arange(self.q)
        allowed = (pats[None, :] & ~pats[:, None]) == 0
        self.coordinate = self.lookup(allowed.astype(np.int64) @ self._weights)
        self.support_size = np.array([int(s.support().sum()) for s in self.subspaces])

    def lookup(self, masks: np.ndarray) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.int64)
        pos = np.searchsorted(self._sorted, masks)
        pos = np.minimum(pos, len(self._sorted) - 1)
        if not np.all(self._sorted[pos] == masks):
            raise ValueError("mask is not a subspace")
        return self._order[pos]

    def _sum_table(self) -> np.ndarray:
        n = len(self.subspaces)
        elems = [np.flatnonzero(row) for row in self.member]
        table = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                s = np.unique((elems[a][:, None] ^ elems[b][None, :]).ravel())
                table[a, b] = table[b, a] = self.lookup(np.array([int(np.sum(self._weights[s]))]))[0]
        return table

    def action(self, W: np.ndarray) -> np.ndarray:
        """Permutation of subspace ids induced by ``x -> W x``."""
        img = apply_matrix(W, np.arange(self.q))
        moved = np.zeros_like(self.member)
        moved[:, img] = self.member
        return self.lookup(moved.astype(np.int64) @ self._weights)

    def id_of(self, s: SubspaceBasis) -> int:
        return int(self.lookup(np.array([s.mask()]))[0])


@lru_cache(maxsize=None)
def subspace_algebra(m: int) -> SubspaceAlgebra:
    return SubspaceAlgebra(m)
