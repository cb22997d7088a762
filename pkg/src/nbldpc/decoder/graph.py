"""Random Tanner graphs from the configuration model, edge labels, BEC channel."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache

import numpy as np

from ..ensemble import EnsembleSpec, node_perspective
from ..gf2 import field_multiplication_matrix, random_invertible_batch

__all__ = [
    "TannerGraph",
    "sample_graph",
    "sample_labels",
    "field_label_matrices",
    "transmit_bec",
    "degree_counts",
]


@dataclass(frozen=True, eq=False)
class TannerGraph:
    """Bipartite graph as parallel edge arrays.

    Edge ``i`` joins variable ``edge_var[i]`` to check ``edge_chk[i]`` with
    label ``labels[i]`` (an invertible m x m matrix). Multi-edges are allowed.
    """

    n_var: int
    n_chk: int
    m: int
    edge_var: np.ndarray
    edge_chk: np.ndarray
    labels: np.ndarray = field(repr=False)

    @property
    def n_edges(self) -> int:
        return len(self.edge_var)

    @staticmethod
    def _groups(ends: np.ndarray, n_nodes: int) -> dict[int, tuple[np.ndarray, np.ndarray]]:
        order = np.argsort(ends, kind="stable")
        deg = np.bincount(ends, minlength=n_nodes)
        starts = np.concatenate([[0], np.cumsum(deg)[:-1]])
        out = {}
        for d in np.unique(deg):
            if d == 0:
                continue
            nodes = np.flatnonzero(deg == d)
            edges = order[starts[nodes][:, None] + np.arange(d)[None, :]]
            out[int(d)] = (nodes, edges)
        return out

    @cached_property
    def var_groups(self):
        """degree -> (node ids, edge ids of shape (count, degree))."""
        return self._groups(self.edge_var, self.n_var)

    @cached_property
    def chk_groups(self):
        return self._groups(self.edge_chk, self.n_chk)

    def var_degrees(self) -> np.ndarray:
        return np.bincount(self.edge_var, minlength=self.n_var)

    def chk_degrees(self) -> np.ndarray:
        return np.bincount(self.edge_chk, minlength=self.n_chk)


def degree_counts(weights: dict[int, float], total: int) -> dict[int, int]:
    """Largest-remainder rounding of ``total * weights`` to integers."""
    degs = sorted(weights)
    raw = np.array([weights[d] * total for d in degs])
    base = np.floor(raw).astype(int)
    short = total - base.sum()
    order = np.argsort(-(raw - base), kind="stable")
    base[order[:short]] += 1
    return {d: int(c) for d, c in zip(degs, base) if c > 0}


def sample_graph(n: int, e: EnsembleSpec, rng: np.random.Generator) -> TannerGraph:
    """Configuration-model graph with ``n`` variable nodes and identity labels.

    Node degree counts follow the node-perspective distributions. The degree
    of the last check node absorbs any socket imbalance left by rounding.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    var_deg = np.repeat(*zip(*degree_counts(node_perspective(e.lam), n).items()))
    n_edges = int(var_deg.sum())
    n_chk = max(1, int(round(n_edges * sum(w / d for d, w in e.rho.items()))))
    chk_deg = np.repeat(*zip(*degree_counts(node_perspective(e.rho), n_chk).items()))
    chk_deg = chk_deg.astype(int)
    chk_deg[-1] += n_edges - chk_deg.sum()
    if chk_deg[-1] < 2:
        raise ValueError(
            f"cannot balance sockets: {n_edges} variable sockets vs check degrees {np.bincount(chk_deg)}"
        )
    var_sock = np.repeat(np.arange(n), var_deg)
    chk_sock = np.repeat(np.arange(len(chk_deg)), chk_deg)
    chk_sock = chk_sock[rng.permutation(n_edges)]
    labels = np.broadcast_to(np.eye(e.m, dtype=np.uint8), (n_edges, e.m, e.m)).copy()
    return TannerGraph(n, len(chk_deg), e.m, var_sock, chk_sock, labels)


@lru_cache(maxsize=None)
def field_label_matrices(m: int, poly: int) -> np.ndarray:
    """Multiplication matrices of the nonzero field elements 1 .. 2^m - 1."""
    mats = np.array([field_multiplication_matrix(m, poly, a) for a in range(1, 1 << m)])
    mats.setflags(write=False)
    return mats


def sample_labels(g: TannerGraph, e: EnsembleSpec, rng: np.random.Generator) -> TannerGraph:
    if e.is_field:
        mats = field_label_matrices(e.m, e.labels)
        labels = mats[rng.integers(0, len(mats), size=g.n_edges)]
    else:
        labels = random_invertible_batch(e.m, g.n_edges, rng)
    return replace(g, labels=labels)


def transmit_bec(n: int, m: int, eps: float, rng: np.random.Generator) -> np.ndarray:
    """Erasure pattern of the all-zero codeword: ``(n, m)`` bool, True = erased.

    Symbol ``i``'s channel message is uniform on the coordinate subspace
    spanned by its erased bits.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability {eps} outside [0, 1]")
    return rng.random((n, m)) < eps
