"""BP over the BEC with messages represented as subspaces of GF(2)^m."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import subspace_algebra
from .graph import TannerGraph

__all__ = ["DecodeTrace", "bp_decode_subspace", "label_tables"]


@dataclass
class DecodeTrace:
    """Outcome of one decode.

    ``hist[l]`` counts variable-to-check messages of each dimension in round
    ``l + 1`` (round 1 carries the channel messages). ``iterations`` is the
    round after which every symbol was determined, or the number of rounds
    run if that never happened. ``messages`` holds per-round
    ``(var_to_check, check_to_var)`` when recording is on; the subspace
    decoder stores subspace ids, the probability decoder full vectors.
    """

    hist: np.ndarray
    success: bool
    iterations: int
    rounds: int
    erased_symbols: int
    erased_bits: int
    n_symbols: int
    m: int
    messages: list = field(default_factory=list, repr=False)

    @property
    def symbol_erasure_rate(self) -> float:
        return self.erased_symbols / self.n_symbols

    @property
    def bit_erasure_rate(self) -> float:
        return self.erased_bits / (self.n_symbols * self.m)


def label_tables(g: TannerGraph, act):
    """Unique labels, per-edge label index, and their forward/inverse actions."""
    flat = g.labels.reshape(g.n_edges, -1)
    uniq, idx = np.unique(flat, axis=0, return_inverse=True)
    mats = uniq.reshape(-1, g.m, g.m)
    fwd = np.array([act(W) for W in mats])
    inv = np.argsort(fwd, axis=1)
    return idx.ravel(), fwd, inv


def _leave_one_out(table: np.ndarray, msgs: np.ndarray, start: np.ndarray | int) -> tuple[np.ndarray, np.ndarray]:
    # msgs: (count, d) ids; returns per-position combination of the others and of all
    count, d = msgs.shape
    out = np.empty_like(msgs)
    for t in range(d):
        acc = np.broadcast_to(start, (count,)).copy()
        for s in range(d):
            if s != t:
                acc = table[acc, msgs[:, s]]
        out[:, t] = acc
    full = table[out[:, 0], msgs[:, 0]] if d else np.broadcast_to(start, (count,)).copy()
    return out, full


def bp_decode_subspace(
    g: TannerGraph,
    erased: np.ndarray,
    max_iter: int = 100,
    stop_on_success: bool = True,
    record: bool = False,
) -> DecodeTrace:
    """Flooding BP; every message is a subspace id of :func:`subspace_algebra`.

    Runs until all symbols are determined (when ``stop_on_success``), the
    messages reach a fixed point, or ``max_iter`` rounds.
    """
    alg = subspace_algebra(g.m)
    m = g.m
    pattern = np.asarray(erased, dtype=np.int64) @ (1 << np.arange(m))
    chan = alg.coordinate[pattern]
    lab, fwd, inv = label_tables(g, alg.action)
    E = g.n_edges

    c2v = np.full(E, alg.full, dtype=np.int64)
    v2c = np.full(E, -1, dtype=np.int64)
    decision = chan.copy()
    hists, messages = [], []
    success = bool(np.all(alg.dims[decision] == 0))
    iterations = 0
    rounds = 0
    while rounds < max_iter and not (success and stop_on_success):
        new_v = np.empty(E, dtype=np.int64)
        for d, (nodes, edges) in g.var_groups.items():
            out, _ = _leave_one_out(alg.intersect, c2v[edges], chan[nodes])
            new_v[edges] = out
        new_v = fwd[lab, new_v]
        hists.append(np.bincount(alg.dims[new_v], minlength=m + 1))
        new_c = np.empty(E, dtype=np.int64)
        for d, (nodes, edges) in g.chk_groups.items():
            out, _ = _leave_one_out(alg.sum, new_v[edges], alg.zero)
            new_c[edges] = out
        new_c = inv[lab, new_c]
        rounds += 1
        if record:
            messages.append((new_v.copy(), new_c.copy()))
        for d, (nodes, edges) in g.var_groups.items():
            _, full = _leave_one_out(alg.intersect, new_c[edges], chan[nodes])
            decision[nodes] = full
        fixed = np.array_equal(new_v, v2c) and np.array_equal(new_c, c2v)
        v2c, c2v = new_v, new_c
        if not success:
            iterations = rounds
            success = bool(np.all(alg.dims[decision] == 0))
        if fixed:
            break
    return DecodeTrace(
        hist=np.array(hists).reshape(-1, m + 1),
        success=success,
        iterations=iterations,
        rounds=rounds,
        erased_symbols=int(np.count_nonzero(alg.dims[decision])),
        erased_bits=int(alg.support_size[decision].sum()),
        n_symbols=g.n_var,
        m=m,
        messages=messages,
    )
