"""Reference BP decoder over full probability vectors of length 2^m.

Check nodes convolve in the transform domain; labels permute vector entries.
Nothing here uses the subspace tables, so it serves as an independent check
of :mod:`subspace_bp`.
"""

from __future__ import annotations

import numpy as np

from ..gf2 import apply_matrix
from .graph import TannerGraph
from .subspace_bp import DecodeTrace
from .wht import iwht, wht

__all__ = ["bp_decode_probvec", "channel_messages", "MAX_PROBVEC_ENTRIES"]

# edges * 2^m floats kept per message array
MAX_PROBVEC_ENTRIES = 50_000_000
_SNAP = 1e-12


def channel_messages(erased: np.ndarray) -> np.ndarray:
    """Uniform distribution over symbols agreeing with the unerased bits (all zero)."""
    erased = np.asarray(erased, dtype=bool)
    n, m = erased.shape
    pattern = erased.astype(np.int64) @ (1 << np.arange(m))
    alpha = np.arange(1 << m)
    allowed = (alpha[None, :] & ~pattern[:, None]) == 0
    return allowed / allowed.sum(axis=1, keepdims=True)


def _normalize(x: np.ndarray) -> np.ndarray:
    x = np.where(x < _SNAP, 0.0, x)
    return x / x.sum(axis=-1, keepdims=True)


def _support_dim(x: np.ndarray) -> np.ndarray:
    return np.round(np.log2(np.count_nonzero(x > 0, axis=-1))).astype(int)


def bp_decode_probvec(
    g: TannerGraph,
    erased: np.ndarray,
    max_iter: int = 100,
    stop_on_success: bool = True,
    record: bool = False,
) -> DecodeTrace:
    m = g.m
    q = 1 << m
    E = g.n_edges
    if E * q > MAX_PROBVEC_ENTRIES:
        raise ValueError(f"{E} edges x {q} entries exceeds the probability-vector budget")
    chan = channel_messages(erased)
    # img[e, a] = W_e a
    img = np.array([apply_matrix(W, np.arange(q)) for W in g.labels]).reshape(E, q)
    rows = np.arange(E)[:, None]

    c2v = np.full((E, q), 1.0 / q)
    v2c = None
    decision = chan.copy()
    hists, messages = [], []
    success = bool(np.all(_support_dim(decision) == 0))
    iterations = rounds = 0
    while rounds < max_iter and not (success and stop_on_success):
        var_side = np.empty((E, q))
        for d, (nodes, edges) in g.var_groups.items():
            inc = c2v[edges]
            for t in range(d):
                acc = chan[nodes].copy()
                for s in range(d):
                    if s != t:
                        acc *= inc[:, s]
                var_side[edges[:, t]] = _normalize(acc)
        # edge action: out[W a] = in[a]
        new_v = np.empty_like(var_side)
        new_v[rows, img] = var_side
        hists.append(np.bincount(_support_dim(new_v), minlength=m + 1))
        spectrum = wht(new_v)
        chk_side = np.empty((E, q))
        for d, (nodes, edges) in g.chk_groups.items():
            inc = spectrum[edges]
            for t in range(d):
                acc = np.ones((len(nodes), q))
                for s in range(d):
                    if s != t:
                        acc = acc * inc[:, s]
                chk_side[edges[:, t]] = _normalize(iwht(acc))
        # inverse edge action: out[a] = in[W a]
        new_c = chk_side[rows, img]
        rounds += 1
        if record:
            messages.append((new_v.copy(), new_c.copy()))
        for d, (nodes, edges) in g.var_groups.items():
            acc = chan[nodes].copy()
            for s in range(d):
                acc *= new_c[edges[:, s]]
            decision[nodes] = _normalize(acc)
        fixed = v2c is not None and np.array_equal(new_v, v2c) and np.array_equal(new_c, c2v)
        v2c, c2v = new_v, new_c
        if not success:
            iterations = rounds
            success = bool(np.all(_support_dim(decision) == 0))
        if fixed:
            break
    dims = _support_dim(decision)
    undetermined = np.zeros((g.n_var, m), dtype=bool)
    for a in range(q):
        bits = ((a >> np.arange(m)) & 1).astype(bool)
        undetermined |= (decision[:, a] > 0)[:, None] & bits[None, :]
    return DecodeTrace(
        hist=np.array(hists).reshape(-1, m + 1),
        success=success,
        iterations=iterations,
        rounds=rounds,
        erased_symbols=int(np.count_nonzero(dims)),
        erased_bits=int(undetermined.sum()),
        n_symbols=g.n_var,
        m=m,
        messages=messages,
    )
