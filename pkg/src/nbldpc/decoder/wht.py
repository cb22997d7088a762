"""Fast Walsh-Hadamard transform and the BEC message-space test."""

from __future__ import annotations

import numpy as np

__all__ = ["wht", "iwht", "message_space_violations"]


def wht(v: np.ndarray) -> np.ndarray:
    """Unnormalised transform along the last axis: ``phi[a] = sum_b psi[b] (-1)^(a.b)``."""
    x = np.array(v, dtype=float)
    q = x.shape[-1]
    if q < 1 or q & (q - 1):
        raise ValueError(f"length {q} is not a power of 2")
    lead = x.shape[:-1]
    h = 1
    while h < q:
        x = x.reshape(*lead, q // (2 * h), 2, h)
        a = x[..., 0, :]
        b = x[..., 1, :]
        x = np.stack([a + b, a - b], axis=-2)
        h *= 2
    return x.reshape(*lead, q)


def iwht(v: np.ndarray) -> np.ndarray:
    return wht(v) / np.shape(v)[-1]


def message_space_violations(psi: np.ndarray, tol: float = 1e-9) -> list[str]:
    """Which properties of a BEC decoder message fail for ``psi``.

    A valid message is uniform on a subspace V, and its transform is the
    indicator of the orthogonal complement of V.
    """
    psi = np.asarray(psi, dtype=float)
    q = len(psi)
    bad = []
    nz = np.flatnonzero(psi > tol)
    if nz.size == 0:
        return ["empty support"]
    if np.ptp(psi[nz]) > tol * max(1.0, psi[nz].max()):
        bad.append("unequal nonzero entries")
    support = np.zeros(q, dtype=bool)
    support[nz] = True
    closed = support[0] and all(support[np.bitwise_xor(nz, a)].all() for a in nz)
    size_ok = (nz.size & (nz.size - 1)) == 0
    if not (closed and size_ok):
        bad.append("support is not a subspace")
    phi = wht(psi / psi.sum())
    if not np.allclose(phi, np.round(phi), atol=1e-7) or not set(np.round(phi)).issubset({0.0, 1.0}):
        bad.append("transform is not an indicator")
    elif closed:
        alphas = np.arange(q)
        dots = np.array(
            [[bin(a & b).count("1") & 1 for b in nz] for a in alphas], dtype=int
        )
        perp = ~dots.any(axis=1)
        if not np.array_equal(np.round(phi).astype(bool), perp):
            bad.append("transform is not the complement indicator")
    return bad
