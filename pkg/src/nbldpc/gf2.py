"""Linear algebra over GF(2): matrices, subspaces, field multiplication.

Matrices are ``uint8`` numpy arrays with entries in {0, 1}. A vector of
GF(2)^m is also identified with the integer ``sum(v[j] << j)``; coordinate
``j`` is bit ``j``. Subspaces are kept in reduced row-echelon form, which is
unique, so equality and hashing are exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SubspaceBasis",
    "as_bits",
    "rref",
    "rank",
    "null_space",
    "span",
    "subspace_sum",
    "subspace_intersection",
    "orthogonal_complement",
    "enumerate_subspaces",
    "all_subspaces",
    "random_invertible",
    "random_invertible_batch",
    "is_irreducible",
    "field_multiplication_matrix",
    "vector_to_int",
    "int_to_vector",
    "apply_matrix",
    "inverse",
]


def as_bits(mat) -> np.ndarray:
    a = np.asarray(mat, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return (a & 1).astype(np.uint8)


def rref(mat) -> tuple[np.ndarray, int]:
    """Reduced row-echelon form over GF(2).

    Returns the reduced matrix (same shape, zero rows last) and its rank.
    Pivots are chosen left to right.
    """
    A = as_bits(mat).copy()
    n_rows, n_cols = A.shape
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        rows = np.flatnonzero(A[r:, c])
        if rows.size == 0:
            continue
        p = r + int(rows[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            A[others] ^= A[r]
        r += 1
    return A, r


def rank(mat) -> int:
    return rref(mat)[1]


def vector_to_int(v) -> int:
    v = np.asarray(v, dtype=np.int64).ravel()
    return int(np.sum((v & 1) << np.arange(v.size)))


def int_to_vector(x: int, m: int) -> np.ndarray:
    return ((int(x) >> np.arange(m)) & 1).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """A subspace of GF(2)^m stored as its canonical (RREF) basis.

    Build instances with :func:`span` rather than the constructor; the
    constructor trusts that ``basis`` is already reduced with no zero rows.
    """

    m: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=np.uint8)
        b = b.reshape(-1, self.m) if self.m else b.reshape(0, 0)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def _key(self):
        return (self.m, self.basis.tobytes())

    def __eq__(self, other):
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        rows = ["".join(map(str, r)) for r in self.basis]
        return f"SubspaceBasis(m={self.m}, rows={rows})"

    def basis_ints(self) -> list[int]:
        return [vector_to_int(r) for r in self.basis]

    def elements(self) -> np.ndarray:
        """Sorted integer labels of all 2^dim vectors in the subspace."""
        out = np.zeros(1, dtype=np.int64)
        for b in self.basis_ints():
            out = np.concatenate([out, out ^ b])
        return np.sort(out)

    def mask(self) -> int:
        """Bitmask over GF(2)^m with bit ``x`` set iff ``x`` is in the subspace."""
        return sum(1 << int(x) for x in self.elements())

    def contains(self, v) -> bool:
        v = as_bits(v)
        return rank(np.vstack([self.basis, v])) == self.dim

    def support(self) -> np.ndarray:
        """Coordinates on which some vector of the subspace is nonzero."""
        if self.dim == 0:
            return np.zeros(self.m, dtype=bool)
        return self.basis.any(axis=0)


def span(vectors, m: int) -> SubspaceBasis:
    """Canonical basis of the span of ``vectors`` (rows) in GF(2)^m."""
    A = np.asarray(vectors)
    if A.size == 0:
        return SubspaceBasis(m, np.zeros((0, m), dtype=np.uint8))
    A = as_bits(A)
    if A.shape[1] != m:
        raise ValueError(f"vectors have length {A.shape[1]}, expected {m}")
    R, r = rref(A)
    return SubspaceBasis(m, R[:r])


def null_space(mat, m: int | None = None) -> SubspaceBasis:
    """Canonical basis of ``{x : mat @ x = 0}``."""
    A = np.asarray(mat)
    if m is None:
        m = A.shape[-1]
    if A.size == 0:
        return span(np.eye(m, dtype=np.uint8), m)
    A = as_bits(A)
    if A.shape[1] != m:
        raise ValueError(f"matrix has {A.shape[1]} columns, expected {m}")
    R, r = rref(A)
    pivots = [int(np.flatnonzero(R[i])[0]) for i in range(r)]
    free = [c for c in range(m) if c not in pivots]
    vecs = np.zeros((len(free), m), dtype=np.uint8)
    for t, f in enumerate(free):
        vecs[t, f] = 1
        for i, p in enumerate(pivots):
            vecs[t, p] = R[i, f]
    return span(vecs, m)


def _check_ambient(a: SubspaceBasis, b: SubspaceBasis):
    if a.m != b.m:
        raise ValueError(f"ambient dimension mismatch: {a.m} != {b.m}")


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    _check_ambient(a, b)
    return span(np.vstack([a.basis, b.basis]), a.m)


def orthogonal_complement(a: SubspaceBasis) -> SubspaceBasis:
    return null_space(a.basis, a.m)


def subspace_intersection(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    # (A ∩ B)^⊥ = A^⊥ + B^⊥
    _check_ambient(a, b)
    return orthogonal_complement(
        subspace_sum(orthogonal_complement(a), orthogonal_complement(b))
    )


def enumerate_subspaces(m: int, k: int) -> list[SubspaceBasis]:
    """All k-dimensional subspaces of GF(2)^m, generated directly in RREF.

    Each subspace corresponds to one choice of pivot columns plus free bits
    in the non-pivot columns right of each pivot. Meant for small ``m``.
    """
    if not 0 <= k <= m:
        raise ValueError(f"k={k} out of range for m={m}")
    out = []
    for pivots in itertools.combinations(range(m), k):
        slots = [
            (row, c)
            for row, p in enumerate(pivots)
            for c in range(p + 1, m)
            if c not in pivots
        ]
        for bits in itertools.product((0, 1), repeat=len(slots)):
            B = np.zeros((k, m), dtype=np.uint8)
            for row, p in enumerate(pivots):
                B[row, p] = 1
            for (row, c), bit in zip(slots, bits):
                B[row, c] = bit
            out.append(SubspaceBasis(m, B))
    return out


def all_subspaces(m: int) -> list[SubspaceBasis]:
    return [s for k in range(m + 1) for s in enumerate_subspaces(m, k)]


def random_invertible(m: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform element of GL(m, 2) by rejection sampling."""
    if m < 1:
        raise ValueError("m must be >= 1")
    while True:
        W = rng.integers(0, 2, size=(m, m), dtype=np.uint8)
        if rank(W) == m:
            return W


def _batch_rank(mats: np.ndarray) -> np.ndarray:
    A = mats.copy()
    n, rows, cols = A.shape
    rk = np.zeros(n, dtype=np.int64)
    idx = np.arange(n)
    for c in range(cols):
        # first row at or below the current pivot row holding a one in column c
        below = np.arange(rows)[None, :] >= rk[:, None]
        cand = (A[:, :, c] == 1) & below
        has = cand.any(axis=1)
        if not has.any():
            continue
        p = np.argmax(cand, axis=1)
        sel = idx[has]
        r = np.minimum(rk[sel], rows - 1)
        pr = A[sel, p[has]].copy()
        A[sel, p[has]] = A[sel, r]
        A[sel, r] = pr
        hit = (A[sel, :, c] == 1) & (np.arange(rows)[None, :] != r[:, None])
        A[sel] ^= hit[:, :, None].astype(np.uint8) * pr[:, None, :]
        rk[sel] += 1
    return rk


def random_invertible_batch(m: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent uniform draws from GL(m, 2), shape (size, m, m)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = np.empty((size, m, m), dtype=np.uint8)
    filled = 0
    while filled < size:
        need = size - filled
        draw = rng.integers(0, 2, size=(2 * need + 8, m, m), dtype=np.uint8)
        ok = draw[_batch_rank(draw) == m][:need]
        out[filled : filled + len(ok)] = ok
        filled += len(ok)
    return out


def _poly_mod(a: int, p: int) -> int:
    dp = p.bit_length() - 1
    while a and a.bit_length() - 1 >= dp:
        a ^= p << (a.bit_length() - 1 - dp)
    return a


def is_irreducible(poly: int) -> bool:
    """Brute-force irreducibility test for a GF(2)[z] polynomial bitmask."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for f in range(1 << d, 1 << (d + 1)):
            if _poly_mod(poly, f) == 0:
                return False
    return True


def _field_mul(a: int, b: int, poly: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a = _poly_mod(a << 1, poly)
    return _poly_mod(out, poly)


def field_multiplication_matrix(m: int, poly: int, element: int) -> np.ndarray:
    """Matrix of ``x -> element * x`` in GF(2^m) in the basis 1, z, ..., z^(m-1).

    ``poly`` and ``element`` are bitmasks with the constant term in bit 0.
    Column ``c`` holds the coefficients of ``element * z^c``.
    """
    if poly.bit_length() - 1 != m:
        raise ValueError(f"polynomial {poly:#x} does not have degree {m}")
    if m > 16:
        raise ValueError("irreducibility check limited to m <= 16")
    if not is_irreducible(poly):
        raise ValueError(f"polynomial {poly:#x} is reducible")
    if not 1 <= element < (1 << m):
        raise ValueError(f"field element {element} must be in 1..{(1 << m) - 1}")
    W = np.zeros((m, m), dtype=np.uint8)
    for c in range(m):
        W[:, c] = int_to_vector(_field_mul(element, 1 << c, poly), m)
    return W


def apply_matrix(W: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Apply ``W`` to every integer-labelled vector in ``x``."""
    m = W.shape[0]
    x = np.asarray(x, dtype=np.int64)
    bits = (x[..., None] >> np.arange(m)) & 1
    img = (bits @ W.T.astype(np.int64)) & 1
    return img @ (1 << np.arange(m))


def inverse(W: np.ndarray) -> np.ndarray:
    m = W.shape[0]
    R, r = rref(np.hstack([as_bits(W), np.eye(m, dtype=np.uint8)]))
    if r < m or not np.array_equal(R[:, :m], np.eye(m, dtype=np.uint8)):
        raise ValueError("matrix is singular over GF(2)")
    return R[:, m:].copy()
