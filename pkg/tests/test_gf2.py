import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbldpc import gf2
from nbldpc.kernels import gaussian_binomial


def brute_span(vectors):
    """All integer combinations of integer-labelled vectors."""
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


matrices = st.integers(1, 6).flatmap(
    lambda m: st.tuples(
        st.just(m),
        st.lists(st.integers(0, (1 << m) - 1), min_size=0, max_size=7),
    )
)


def rows(ints, m):
    return np.array([gf2.int_to_vector(x, m) for x in ints], dtype=np.uint8).reshape(-1, m)


def test_vector_int_round_trip():
    v = np.array([1, 0, 1, 0], dtype=np.uint8)
    assert gf2.vector_to_int(v) == 5
    assert np.array_equal(gf2.int_to_vector(5, 4), v)


def test_rref_known():
    A = np.array([[1, 1, 0], [1, 1, 0], [0, 1, 1]])
    R, r = gf2.rref(A)
    assert r == 2
    assert np.array_equal(R[:2], [[1, 0, 1], [0, 1, 1]])
    assert not R[2].any()


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_span_matches_brute_force(case):
    m, ints = case
    s = gf2.span(rows(ints, m), m)
    assert set(s.elements().tolist()) == brute_span(ints)
    assert s.dim == gf2.rank(rows(ints, m)) if ints else s.dim == 0


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_null_space_is_orthogonal_kernel(case):
    m, ints = case
    A = rows(ints, m)
    ns = gf2.null_space(A, m)
    expected = {x for x in range(1 << m) if all(bin(x & a).count("1") % 2 == 0 for a in ints)}
    assert set(ns.elements().tolist()) == expected
    assert ns.dim + (gf2.rank(A) if ints else 0) == m


@given(matrices, matrices)
@settings(max_examples=150, deadline=None)
def test_sum_and_intersection_brute(c1, c2):
    m = c1[0]
    a_ints = [x & ((1 << m) - 1) for x in c1[1]]
    b_ints = [x & ((1 << m) - 1) for x in c2[1]]
    a, b = gf2.span(rows(a_ints, m), m), gf2.span(rows(b_ints, m), m)
    A, B = brute_span(a_ints), brute_span(b_ints)
    assert set(gf2.subspace_intersection(a, b).elements().tolist()) == A & B
    assert set(gf2.subspace_sum(a, b).elements().tolist()) == {x ^ y for x in A for y in B}


def test_ambient_mismatch_rejected():
    a = gf2.span(np.eye(2, dtype=np.uint8), 2)
    b = gf2.span(np.eye(3, dtype=np.uint8), 3)
    with pytest.raises(ValueError):
        gf2.subspace_intersection(a, b)


def test_canonical_equality_and_hash():
    a = gf2.span([[1, 1, 0], [0, 1, 1]], 3)
    b = gf2.span([[1, 0, 1], [1, 1, 0]], 3)
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1


@pytest.mark.parametrize("m", range(0, 6))
def test_enumeration_counts_and_distinct(m):
    total = 0
    for k in range(m + 1):
        subs = gf2.enumerate_subspaces(m, k)
        assert len(subs) == gaussian_binomial(m, k)
        assert len({s.mask() for s in subs}) == len(subs)
        assert all(s.dim == k for s in subs)
        total += len(subs)
    assert len(gf2.all_subspaces(m)) == total


def test_enumeration_against_exhaustive_m3():
    # every subset of GF(2)^3 closed under xor and containing 0
    closed = set()
    for bits in range(1 << 8):
        S = {x for x in range(8) if bits >> x & 1}
        if 0 in S and all(x ^ y in S for x in S for y in S):
            closed.add(frozenset(S))
    got = {frozenset(s.elements().tolist()) for s in gf2.all_subspaces(3)}
    assert got == closed


def test_enumeration_bad_k():
    with pytest.raises(ValueError):
        gf2.enumerate_subspaces(3, 4)


def test_support_example():
    # uniform message on {0, 5} = {0000, 1010}: support on coordinates 0 and 2
    s = gf2.span([[1, 0, 1, 0]], 4)
    assert s.support().tolist() == [True, False, True, False]
    assert s.contains([1, 0, 1, 0]) and not s.contains([1, 0, 0, 0])


def test_random_invertible_uniform_on_gl2(rng):
    counts = {}
    for _ in range(6000):
        W = gf2.random_invertible(2, rng)
        counts[W.tobytes()] = counts.get(W.tobytes(), 0) + 1
    assert len(counts) == 6  # |GL(2, 2)|
    assert all(abs(c - 1000) < 150 for c in counts.values())


def test_random_invertible_batch(rng):
    Ws = gf2.random_invertible_batch(4, 500, rng)
    assert Ws.shape == (500, 4, 4)
    assert all(gf2.rank(W) == 4 for W in Ws)
    assert len({W.tobytes() for W in Ws}) > 400  # |GL(4,2)| = 20160


@pytest.mark.parametrize(
    "poly, irreducible",
    [(0b11, True), (0x7, True), (0x5, False), (0xB, True), (0xD, True), (0xF, False),
     (0x25, True), (0x29, True), (0x2F, True), (0x11B, True), (0x21, False)],
)
def test_irreducibility(poly, irreducible):
    assert gf2.is_irreducible(poly) is irreducible


def test_field_matrix_gf4():
    # in GF(4) with z^2 = 1 + z: z * z = 1 + z
    W = gf2.field_multiplication_matrix(2, 0x7, 0b10)
    assert gf2.apply_matrix(W, np.array([0b10]))[0] == 0b11
    assert np.array_equal(W, [[0, 1], [1, 1]])


@pytest.mark.parametrize("m, poly", [(3, 0xB), (4, 0x13), (5, 0x25)])
def test_field_matrices_form_a_group(m, poly):
    mats = [gf2.field_multiplication_matrix(m, poly, a) for a in range(1, 1 << m)]
    keys = {W.tobytes() for W in mats}
    assert len(keys) == (1 << m) - 1
    for A, B in itertools.product(mats[:4], mats):
        assert ((A.astype(int) @ B) % 2).astype(np.uint8).tobytes() in keys


def test_field_matrix_validation():
    with pytest.raises(ValueError):
        gf2.field_multiplication_matrix(2, 0x5, 1)
    with pytest.raises(ValueError):
        gf2.field_multiplication_matrix(3, 0x7, 1)
    with pytest.raises(ValueError):
        gf2.field_multiplication_matrix(2, 0x7, 0)


def test_inverse(rng):
    for _ in range(20):
        W = gf2.random_invertible(5, rng)
        Wi = gf2.inverse(W)
        assert np.array_equal((W.astype(int) @ Wi) % 2, np.eye(5))
    with pytest.raises(ValueError):
        gf2.inverse(np.array([[1, 1], [1, 1]], dtype=np.uint8))
