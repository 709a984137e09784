import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckestrat.coxeter import CoxeterSystem, InvalidCoxeterMatrix, InvalidWeights


def _perm_of_word(word, n):
    # A_{n-1} acting on positions: s_i swaps i and i+1
    p = list(range(n))
    for a in word:
        p[a], p[a + 1] = p[a + 1], p[a]
    return tuple(p)


def _signed_perm_of_word(word, n):
    # B_n: s_i swaps i, i+1 for i < n-1, s_{n-1} negates the last entry
    p = list(range(1, n + 1))
    for a in word:
        if a == n - 1:
            p[-1] = -p[-1]
        else:
            p[a], p[a + 1] = p[a + 1], p[a]
    return tuple(p)


def _inversions(p):
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])


def _bruhat_tableau(x, y):
    # x <= y in S_n iff sorted prefixes of x are entrywise <= those of y
    n = len(x)
    for k in range(1, n):
        if any(a > b for a, b in zip(sorted(x[:k]), sorted(y[:k]))):
            return False
    return True


@pytest.mark.parametrize("label,order", [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("B3", 48), ("G2", 12), ("I2(5)", 10), ("H3", 120), ("D4", 192)])
def test_group_orders(label, order):
    W = CoxeterSystem.from_type(label)
    assert W.size == order
    w0 = max(range(W.size), key=lambda i: W.length[i])
    # the longest element is unique and every generator is a right descent
    assert sum(1 for i in range(W.size) if W.length[i] == W.length[w0]) == 1
    assert W.rdesc[w0] == frozenset(range(W.rank))


def test_A3_against_permutations():
    W = CoxeterSystem.from_type("A3")
    perms = [_perm_of_word(W.words[i], 4) for i in range(W.size)]
    assert sorted(perms) == sorted(itertools.permutations(range(4)))
    assert all(W.length[i] == _inversions(perms[i]) for i in range(W.size))
    for x in range(W.size):
        for y in range(W.size):
            assert W.bruhat_leq_idx(x, y) == _bruhat_tableau(perms[x], perms[y])


def test_B3_against_signed_permutations():
    W = CoxeterSystem.from_type("B3")
    perms = {_signed_perm_of_word(W.words[i], 3) for i in range(W.size)}
    assert len(perms) == 48


@settings(max_examples=60)
@given(st.lists(st.integers(0, 2), max_size=12), st.lists(st.integers(0, 2), max_size=12))
def test_multiplication_matches_permutations(u, v):
    W = CoxeterSystem.from_type("A3")
    x, y = W.idx(tuple(u)), W.idx(tuple(v))
    assert _perm_of_word(W.words[W.mul(x, y)], 4) == _perm_of_word(tuple(u) + tuple(v), 4)


@settings(max_examples=40)
@given(st.sampled_from(["A2", "B2", "G2", "H3"]), st.data())
def test_length_is_subadditive(label, data):
    W = CoxeterSystem.from_type(label)
    x = data.draw(st.integers(0, W.size - 1))
    y = data.draw(st.integers(0, W.size - 1))
    xy = W.mul(x, y)
    assert W.length[xy] <= W.length[x] + W.length[y]
    assert (W.length[xy] - W.length[x] - W.length[y]) % 2 == 0


def test_double_cosets_partition():
    W = CoxeterSystem.from_type("A3")
    lam, mu = {0}, {1, 2}
    reps = W.double_coset_reps_idx(lam, mu)
    seen = []
    for d in reps:
        seen += W.double_coset(lam, d, mu)
    assert sorted(seen) == list(range(W.size))


def test_invalid_inputs():
    with pytest.raises(InvalidCoxeterMatrix):
        CoxeterSystem([[1, 3], [2, 1]])
    with pytest.raises(InvalidCoxeterMatrix):
        CoxeterSystem.from_type("Z3")
    # s1, s2 are conjugate in A2, so their weights must agree
    with pytest.raises(InvalidWeights):
        CoxeterSystem.from_type("A2", [1, 2])
    assert CoxeterSystem.from_type("B2", [1, 2]).weights == (1, 2)
