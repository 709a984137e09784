import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckestrat import cells as cl
from heckestrat import hmodules as hm
from heckestrat.coxeter import CoxeterSystem
from heckestrat.hecke import HeckeAlgebra, kl_basis
from heckestrat.ringtower import IntLaurent, parse_spot, residue_field


def _compose(p, q):
    return tuple(p[i] for i in q)


def _closure(gens, n):
    e = tuple(range(n))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _compose(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def _transposition(i, n):
    p = list(range(n))
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def double_coset_count(n, lam, mu):
    """|W_lam \\ S_n / W_mu| by orbit counting on permutations."""
    G = _closure([_transposition(i, n) for i in range(n - 1)], n)
    L = _closure([_transposition(i, n) for i in lam], n)
    M = _closure([_transposition(i, n) for i in mu], n)
    seen, count = set(), 0
    for x in G:
        if x in seen:
            continue
        count += 1
        for a in L:
            for b in M:
                seen.add(_compose(_compose(a, x), b))
    return count


SUBSETS_A2 = [(), (0,), (1,), (0, 1)]


@pytest.mark.parametrize("spot", ["max=2,t+1", "max=3,t+1", "phi=6"])
def test_hom_between_qperm_modules_counts_double_cosets(spot):
    W = CoxeterSystem.from_type("A2")
    H = HeckeAlgebra(W)
    sp = parse_spot(spot)
    mods = {lam: hm.q_permutation(H, lam).specialize(sp) for lam in SUBSETS_A2}
    for la_ in SUBSETS_A2:
        for mu in SUBSETS_A2:
            assert len(hm.hom_space(mods[mu], mods[la_])) == double_coset_count(3, la_, mu)


@pytest.mark.parametrize("label,weights", [("A2", None), ("B2", None), ("B2", [1, 2]), ("G2", None), ("A3", None)])
def test_cell_modules_satisfy_relations_and_ranks(label, weights):
    W = CoxeterSystem.from_type(label, weights)
    cd = cl.compute_cells(kl_basis(W))
    total_left = 0
    for o in range(len(cd.left_cells)):
        M = hm.cell_module(cd, o)
        M.check_relations()
        M.dual().check_relations()
        total_left += M.rank
    total_two = 0
    for xi in range(len(cd.two_sided_cells)):
        M = hm.two_sided_cell_module(cd, xi)
        M.check_relations()
        total_two += M.rank
    assert total_left == total_two == W.size


def test_regular_module_relations():
    for label in ("A2", "B2", "G2"):
        H = HeckeAlgebra(CoxeterSystem.from_type(label))
        hm.regular_left_module(H).check_relations()
        hm.right_regular(H).check_relations()


def test_text_roundtrip():
    W = CoxeterSystem.from_type("B2", [1, 2])
    cd = cl.compute_cells(kl_basis(W))
    M = hm.cell_module(cd, 1)
    N = hm.parse_module_text(M.to_text(), W)
    assert N.side == M.side and N.mats == M.mats


def test_broken_module_rejected():
    W = CoxeterSystem.from_type("A2")
    cd = cl.compute_cells(kl_basis(W))
    M = hm.cell_module(cd, 1)
    # T_s acting as 2 violates (T_s - t^2)(T_s + 1) = 0
    two = [[M.R.from_laurent(IntLaurent(2)) if i == j else M.R.zero for j in range(M.rank)] for i in range(M.rank)]
    bad = hm.LatticeModule(M.side, W, M.R, list(M.basis), [two, M.mats[1]], "broken")
    with pytest.raises(hm.RelationFailure):
        bad.check_relations()


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(), (0,), (1,), (0, 1)]), st.integers(0, 1 << 12))
def test_random_combination_of_homs_is_a_hom(lam, seed):
    import random

    W = CoxeterSystem.from_type("A2")
    H = HeckeAlgebra(W)
    sp = parse_spot("max=5,t+2")
    F = residue_field(sp)
    M = hm.q_permutation(H, lam).specialize(sp)
    N = hm.right_regular(H).specialize(sp)
    basis = hm.hom_space(M, N)
    rng = random.Random(seed)
    coeffs = [F(rng.randint(0, 4)) for _ in basis]
    X = [[F.zero] * M.rank for _ in range(N.rank)]
    for c, B in zip(coeffs, basis):
        X = [[X[i][j] + c * B[i][j] for j in range(M.rank)] for i in range(N.rank)]
    assert hm.is_module_hom(M, N, X)
