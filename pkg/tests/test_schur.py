import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckestrat import cells as cl
from heckestrat import hmodules as hm
from heckestrat import linalg as la
from heckestrat import schur as sc
from heckestrat.coxeter import CoxeterSystem
from heckestrat.hecke import HeckeAlgebra, kl_basis
from heckestrat.ringtower import parse_spot


def _orbit_count(W, lam, mu):
    """|W_lam \\ W / W_mu| by orbits of x -> a x b."""
    L = W.parabolic_elements(lam)
    M = W.parabolic_elements(mu)
    seen, count = set(), 0
    for x in range(W.size):
        if x in seen:
            continue
        count += 1
        for a in L:
            ax = W.mul(a, x)
            for b in M:
                seen.add(W.mul(ax, b))
    return count


def _setup(label, weights=None, name="qschur"):
    W = CoxeterSystem.from_type(label, weights)
    H = HeckeAlgebra(W)
    coll = sc.preset_collection(H, name)
    return W, H, coll


@pytest.mark.parametrize("label,weights", [("A1", None), ("A2", None), ("B2", None), ("B2", [1, 2]), ("G2", None)])
def test_rank_is_double_coset_count(label, weights):
    W, H, coll = _setup(label, weights)
    A = sc.build_endo(coll)
    lams = [S.lam for S in coll.summands]
    assert A.dim == sum(_orbit_count(W, a, b) for a in lams for b in lams)
    assert A.dim == A.rank_formula()


@pytest.mark.parametrize("label", ["A1", "A2", "B2"])
def test_integral_algebra_is_associative_with_unit(label):
    W, H, coll = _setup(label)
    A = sc.build_endo(coll)
    assert A.is_associative()
    u = A.unit()
    for i in range(A.dim):
        e = [A.R.one if k == i else A.R.zero for k in range(A.dim)]
        assert A.mul(u, e) == e and A.mul(e, u) == e


@pytest.mark.parametrize("spot", ["generic", "p=2", "p=3", "phi=4", "phi=6", "max=2,t+1", "max=5,t+2"])
def test_specialization_commutes_with_build_A2(spot):
    W, H, coll = _setup("A2")
    A = sc.build_endo(coll)
    assert sc.consistent_with_integral(A, sc.build_endo(coll, parse_spot(spot)))


def test_chain_dims_and_nesting():
    for label, dims in (("A1", [0, 4, 5]), ("A2", [0, 16, 32, 33])):
        W, H, coll = _setup(label)
        A = sc.build_endo(coll)
        filts = sc.height_filtration(coll)
        ch = sc.ideal_chain(A, filts)
        assert [ch.dim(j) for j in range(ch.N + 1)] == dims
        assert ch.certified
        As = A.specialize(parse_spot("max=3,t+1"))
        chs = sc.ideal_chain(As, filts)
        assert sc.check_nested(chs)
        assert [chs.dim(j) for j in range(chs.N + 1)] == dims


def test_regular_summand_generates_only_where_H_is_semisimple():
    # AeA = A iff every x_lam H is projective; at q = t^2 = 1 the trivial
    # module x_W H is not
    W, H, coll = _setup("A2")
    A = sc.build_endo(coll)
    want = {"generic": True, "f=t-2": True, "max=2,t+1": False, "max=5,t+2": False}
    for spot, ok in want.items():
        As = A.specialize(parse_spot(spot))
        B = As.field_algebra()
        assert sc.morita_progenerator_check(B, sc.regular_idempotent(As)) is ok, spot


def test_quotients_free_integrally():
    W, H, coll = _setup("A2")
    A = sc.build_endo(coll)
    ch = sc.ideal_chain(A, sc.height_filtration(coll))
    assert all(sc.check_quotient_free(A, ch.spans[j]) is True for j in range(ch.N + 1))


def test_non_summand_detected_as_not_free():
    # the span of (t + 1) * unit is not a direct summand
    W, H, coll = _setup("A1")
    A = sc.build_endo(coll)
    from heckestrat.ringtower import parse_laurent

    c = parse_laurent("t + 1")
    v = [x * c for x in A.unit()]
    assert sc.check_quotient_free(A, [v]) is False


def test_collection_file(tmp_path):
    W = CoxeterSystem.from_type("A2")
    H = HeckeAlgebra(W)
    cd = cl.compute_cells(kl_basis(W))
    (tmp_path / "dual.mod").write_text(hm.dual_cell_module(cd, 1).to_text())
    text = "regular\nxperm:{s1} mult=2\nfile:dual.mod\n"
    coll = sc.parse_collection_text(text, H, cd, base_dir=str(tmp_path))
    assert coll.labels() == ["regular", "xperm:{s1}#1", "xperm:{s1}#2", "file:dual.mod"]
    sp = parse_spot("max=3,t+1")
    A = sc.build_endo(coll, sp)
    assert A.field_algebra().is_associative()
    mods = [coll.summands[i].module.specialize(sp) for i, _ in coll.expanded()]
    assert A.dim == sum(len(hm.hom_space(M, N)) for M in mods for N in mods)
    with pytest.raises(ValueError):
        sc.parse_collection_text("bogus\n", H, cd)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["max=2,t+1", "max=3,t+1", "phi=6", "p=5"]), st.integers(0, 10_000))
def test_chain_members_are_two_sided_ideals(spot, seed):
    import random

    W, H, coll = _setup("A2")
    A = sc.build_endo(coll)
    As = A.specialize(parse_spot(spot))
    B = As.field_algebra()
    ch = sc.ideal_chain(As, sc.height_filtration(coll))
    rng = random.Random(seed)
    j = rng.randrange(ch.N + 1)
    J = la.Subspace(B.F, B.dim, ch.spans[j])
    assert B.is_ideal(J)
    assert sc.check_idempotent(B, J)
