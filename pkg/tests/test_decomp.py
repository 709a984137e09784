import pytest

from heckestrat import cells as cl
from heckestrat import decomp as dc
from heckestrat import schur as sc
from heckestrat.coxeter import CoxeterSystem
from heckestrat.hecke import HeckeAlgebra, kl_basis
from heckestrat.ringtower import parse_spot, residue_field


def _partitions(n, maxpart=None):
    maxpart = maxpart or n
    if n == 0:
        yield ()
        return
    for k in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def e_regular_count(n, e):
    """Partitions of n with no part repeated e or more times."""
    return sum(1 for lam in _partitions(n) if all(lam.count(k) < e for k in set(lam)))


def quantum_characteristic(spot):
    """Least e with 1 + q + ... + q^{e-1} = 0 for q = t^2, or None."""
    F = residue_field(spot)
    q = F.t * F.t
    acc, power = F.zero, F.one
    for e in range(1, 200):
        acc = acc + power
        power = power * q
        if F.is_zero(acc):
            return e
    return None


SPOTS = ["max=2,t+1", "max=3,t+1", "max=5,t+2", "max=7,t+3", "max=11,t+2", "max=2,t^2+t+1"]


@pytest.mark.parametrize("label,n", [("A1", 2), ("A2", 3), ("A3", 4)])
@pytest.mark.parametrize("spot", SPOTS)
def test_number_of_simples_is_e_regular_count(label, n, spot):
    sp = parse_spot(spot)
    W = CoxeterSystem.from_type(label)
    B = dc.hecke_field_algebra(W, residue_field(sp))
    sd = dc.simples_finite_field(B, 0)
    e = quantum_characteristic(sp)
    want = e_regular_count(n, e) if e is not None else e_regular_count(n, n + 1)
    assert len(sd.simples) == want


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2"])
@pytest.mark.parametrize("spot", ["max=2,t+1", "max=3,t+1", "max=5,t+2"])
def test_block_triangularity(label, spot):
    cells = cl.compute_cells(kl_basis(CoxeterSystem.from_type(label)))
    res = dc.verify_block_triangularity(cells, parse_spot(spot), 0)
    assert res["rank_sum"] == res["group_order"]
    assert res["oracle_agrees"]
    assert res["ok"], res["simples"]


def test_semisimple_spot_gives_identity_matrix():
    # q = 4 in F_11 has order 5 > 3, so H(S3) is split semisimple
    W = CoxeterSystem.from_type("A2")
    H = HeckeAlgebra(W)
    coll = sc.preset_collection(H)
    objs = dc.build_E_lambda(coll)
    dm = dc.decomposition_matrix(objs, parse_spot("max=11,t+2"), "hecke", True, 0)
    assert sorted(dm.simple_dims) == [1, 1, 2]
    for row in dm.entries:
        assert sorted(row) == [0, 0, 1]
    assert dc.verify_triangularity(dm)["ok"]


@pytest.mark.parametrize("side", ["hecke", "endo"])
@pytest.mark.parametrize("spot", ["max=2,t+1", "max=3,t+1", "max=5,t+2"])
def test_standard_objects_triangular(side, spot):
    W = CoxeterSystem.from_type("A2")
    coll = sc.preset_collection(HeckeAlgebra(W))
    objs = dc.build_E_lambda(coll)
    dm = dc.decomposition_matrix(objs, parse_spot(spot), side, True, 0)
    assert dm.entries == dm.oracle_entries
    assert dc.bookkeeping_ok(dm)
    assert dc.verify_triangularity(dm)["ok"]


def test_decomposition_needs_maximal_spot():
    coll = sc.preset_collection(HeckeAlgebra(CoxeterSystem.from_type("A1")))
    objs = dc.build_E_lambda(coll)
    with pytest.raises(dc.NotFinite):
        dc.decomposition_matrix(objs, parse_spot("p=3"))


def test_B2_standard_objects_not_split():
    coll = sc.preset_collection(HeckeAlgebra(CoxeterSystem.from_type("B2")))
    with pytest.raises(dc.SectionNotSplit):
        dc.build_E_lambda(coll)


def test_triangularity_detects_violation():
    dm = dc.DecompositionMatrix("x", ["a", "b"], [0, 0], [0, 1], [1, 1], [[1, 1], [0, 1]], [2, 1])
    res = dc.verify_triangularity(dm)
    assert not res["ok"]
    assert res["simples"][1]["unique"] is False


def test_phi4_regime_label():
    assert dc.phi4_regime(parse_spot("max=2,t+1")).startswith("t^2+1 in m")
    assert dc.phi4_regime(parse_spot("max=5,t+2")).startswith("t^2+1 in m")
    assert dc.phi4_regime(parse_spot("max=3,t+1")) == "t^2+1 invertible"
