import random

import pytest

from heckestrat import linalg as la
from heckestrat import schur as sc
from heckestrat import stratcheck as st
from heckestrat.coxeter import CoxeterSystem
from heckestrat.hecke import HeckeAlgebra
from heckestrat.ringtower import LocalizationSpec, parse_localization, parse_spot, residue_field, specialize


def _pipeline(label):
    H = HeckeAlgebra(CoxeterSystem.from_type(label))
    coll = sc.preset_collection(H)
    A = sc.build_endo(coll)
    filts = sc.height_filtration(coll)
    return coll, A, filts, sc.ideal_chain(A, filts)


@pytest.mark.parametrize("label", ["A1", "A2"])
@pytest.mark.parametrize("point", ["f=t-2", "f=t-3", "f=2*t+1"])
def test_discriminant_matches_field_determinant(label, point):
    # integral Gram determinant specialized at t = a, against the trace form
    # built over Q from explicit left multiplication matrices
    coll, A, filts, chain = _pipeline(label)
    crit, fac = st.critical_primes(A)
    disc = fac.reassemble()
    sp = parse_spot(point)
    F = residue_field(sp)
    B = A.specialize(sp).field_algebra()
    L = [B.left_matrix(B.basis_vec(i)) for i in range(B.dim)]
    tr = [sum((L[i][k][k] for k in range(B.dim)), F.zero) for i in range(B.dim)]
    G = [[F.zero] * B.dim for _ in range(B.dim)]
    for i in range(B.dim):
        for j in range(B.dim):
            prod = B.mul(B.basis_vec(i), B.basis_vec(j))
            G[i][j] = sum((c * tr[k] for k, c in enumerate(prod)), F.zero)
    assert F.is_zero(la.det(F, G) - specialize(disc, sp))


def test_critical_primes_A1():
    coll, A, filts, chain = _pipeline("A1")
    crit, fac = st.critical_primes(A)
    assert [s.label() for s in crit] == ["p=2", "phi=4"]


@pytest.mark.parametrize("label", ["A1", "A2"])
@pytest.mark.parametrize("spot", ["generic", "p=2", "p=3", "phi=4", "phi=6", "max=2,t+1", "max=3,t+1", "max=2,t^2+t+1"])
def test_every_spot_splits_for_type_A(label, spot):
    coll, A, filts, chain = _pipeline(label)
    r = st.check_spot(A, filts, parse_spot(spot), "split", [len(v) for v in chain.spans])
    assert r["qha"] == "pass" and r["ssa"] == "pass"
    assert r["dims_match_integral"]


def test_B2_middle_section_not_semisimple_at_2():
    coll, A, filts, chain = _pipeline("B2")
    for spot in ("p=2", "max=2,t+1"):
        r = st.check_spot(A, filts, parse_spot(spot))
        assert r["status"] == "QHA-fail/SSA-pass"
        bad = [s for s in r["sections"] if s["heredity"] == "fail"]
        assert len(bad) == 1 and bad[0]["checks"]["endo_semisimple"] == "fail"
    r = st.check_spot(A, filts, parse_spot("max=3,t+1"))
    assert r["qha"] == "pass"


@pytest.mark.parametrize("spot", ["generic", "max=3,t+1", "phi=6"])
def test_strat_system_A1(spot):
    coll, A, filts, chain = _pipeline("A1")
    As = A.specialize(parse_spot(spot))
    ch = sc.ideal_chain(As, filts)
    system = st.strat_system_from_chain(As, coll, ch)
    res = st.check_strat_system(system, random.Random(0))
    assert res["verdict"] is True
    seq = st.extract_defining_sequence(system, ch)
    assert seq["chain_dims"] == [0, 4, 5]
    assert seq["ssa"] is True and seq["matches_height_chain"] is True


def test_ext1_only_upwards_at_bad_spot():
    coll, A, filts, chain = _pipeline("A2")
    As = A.specialize(parse_spot("max=2,t+1"))
    ch = sc.ideal_chain(As, filts)
    system = st.strat_system_from_chain(As, coll, ch)
    res = st.check_strat_system(system, random.Random(0))
    assert res["ext1_direction"] is True and res["ext1_witnesses"] == []
    # Ext^1 between standard modules is nonzero somewhere, always upwards
    n = len(system.labels)
    dims = {(a, b): st._ext1_dim(system, a, system.Delta[b]) for a in range(n) for b in range(n)}
    assert any(dims.values())
    for (a, b), d in dims.items():
        assert not d or system.less(a, b)


def test_localization_excludes_exactly_the_inverted_spots():
    coll, A, filts, chain = _pipeline("B2")
    r = st.local_global_qha(A, filts, chain, [parse_spot("max=3,t+1")], parse_localization("bad+phi4", "B2"))
    assert r["qha"] == "pass"
    assert "p=2" in r["excluded"] and "phi=4" in r["excluded"]
    assert "S generated by {2, t^2 + 1}" in r["certification"]
    r = st.local_global_qha(A, filts, chain, [], LocalizationSpec())
    assert r["qha"] == "fail" and r["certification"].startswith("not certified")
