import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckestrat.ringtower import (
    IntLaurent,
    InvalidSpot,
    PrimeSpot,
    cyclotomic,
    factor_in_Zt,
    parse_laurent,
    parse_localization,
    parse_spot,
    parse_spot_list,
    residue_field,
    specialize,
)

laurents = st.dictionaries(st.integers(-6, 6), st.integers(-20, 20), max_size=6).map(IntLaurent)


def _conv(a, b):
    # schoolbook product on plain dicts, the oracle for IntLaurent.__mul__
    out = {}
    for e, x in a.items():
        for f, y in b.items():
            out[e + f] = out.get(e + f, 0) + x * y
    return {e: v for e, v in out.items() if v}


@given(laurents, laurents, laurents)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a - a == IntLaurent(0)


@given(laurents, laurents)
def test_mul_matches_convolution(a, b):
    assert (a * b).c == _conv(a.c, b.c)


@given(laurents, laurents)
def test_bar_is_ring_involution(a, b):
    assert a.bar().bar() == a
    assert (a * b).bar() == a.bar() * b.bar()


@given(laurents)
def test_pretty_roundtrip(a):
    assert parse_laurent(a.pretty()) == a


@settings(max_examples=40)
@given(laurents.filter(lambda a: not a.is_zero()))
def test_factorization_reassembles(a):
    fac = factor_in_Zt(a)
    assert fac.reassemble() == a


@given(st.integers(-8, 8), st.sampled_from([1, -1]), st.integers(-6, 6))
def test_unit_powers(e, sign, n):
    u = IntLaurent.monomial(e, sign)
    p = u ** n
    assert all(type(v) is int for v in p.c.values())
    assert p * u ** (-n) == IntLaurent(1)


def test_cyclotomic_values():
    # Phi_n(1) = p for n = p^k, and 1 for other n > 1
    vals = {n: cyclotomic(n).evaluate(1) for n in range(2, 13)}
    assert vals == {2: 2, 3: 3, 4: 2, 5: 5, 6: 1, 7: 7, 8: 2, 9: 3, 10: 1, 11: 11, 12: 1}
    assert cyclotomic(6) == parse_laurent("t^2 - t + 1")


def test_spot_parsing_and_fields():
    assert parse_spot("generic").kind == "generic"
    assert parse_spot("p=3").p == 3
    m = parse_spot("max=3,t+1")
    assert m.is_maximal() and m.p == 3
    F = residue_field(m)
    assert F.is_finite and F.characteristic == 3
    assert F.is_zero(specialize(parse_laurent("t+1"), m))
    spots = parse_spot_list("generic,phi=6,max=2,t+1,p=5")
    assert [s.label() for s in spots] == ["generic", "phi=6", "max=2,t + 1", "p=5"]


@pytest.mark.parametrize("bad", ["p=4", "max=2,t^2+1", "f=t", "max=3,t", "q=2"])
def test_invalid_spots(bad):
    with pytest.raises(InvalidSpot):
        parse_spot(bad)


def test_phi4_is_not_prime_mod_2():
    # t^2 + 1 = (t + 1)^2 over F_2, so the spot (2, t + 1) lies over Phi_4
    loc = parse_localization("phi4")
    assert loc.excludes(parse_spot("max=2,t+1"))
    assert not loc.excludes(parse_spot("max=3,t+1"))
    assert loc.excludes(PrimeSpot.cyclotomic(4))


def test_bad_localization():
    assert parse_localization("bad", "B2").primes == (2,)
    assert parse_localization("bad", "G2").primes == (2, 3)
    assert parse_localization("bad", "A3").primes == ()
    with pytest.raises(ValueError):
        parse_localization("bad")
