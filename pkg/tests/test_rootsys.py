from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import ALL_TYPES, rs_of
from oracles import classical_positive_roots, e8_roots, positive_root_count
from orbitfocal.rootsys import (
    CartanType,
    DimensionMismatch,
    InvalidCartanType,
    WrongLength,
    ZeroRoot,
    ZeroWeight,
    inner,
    isoparametric_check,
    pairing,
    parse_cartan_type,
    vec,
    weight_from_fundamental,
)

COUNTS = {"A1": 1, "A2": 3, "A7": 28, "B2": 4, "B8": 64, "C3": 9, "C8": 64, "D4": 12,
          "D8": 56, "G2": 6, "F4": 24, "E6": 36, "E7": 63, "E8": 120}


@pytest.mark.parametrize("name", ALL_TYPES)
def test_positive_root_count(name):
    ct = parse_cartan_type(name)
    rs = rs_of(name)
    assert len(rs.positive_roots) == positive_root_count(ct.family, ct.rank)
    if name in COUNTS:
        assert len(rs.positive_roots) == COUNTS[name]


@pytest.mark.parametrize("name", ["A1", "A4", "B3", "B8", "C3", "C8", "D4", "D8"])
def test_classical_closed_forms(name):
    ct = parse_cartan_type(name)
    assert set(rs_of(name).positive_roots) == classical_positive_roots(ct.family, ct.rank)


def test_e8_matches_direct_enumeration():
    rs = rs_of("E8")
    assert set(rs.all_roots()) == e8_roots()


def test_a1_root():
    rs = rs_of("A1")
    assert rs.positive_roots == (vec(1, -1),)


@pytest.mark.parametrize("text", ["C2", "H3", "A0", "E9", "F3", "G3", "D3", "B1", "X", "A-1", ""])
def test_invalid_types(text):
    with pytest.raises(InvalidCartanType):
        parse_cartan_type(text)


def test_parse_is_case_insensitive():
    assert parse_cartan_type("e8") == CartanType("E", 8)
    assert parse_cartan_type(" d_4 ") == CartanType("D", 4)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_structure(name):
    rs = rs_of(name)
    # lexicographic canonical order
    assert list(rs.positive_roots) == sorted(rs.positive_roots)
    for root, coeffs in zip(rs.positive_roots, rs.coefficients):
        assert all(c >= 0 for c in coeffs)
        recon = [sum(c * s[k] for c, s in zip(coeffs, rs.simple_roots)) for k in range(rs.dim)]
        assert tuple(recon) == root
    # closure of positive roots under sums
    roots = set(rs.positive_roots)
    for a in rs.positive_roots:
        for b in rs.positive_roots:
            s = tuple(x + y for x, y in zip(a, b))
            if rs.is_root(s):
                assert s in roots
    # crystallographic pairings
    for a in rs.all_roots():
        for b in rs.positive_roots:
            assert pairing(a, b) in {0, 1, -1, 2, -2, 3, -3}
    # fundamental weights are dual to the simple coroots
    for i, w in enumerate(rs.fundamental_weights):
        for j, s in enumerate(rs.simple_roots):
            assert pairing(w, s) == (1 if i == j else 0)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_highest_root_is_dominant(name):
    rs = rs_of(name)
    top = rs.positive_roots[rs.highest_root]
    assert all(pairing(top, s) >= 0 for s in rs.simple_roots)
    assert rs.height(rs.highest_root) == max(rs.height(i) for i in range(len(rs)))


def test_inner_examples():
    a12, a23, a34 = vec(1, -1, 0, 0), vec(0, 1, -1, 0), vec(0, 0, 1, -1)
    assert inner(a12, a12) == 2
    assert inner(a12, a23) == -1
    assert inner(a12, a34) == 0
    with pytest.raises(DimensionMismatch):
        inner(vec(1, 0), vec(1, 0, 0))


def test_pairing_examples():
    rs = rs_of("A3")
    for a in rs.positive_roots:
        assert pairing(a, a) == 2
    b2 = rs_of("B2")
    assert pairing(vec(1, 0), vec(0, 1)) == 0
    assert pairing(vec(1, 0), vec(1, 0)) == 2
    assert b2.positive_roots  # realization includes the short root (0, 1)
    assert vec(0, 1) in b2.root_index
    with pytest.raises(ZeroRoot):
        pairing(vec(1, 0), vec(0, 0))


def test_weight_from_fundamental_examples():
    a1 = rs_of("A1")
    for k in range(1, 5):
        assert pairing(weight_from_fundamental(a1, [k]), a1.simple_roots[0]) == k
    a2 = rs_of("A2")
    lam = weight_from_fundamental(a2, [1, 0])
    assert [pairing(lam, s) for s in a2.simple_roots] == [1, 0]
    with pytest.raises(ZeroWeight):
        weight_from_fundamental(a2, [0, 0])
    with pytest.raises(WrongLength):
        weight_from_fundamental(a2, [1])


@pytest.mark.parametrize("name", ["A3", "B3", "C4", "D5", "G2", "F4", "E6"])
@given(data=st.data())
def test_weight_round_trip(name, data):
    rs = rs_of(name)
    coeffs = data.draw(st.lists(st.integers(0, 6), min_size=rs.rank, max_size=rs.rank).filter(any))
    lam = weight_from_fundamental(rs, coeffs)
    assert [pairing(lam, s) for s in rs.simple_roots] == coeffs


def test_isoparametric_examples():
    assert isoparametric_check(rs_of("A1")) == 1
    assert isoparametric_check(rs_of("A2")) == 4
    assert isoparametric_check(rs_of("G2")) == 4


def _brute_isopar(rs):
    top = rs.positive_roots[rs.highest_root]
    vals = [inner(a, a) * inner(top, top) / inner(a, top) ** 2
            for a in rs.all_roots() if inner(a, top) != 0]
    return max(vals)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_isoparametric_bound(name):
    rs = rs_of(name)
    val = isoparametric_check(rs)
    assert isinstance(val, Fraction)
    assert val <= 4
    assert val == _brute_isopar(rs)
