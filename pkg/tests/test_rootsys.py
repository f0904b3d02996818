from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from powermap import exact as ex
from powermap.rootsys import (GroupSpec, Lattice, RootDatum, Twist, build_root_datum, group_spec,
                              is_subweight_lattice, lattice_contains, product, quotient_group, su_spec,
                              torus, twisted_spec, unitary_spec)

TYPES = [("A", 1), ("A", 2), ("A", 4), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("D", 5),
         ("G2", None), ("F4", None), ("E6", None), ("E7", None), ("E8", None)]
COXETER = {"A1": 2, "A2": 3, "A4": 5, "B2": 4, "B3": 6, "C3": 6, "D4": 6, "D5": 8,
           "G2": 6, "F4": 12, "E6": 12, "E7": 18, "E8": 30}
WEYL_ORDER = {"A1": 2, "A2": 6, "B2": 8, "G2": 12, "A3": 24, "B3": 48, "F4": 1152, "E6": 51840}


@pytest.mark.parametrize("family,rank", TYPES)
def test_root_datum_invariants(family, rank):
    rd = build_root_datum(family, rank)
    assert rd.coxeter_number == COXETER[rd.family]
    assert len(rd.positive_roots) == rd.rank * rd.coxeter_number // 2
    half = ex.scale(Fraction(1, 2), [sum(c) for c in zip(*rd.positive_roots)])
    assert rd.weyl_vector == half
    for a in rd.simple_roots:
        assert ex.dot(rd.weyl_vector, ex.coroot(a)) == 1
    for i, a in enumerate(rd.simple_roots):
        for j, b in enumerate(rd.simple_roots):
            assert rd.cartan_matrix[i][j] == 2 * ex.dot(a, b) / ex.dot(b, b)
    # the highest root minus any positive root is a non-negative combination of simple roots
    top = rd.positive_root_coeffs[rd.positive_roots.index(rd.highest_root)]
    for c in rd.positive_root_coeffs:
        assert all(x <= y for x, y in zip(c, top))
    assert is_subweight_lattice(rd.root_lattice, rd)
    assert is_subweight_lattice(rd.weight_lattice, rd)


@pytest.mark.parametrize("name,order", sorted(WEYL_ORDER.items()))
def test_weyl_group_order(name, order):
    assert build_root_datum(name).weyl_group_order == order


def test_rank_one_a():
    rd = build_root_datum("A", 1)
    (alpha,) = rd.positive_roots
    assert rd.weyl_vector == ex.scale(Fraction(1, 2), alpha)


def test_g2_and_e8_coxeter_numbers():
    assert build_root_datum("G2", 2).coxeter_number == 6
    assert build_root_datum("E8", 8).coxeter_number == 30


@pytest.mark.parametrize("bad", [("D", 2), ("A", 0), ("E9", None), ("Q", 3), ("G2", 3)])
def test_invalid_families_rejected(bad):
    with pytest.raises(ValueError):
        build_root_datum(*bad)


def test_family_string_forms():
    assert build_root_datum("B3").family == "B3"
    assert build_root_datum("A1xG2").family == "A1xG2"
    assert product(build_root_datum("A1"), build_root_datum("A1")).family == "A1xA1"
    assert torus(2).family == "T"


def test_lattice_contains_examples():
    assert lattice_contains(Lattice.integer(2), (2, -3))
    a1 = build_root_datum("A", 1)
    (alpha,) = a1.simple_roots
    assert not lattice_contains(a1.root_lattice, ex.scale(Fraction(1, 2), alpha))
    g2 = build_root_datum("G2")
    assert lattice_contains(g2.root_lattice, g2.weyl_vector)
    with pytest.raises(ValueError):
        lattice_contains(Lattice.integer(2), (1, 2, 3))


def test_subweight_examples():
    b2 = build_root_datum("B", 2)
    assert not is_subweight_lattice(Lattice.integer(2, Fraction(1, 3)), b2)
    # (1/2)Z^m against C_m with the standard roots: (1/2)e1 pairs to 1/2 with (e1-e2)^v.
    # The twisted A^(2)_{2m} data is accepted through its translation lattice instead.
    c2 = build_root_datum("C", 2)
    assert not is_subweight_lattice(Lattice.integer(2, Fraction(1, 2)), c2)
    spec = twisted_spec("A2_even", 2)
    assert spec.lattice == Lattice.integer(2, Fraction(1, 2))


def test_quotient_groups():
    a2 = build_root_datum("A", 2)
    q = quotient_group(a2.weight_lattice, a2.root_lattice)
    assert q.order == 3 and q.is_cyclic
    assert quotient_group(a2.root_lattice, a2.root_lattice).order == 1
    e8 = build_root_datum("E8")
    assert quotient_group(e8.weight_lattice, e8.root_lattice).order == 1
    d4 = build_root_datum("D", 4)
    q = quotient_group(d4.weight_lattice, d4.root_lattice)
    assert q.order == 4 and not q.is_cyclic
    with pytest.raises(ValueError):
        quotient_group(a2.root_lattice, a2.weight_lattice)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2), st.lists(st.integers(-5, 5), min_size=2, max_size=2),
       st.integers(-3, 3), st.integers(1, 4))
def test_lattice_closed_under_addition(c1, c2, num, den):
    rd = build_root_datum("G2")
    lat = rd.root_lattice
    x = lat.vector(c1)
    y = lat.vector(c2)
    assert lat.contains(ex.add(x, y))
    z = ex.scale(Fraction(num, den), x)
    if lat.contains(z):
        assert lat.contains(ex.add(z, y))


def test_serialization_round_trip():
    rd = build_root_datum("F4")
    assert RootDatum.from_dict(rd.to_dict()).simple_roots == rd.simple_roots
    lat = rd.weight_lattice
    assert Lattice.from_dict(lat.to_dict()) == lat
    for spec in [group_spec("E6", form="sc"), su_spec(3), twisted_spec("D4_3"), twisted_spec("D2", 3)]:
        back = GroupSpec.from_dict(spec.to_dict())
        assert back.lattice == spec.lattice and back.translations == spec.translations
        assert back.label == spec.label


def test_group_specs():
    assert unitary_spec(1).root_datum.rank == 0
    assert su_spec(3).lattice == build_root_datum("A", 2).weight_lattice
    with pytest.raises(ValueError):
        GroupSpec(build_root_datum("B", 2), Lattice.integer(2, Fraction(1, 3)), "bad")


def test_twist_labels_and_validation():
    assert Twist("D4_3").label() == "D^(3)_4"
    assert Twist("E6_2", 2).label() == "2E^(2)_6"
    with pytest.raises(ValueError):
        Twist("A2_odd")
    with pytest.raises(ValueError):
        Twist("X")
    with pytest.raises(ValueError):
        twisted_spec("H")


def test_twisted_effective_data():
    # A^(2)_{2m-1}: B_m; A^(2)_{2m}: C_m; D^(2)_m: C_{m-1}; E^(2)_6: F4; D^(3)_4: G2
    assert twisted_spec("A2_odd", 3).root_datum.family == "B3"
    assert twisted_spec("A2_even", 3).root_datum.family == "C3"
    assert twisted_spec("D2", 4).root_datum.family == "C3"
    assert twisted_spec("E6_2").root_datum.family == "F4"
    assert twisted_spec("D4_3").root_datum.family == "G2"
    g2 = build_root_datum("G2")
    assert twisted_spec("D4_3").translations == g2.root_lattice.scaled(3)
    f4 = build_root_datum("F4")
    assert twisted_spec("E6_2").translations == f4.root_lattice.scaled(2)


def test_doubled_d2_matches_a2_even():
    # nA^(2)_{2m} ~ 2nD^(2)_{m+1}: the cycle length 2 halves torus coordinates
    for m in (1, 2, 3):
        a = twisted_spec("A2_even", m)
        d = twisted_spec("D2", m + 1, n=2)
        assert a.root_datum.family == d.root_datum.family
        assert d.lattice.scaled(Fraction(1, 2)) == a.lattice
