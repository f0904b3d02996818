import random
from fractions import Fraction

import pytest

from powermap import exact as ex
from powermap.affine import (AlcoveReduction, affine_system, diagram_automorphisms, reduce_to_alcove,
                             wall_incidence)
from powermap.rootsys import Lattice, build_root_datum, group_spec, twisted_spec

SMALL = ["A1", "A2", "B2", "G2", "A3", "B3", "C3", "A4", "B4", "C4", "D4", "F4"]


def random_vector(rng, n, span=4, den=7):
    return ex.vec(Fraction(rng.randint(-span * den, span * den), rng.randint(1, den)) for _ in range(n))


def test_g2_centroid_is_interior():
    g2 = build_root_datum("G2")
    v = ex.scale(Fraction(1, 6), g2.weyl_vector)
    red = reduce_to_alcove(g2, v)
    assert red.v_bar == v and red.element.is_identity
    assert wall_incidence(g2, red.v_bar) == frozenset()


def test_zero_reduces_to_itself():
    for name in ("A2", "G2", "E6"):
        rd = build_root_datum(name)
        red = reduce_to_alcove(rd, ex.zero(rd.ambient_dim))
        assert red.v_bar == red.v_tilde == ex.zero(rd.ambient_dim)
        assert red.element.is_identity
        assert wall_incidence(rd, red.v_bar) == frozenset(range(1, rd.rank + 1))


def test_g2_weyl_vector_is_a_translation():
    g2 = build_root_datum("G2")
    red = reduce_to_alcove(g2, g2.weyl_vector)
    assert red.v_bar == ex.zero(3)
    assert red.v_tilde == g2.weyl_vector


def test_g2_half_weyl_vector_walls():
    g2 = build_root_datum("G2")
    red = reduce_to_alcove(g2, ex.scale(Fraction(1, 2), g2.weyl_vector))
    walls = wall_incidence(g2, red.v_bar)
    system = affine_system(g2)
    assert len(walls) == 2
    i, j = sorted(walls)
    # two orthogonal walls: an A1 x A1 sub-diagram
    assert ex.dot(system.gradients[i], system.gradients[j]) == 0


def test_wall_incidence_rejects_outside_points():
    g2 = build_root_datum("G2")
    with pytest.raises(ValueError):
        wall_incidence(g2, g2.weyl_vector)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        reduce_to_alcove(build_root_datum("A2"), (1, 2))


@pytest.mark.parametrize("name", SMALL)
def test_reduction_properties(name):
    rd = build_root_datum(name)
    system = affine_system(rd)
    rng = random.Random(name)
    for _ in range(100):
        v = random_vector(rng, rd.ambient_dim)
        a = reduce_to_alcove(rd, v)
        b = reduce_to_alcove(rd, v, strategy="highest")
        assert system.in_alcove(a.v_bar)
        assert a.element(v) == a.v_bar
        assert a.element.linear_part(v) == a.v_tilde
        assert rd.root_lattice.contains(ex.sub(a.v_tilde, a.v_bar))
        for j in a.walls:
            assert ex.dot(a.v_tilde, system.gradients[j]) >= 0
        # (v_bar, v_tilde) does not depend on the wall order
        assert (a.v_bar, a.v_tilde) == (b.v_bar, b.v_tilde)
        assert reduce_to_alcove(rd, a.v_bar).v_bar == a.v_bar
        assert AlcoveReduction.from_dict(a.to_dict()) == a


def test_orthogonal_complement_untouched():
    rd = build_root_datum("A", 2)  # lives in R^3, roots span the sum-zero plane
    v = ex.vec([Fraction(5, 3), Fraction(1, 2), Fraction(-1, 7)])
    red = reduce_to_alcove(rd, v)
    ones = ex.vec([1, 1, 1])
    assert ex.dot(red.v_bar, ones) == ex.dot(v, ones)


def test_a2_weight_lattice_rotations():
    a2 = build_root_datum("A", 2)
    auts = diagram_automorphisms(a2, a2.weight_lattice)
    assert len(auts) == 3
    perms = sorted(tuple(sorted(d.permutation.items())) for d in auts)
    cycles = [p for p in perms if all(i != j for i, j in p)]
    assert len(cycles) == 2


def test_trivial_automorphism_groups():
    for name in ("G2", "B3", "E8"):
        rd = build_root_datum(name)
        auts = diagram_automorphisms(rd, rd.root_lattice)
        assert len(auts) == 1 and auts[0].is_identity
    e8 = build_root_datum("E8")
    assert len(diagram_automorphisms(e8, e8.weight_lattice)) == 1


def test_non_subweight_lattice_rejected():
    b2 = build_root_datum("B", 2)
    with pytest.raises(ValueError):
        diagram_automorphisms(b2, Lattice.integer(2, Fraction(1, 3)))


@pytest.mark.parametrize("spec", [group_spec("E6", form="sc"), group_spec("E7", form="sc"),
                                  group_spec("D", 4, form="sc"), group_spec("A", 3, form="sc"),
                                  group_spec("B", 3, form="sc"), twisted_spec("D2", 4, form="sc")],
                         ids=lambda s: s.label)
def test_automorphisms_preserve_affine_cartan_matrix(spec):
    auts = diagram_automorphisms(spec, spec.lattice)
    from powermap.rootsys import quotient_group
    assert len(auts) == quotient_group(spec.lattice0, spec.translations).order
    from powermap.affine import system_for
    system = system_for(spec)
    cartan = system.cartan_matrix()
    for d in auts:
        perm = d.permutation
        for (i, j), x in cartan.items():
            assert cartan[(perm[i], perm[j])] == x
    # injective: distinct cosets give distinct permutations
    assert len({tuple(sorted(d.permutation.items())) for d in auts}) == len(auts)
