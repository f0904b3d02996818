from fractions import Fraction

from hypothesis import given, settings, strategies as st

from powermap import exact as ex

small = st.integers(min_value=-20, max_value=20)


def test_fmt_parse_round_trip():
    for x in [Fraction(0), Fraction(-3, 4), Fraction(7)]:
        assert ex.parse(ex.fmt(x)) == x
    assert ex.fmt(Fraction(1, 2)) == "1/2"
    assert ex.parse_vec(ex.fmt_vec([Fraction(1, 3), 2])) == (Fraction(1, 3), Fraction(2))


def test_reflect_is_involution():
    a = ex.vec([1, -1, 0])
    x = ex.vec([Fraction(3, 2), 0, 5])
    assert ex.reflect(ex.reflect(x, a), a) == x
    assert ex.reflect(a, a) == ex.neg(a)


def test_solve_and_inverse():
    m = [[2, 1], [1, 1]]
    assert ex.solve(m, [3, 2]) == (Fraction(1), Fraction(1))
    assert ex.mat_mul(ex.inverse(m), tuple(map(ex.vec, m))) == ex.identity(2)
    assert ex.solve([[1, 2], [2, 4]], [1, 1]) is None


def test_project_onto_span():
    p = ex.project(ex.vec([1, 2, 3]), [ex.vec([1, 0, 0]), ex.vec([0, 1, 0])])
    assert p == ex.vec([1, 2, 0])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_hermite_rows_span_same_lattice(rows):
    h, piv, u = ex.hermite(rows, 3, transform=True)
    # every input row reduces to zero against the echelon form
    for r in rows:
        rem, _ = ex.reduce_against(h, piv, r)
        assert not any(rem)
    # the transform reproduces the echelon rows
    for i, row in enumerate(u):
        combo = [sum(c * r[j] for c, r in zip(row, rows)) for j in range(3)]
        assert tuple(combo) == (h[i] if i < len(h) else (0, 0, 0))
    # pivots strictly increase and are positive
    assert list(piv) == sorted(set(piv))
    assert all(h[i][piv[i]] > 0 for i in range(len(h)))
