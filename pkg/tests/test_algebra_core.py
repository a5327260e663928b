from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cotangent_kit.algebra_core import (
    Echelon,
    Poly,
    RingMismatchError,
    RingSpec,
    SparseMatrixQ,
    complement_representatives,
    format_rational,
    graded_piece_basis,
    kernel_vectors,
    matrix_rank,
    solve_linear,
)

R3 = RingSpec(("x", "y", "z"))
x, y, z = R3.gens()

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monos = st.tuples(*(st.integers(0, 3) for _ in range(3)))
polys = st.dictionaries(monos, small, max_size=5).map(lambda t: Poly(R3, t))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == R3.zero()


@given(polys)
def test_no_stored_zeros(a):
    assert all(c != 0 for c in (a - a.scale(Fraction(1, 2))).terms.values())


def test_power_and_degree():
    p = (x + y) ** 3
    assert p.terms[(2, 1, 0)] == 3
    assert p.degree() == 3 and p.is_homogeneous()
    assert not (x + y * y).is_homogeneous()


def test_weighted_degree():
    R = RingSpec(("a", "b"), (1, 2))
    a, b = R.gens()
    assert (a * a + b).is_homogeneous()
    assert [R.monomial_degree(m) for m in graded_piece_basis(R, 4)] == [4, 4, 4]


def test_ring_mismatch():
    other = RingSpec(("u",))
    with pytest.raises(RingMismatchError):
        x + other.var("u")


def test_bad_weights():
    with pytest.raises(ValueError):
        RingSpec(("a",), (0,))
    with pytest.raises(ValueError):
        RingSpec(("a", "a"))


def test_printing():
    assert str(x * x - Fraction(3, 2) * y * z) == "x^2 - 3/2*y*z"
    assert format_rational(Fraction(-4, 6)) == "-2/3"


def test_graded_piece_sizes():
    assert [len(graded_piece_basis(R3, t)) for t in range(5)] == [1, 3, 6, 10, 15]


vectors = st.lists(st.dictionaries(st.integers(0, 5), st.integers(-3, 3).filter(bool), max_size=4), max_size=8)


@given(vectors)
def test_rank_nullity(cols):
    cols = [{k: Fraction(v) for k, v in c.items()} for c in cols]
    rank, ker = kernel_vectors(cols)
    assert rank + len(ker) == len(cols)
    for k in ker:
        total = {}
        for j, c in k.items():
            for r, v in cols[j].items():
                total[r] = total.get(r, 0) + c * v
        assert not any(total.values())


@given(vectors, vectors)
def test_complement_spans(sub, space):
    sub = [{k: Fraction(v) for k, v in c.items()} for c in sub]
    space = [{k: Fraction(v) for k, v in c.items()} for c in space]
    picked = complement_representatives(sub, space)
    e = Echelon()
    for v in sub + picked:
        e.add(v)
    both = Echelon()
    for v in sub + space:
        both.add(v)
    assert e.rank == both.rank
    assert all(e.contains(v) for v in space)


def test_dense_rank():
    m = SparseMatrixQ.from_dense([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert matrix_rank(m) == 2


@settings(max_examples=50)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=5), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_solve_linear_consistent(rows, x0):
    rhs = [sum(Fraction(a) * b for a, b in zip(r, x0)) for r in rows]
    sol = solve_linear(rows, rhs)
    assert sol is not None
    assert [sum(Fraction(a) * b for a, b in zip(r, sol)) for r in rows] == rhs


def test_solve_linear_inconsistent():
    assert solve_linear([[1, 1], [1, 1]], [1, 2]) is None
