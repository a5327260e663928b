from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cotangent_kit.algebra_core import Poly, RingSpec
from cotangent_kit.groebner import (
    CoefficientRing,
    IdealPresentation,
    NotProperIdealError,
    buchberger,
    hilbert_function,
    invariants_of_ideal,
    minimal_generators,
    normal_form,
)

R = RingSpec(("x", "y", "z"))
x, y, z = R.gens()
TWISTED = IdealPresentation(R, (x * z - y * y, x * y - z * z, y * z - x * x))


def test_reduced_basis_of_monomial_ideal():
    gb = buchberger(IdealPresentation(R, (x * x, x * y, x * x + x * y)))
    assert sorted(str(g) for g in gb.elements) == ["x*y", "x^2"]


def test_basis_generates_leading_ideal():
    gb = buchberger(TWISTED)
    for g in gb.elements:
        assert normal_form(g, gb).is_zero()
        assert g.leading_coefficient() == 1


coeffs = st.lists(st.integers(-3, 3), min_size=3, max_size=3)


@given(coeffs, coeffs, coeffs)
def test_ideal_members_reduce_to_zero(a, b, c):
    gb = buchberger(TWISTED)
    ms = [x, y, z]
    mult = [sum((k * v for k, v in zip(cs, ms)), R.zero()) for cs in (a, b, c)]
    f = sum((m * g for m, g in zip(mult, TWISTED.generators)), R.zero())
    assert normal_form(f, gb).is_zero()


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), st.integers(-4, 4), max_size=6))
def test_normal_form_idempotent(terms):
    gb = buchberger(TWISTED)
    f = Poly(R, terms)
    nf = normal_form(f, gb)
    assert normal_form(nf, gb) == nf
    assert all(CoefficientRing.quotient(gb).is_standard(m) for m in nf.terms)


def test_hilbert_function_matches_standard_monomials():
    gb = buchberger(TWISTED)
    S = CoefficientRing.quotient(gb)
    h = hilbert_function(R, gb.leading_monomials, 8)
    assert h == [S.dim(t) for t in range(9)]


def test_quotient_multiplication_is_reduced():
    R2 = RingSpec(("x", "y"))
    gb = buchberger(IdealPresentation(R2, (R2.var("x") ** 2,)))
    S = CoefficientRing.quotient(gb)
    xm = (1, 0)
    assert S.mul_mono(xm, {xm: Fraction(1)}) == {}


def test_minimal_generators_drop_redundant():
    R2 = RingSpec(("x", "y"))
    a, b = R2.gens()
    I = IdealPresentation(R2, (a * a, b * b, a * a + b * b, a ** 3))
    assert len(minimal_generators(I)) == 2


@pytest.mark.parametrize(
    "gens, mu, height, dim",
    [
        (lambda a, b: [a], 1, 1, 1),
        (lambda a, b: [a * a, b * b], 2, 2, 0),
        (lambda a, b: [a * a, a * b, b * b], 3, 2, 0),
        (lambda a, b: [a * a, a * b], 2, 1, 1),
    ],
)
def test_invariants(gens, mu, height, dim):
    R2 = RingSpec(("x", "y"))
    inv = invariants_of_ideal(IdealPresentation(R2, tuple(gens(*R2.gens()))))
    assert (inv.mu, inv.height, inv.krull_dim_S) == (mu, height, dim)


def test_unit_ideal_rejected():
    with pytest.raises(NotProperIdealError):
        invariants_of_ideal(IdealPresentation(R, (R.const(1),)))


def test_inhomogeneous_rejected():
    with pytest.raises(ValueError):
        IdealPresentation(R, (x + y * y,))
