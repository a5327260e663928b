import pytest

from cotangent_kit.algebra_core import RingSpec
from cotangent_kit.groebner import CoefficientRing, IdealPresentation, buchberger, hilbert_function
from cotangent_kit.resolution import (
    TruncationError,
    cyclic_presentation,
    min_free_resolution,
    projective_dimension,
    residue_field_presentation,
    tor_table,
)

from conftest import SMALL, analysis

FROZEN_BETTI_R = {
    "x": {(0, 0): 1, (1, 1): 1},
    "ci22": {(0, 0): 1, (1, 2): 2, (2, 4): 1},
    "m2": {(0, 0): 1, (1, 2): 3, (2, 3): 2},
    "aci": {(0, 0): 1, (1, 2): 2, (2, 3): 1},
}


@pytest.mark.parametrize("name", SMALL)
def test_betti_over_r(name):
    C, B = analysis(name).resolution_R
    assert {k: v for k, v in B.entries.items() if v} == FROZEN_BETTI_R[name]
    assert C.is_minimal()


@pytest.mark.parametrize("name", SMALL + ["twisted"])
def test_euler_characteristic_matches_hilbert_function(name):
    if name == "twisted":
        R = RingSpec(("x", "y", "z"))
        x, y, z = R.gens()
        ideal = IdealPresentation(R, (x * z - y * y, x * y - z * z, y * z - x * x))
        C, B = min_free_resolution(cyclic_presentation(CoefficientRing.polynomial(R), ideal.generators, "S"), 4, 10)
    else:
        ideal = analysis(name).ideal
        C, B = analysis(name).resolution_R
    R = ideal.ring
    hR = hilbert_function(R, [], 10)
    hS = hilbert_function(R, buchberger(ideal).leading_monomials, 10)
    for s in range(11):
        chi = sum((-1) ** i * n * hR[s - t] for (i, t), n in B.entries.items() if t <= s)
        assert chi == hS[s]


@pytest.mark.parametrize("name", SMALL)
def test_hilbert_syzygy_bound(name):
    A = analysis(name)
    pd = projective_dimension(A.resolution_R[1])
    assert pd is not None and pd <= A.ideal.ring.nvars


FROZEN_BETTI_K = {
    "x": [1, 0, 0, 0, 0, 0, 0],
    "ci22": [1, 2, 3, 4, 5, 6, 7],
    "m2": [1, 2, 4, 8, 16, 32, 64],
    "aci": [1, 2, 3, 5, 8, 13, 21],
}


@pytest.mark.parametrize("name", SMALL)
def test_residue_field_betti_numbers(name):
    A = analysis(name)
    assert [A.betti_K[i] for i in range(7)] == FROZEN_BETTI_K[name]
    assert A.resolution_K[0].is_minimal()


def test_tor_of_ci22():
    T = analysis("ci22").tor
    assert T.degree_dims(2) == {t: {4: 1, 5: 2, 6: 1}.get(t, 0) for t in range(11)}
    assert T.degree_dims(1) == {t: {2: 2, 3: 4, 4: 2}.get(t, 0) for t in range(11)}


def test_tor_of_m2():
    assert {t: n for t, n in analysis("m2").tor.degree_dims(2).items() if n} == {4: 4}


def test_homology_of_resolution_vanishes():
    C, _ = analysis("m2").resolution_R
    assert all(C.homology_dim(i, t) == 0 for i in (1, 2) for t in range(11))
    with pytest.raises(TruncationError):
        C.homology_dim(C.max_i, 3)


def test_betti_table_refuses_outside_truncation():
    _, B = analysis("ci22").resolution_R
    with pytest.raises(KeyError):
        B.get(0, 11)


def test_projective_dimension_unknown_when_truncated():
    S = CoefficientRing.quotient(analysis("m2").gb)
    _, B = min_free_resolution(residue_field_presentation(S), 3, 6)
    assert projective_dimension(B) is None


def test_tor_needs_room():
    A = analysis("ci22")
    with pytest.raises(TruncationError):
        tor_table(A.resolution_R[0], A.gb, 3, 10)


def test_unit_relation_rejected():
    R = RingSpec(("x",))
    with pytest.raises(ValueError):
        min_free_resolution(cyclic_presentation(CoefficientRing.polynomial(R), [R.const(1)], "0"), 2, 4)
