import pytest

from cotangent_kit.algebra_core import RingSpec
from cotangent_kit.ci_analysis import Analysis
from cotangent_kit.cotangent import (
    STAGE_HOMOLOGY,
    build_L,
    conormal_dims,
    cotangent_dims,
    cotangent_via_stage_homology,
)
from cotangent_kit.groebner import IdealPresentation

from conftest import SMALL, analysis

# nonzero dim T_i(S/R, S)_t for 0 <= i <= 4, t <= 10
FROZEN_T = {
    "x": {(1, 1): 1},
    "ci22": {(1, 2): 2, (1, 3): 4, (1, 4): 2},
    "m2": {(1, 2): 3, (1, 3): 4, (2, 4): 1, (4, 6): 1},
    "aci": {(1, 2): 2, (1, 3): 3, **{(1, t): 1 for t in range(4, 11)}},
}


def nonzero(table):
    return {k: v for k, v in table.dims.items() if v}


@pytest.mark.parametrize("name", SMALL)
def test_frozen_cotangent_dims(name):
    assert nonzero(analysis(name).cotangent_S) == FROZEN_T[name]


@pytest.mark.parametrize("name", SMALL)
def test_t1_is_conormal(name):
    A = analysis(name)
    assert A.cotangent_S.degree_dims(1) == conormal_dims(A.ideal, A.D)


def test_m2_cotangent_with_residue_coefficients():
    A = analysis("m2")
    T = A.cotangent_K
    # L (x) K has zero differential for m2: T_i(S/R, K) counts the generators of L_i.
    assert {i: sum(T.degree_dims(i).values()) for i in range(1, 5)} == {1: 3, 2: 2, 3: 3, 4: 6}


def test_aci_needs_hom_bound_six_for_witness():
    A = analysis("aci", d=6)
    assert A.cotangent_S.witness(5) == (5, 7, 1)
    assert all(A.cotangent_S.witness(i) is None for i in (2, 3, 4))


@pytest.mark.parametrize("name, i", [("m2", 3), ("m2", 4), ("aci", 3), ("aci", 4)])
def test_stage_route_agrees(name, i):
    # the L-route needs L_(i+2), so T_5 is read at hom bound 6
    A = analysis(name, d=6)
    stage = cotangent_via_stage_homology(A.resolvent, i)
    assert stage.route == STAGE_HOMOLOGY
    assert stage.degree_dims(i + 1) == A.cotangent_S.degree_dims(i + 1)


def test_stage_route_index_guard():
    with pytest.raises(ValueError):
        cotangent_via_stage_homology(analysis("m2").resolvent, 2)


def test_upper_bound_rows_flagged():
    A = analysis("m2")
    T = cotangent_dims(A.L, "S", A.d, A.D)
    assert T.upper_bound_rows == [A.d]
    assert any(r.get("upper_bound_only") for r in T.rows())


def test_L_rejects_residue_resolvent():
    with pytest.raises(ValueError):
        build_L(analysis("m2").residue_resolvent)


def test_redundant_generator_changes_L_but_not_T():
    R = RingSpec(("x", "y"))
    x, y = R.gens()
    from cotangent_kit.tate import S_OVER_R, build_resolvent

    ideal = IdealPresentation(R, (x * x, y * y, x * x + y * y))
    X = build_resolvent(S_OVER_R, ideal, 5, 10, minimal=False)
    L = build_L(X)
    assert L.ranks()[1] == 3 and L.ranks()[2] == 1
    T = cotangent_dims(L, "S", 4, 10)
    assert T.dims == analysis("ci22").cotangent_S.dims


def test_degree_bound_guard():
    A = analysis("x")
    with pytest.raises(ValueError):
        cotangent_dims(A.L, "S", 2, A.D + 1)
    with pytest.raises(ValueError):
        cotangent_dims(A.L, "M", 2, A.D)


@pytest.mark.parametrize("name", SMALL)
def test_rank_L_is_shifted_deviation(name):
    # rank L_i = eps_(i+1) for i >= 2; rank L_1 = eps_2 + n - eps_1 (variables of R lying in I)
    A = analysis(name)
    eps, n = A.deviations_counts, A.ideal.ring.nvars
    assert A.L.rank(1) == eps[2] + n - eps[1]
    assert all(A.L.rank(i) == eps[i + 1] for i in range(2, A.d))
