import pytest

from cotangent_kit.algebra_core import RingSpec
from cotangent_kit.groebner import IdealPresentation
from cotangent_kit.tate import (
    BoundExhaustedError,
    K_OVER_S,
    NonMinimalResolventError,
    S_OVER_R,
    build_resolvent,
    deviations,
    differential_in_maximal_ideal,
)

from conftest import SMALL, analysis

# Variable counts per homological degree 1..5 (internal degree <= 10).
FROZEN_E = {
    "x": [1, 0, 0, 0, 0],
    "ci22": [2, 0, 0, 0, 0],
    "m2": [3, 2, 3, 6, 11],
    "aci": [2, 1, 1, 2, 3],
}
FROZEN_EPS = {
    "x": [0, 0, 0, 0, 0],
    "ci22": [2, 2, 0, 0, 0],
    "m2": [2, 3, 2, 3, 6],
    "aci": [2, 2, 1, 1, 2],
}


@pytest.mark.parametrize("name", SMALL)
def test_resolvent_counts(name):
    A = analysis(name)
    assert [A.resolvent.e[i] for i in range(1, 6)] == FROZEN_E[name]
    assert A.deviations_counts.as_list() == FROZEN_EPS[name]


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("which", ["resolvent", "residue_resolvent"])
def test_resolvents_are_acyclic(name, which):
    X = getattr(analysis(name), which)
    assert X.is_acyclic()
    assert X.algebra.homology_dim(0, 0) == 1


@pytest.mark.parametrize("name", SMALL)
def test_residue_resolvent_differential_lands_in_mX(name):
    X = analysis(name).residue_resolvent
    for i in range(1, X.d + 1):
        for t in range(X.D + 1):
            assert differential_in_maximal_ideal(X, i, t)


def test_m2_variable_degrees():
    X = analysis("m2").resolvent
    assert X.variable_degrees() == {(1, 2): 3, (2, 3): 2, (3, 4): 3, (4, 5): 6, (5, 6): 11}
    # S = Q[x,y]/m^2 is Koszul: the S -> K resolvent is linear.
    Y = analysis("m2").residue_resolvent
    assert Y.variable_degrees() == {(1, 1): 2, (2, 2): 3, (3, 3): 2, (4, 4): 3, (5, 5): 6}


def test_r_to_s_resolvent_is_not_a_minimal_complex():
    # a degree (3, 4) variable kills a product T_a T_b with a scalar coefficient
    assert not differential_in_maximal_ideal(analysis("m2").resolvent, 3, 4)


def test_first_stage_of_residue_resolvent_is_koszul():
    X = analysis("ci22").residue_resolvent
    assert X.variable_degrees()[(1, 1)] == 2
    assert X.variable_degrees()[(2, 2)] == 2


def test_degree_bound_too_small():
    R = RingSpec(("x", "y"))
    x, y = R.gens()
    with pytest.raises(BoundExhaustedError):
        build_resolvent(S_OVER_R, IdealPresentation(R, (x ** 3,)), d=2, D=2)


def test_deviations_need_minimal_k_resolvent():
    A = analysis("ci22")
    with pytest.raises(ValueError):
        deviations(A.resolvent)
    X = build_resolvent(K_OVER_S, A.ideal, 3, 6, minimal=False)
    with pytest.raises(NonMinimalResolventError):
        deviations(X)


def test_summary_is_serializable():
    import json

    s = analysis("aci").resolvent.summary()
    assert json.loads(json.dumps(s))["e"] == {"1": 2, "2": 1, "3": 1, "4": 2, "5": 3}
