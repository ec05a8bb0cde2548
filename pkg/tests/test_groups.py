from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from orbitspace import (
    ClosureExceeded,
    DimensionMismatch,
    GroupRep,
    IsotropyLabel,
    NotAntisymmetric,
    NotClosed,
    NotCommuting,
    NotOrthogonal,
    Polynomial,
    Subgroup,
    TorusPartPresent,
    act,
    close_group,
    fixed_subspace,
    is_subconjugate,
    isotropy,
    lie_derivative,
    normalizer,
    reynolds,
    same_orbit_type,
    torus_rank_nH,
)

from .conftest import ROTATION


def test_closure_of_minus_identity():
    elements = close_group([[[-1]]])
    assert len(elements) == 2
    assert elements[0] == ((Fraction(1),),)


def test_closure_of_a_third_turn():
    c, s = Fraction(-1, 2), Fraction(1, 2)
    # exact rotation by 2pi/3 in the basis (x, s) with metric diag(1, 3)
    turn = [[c, -3 * s], [s, c]]
    G = GroupRep.close([turn], metric=[[1, 0], [0, 3]])
    assert G.order == 3


def test_closure_of_an_irrational_rotation_is_capped():
    angle = 1.0
    rotation = [[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]]
    with pytest.raises(ClosureExceeded):
        close_group([rotation], max_order=1000)


def test_constructor_validation():
    with pytest.raises(NotOrthogonal):
        GroupRep(2, finite_elements=[[[1, 0], [0, 1]], [[2, 0], [0, 1]]])
    with pytest.raises(NotClosed):
        GroupRep(2, finite_elements=[[[1, 0], [0, 1]], [[0, -1], [1, 0]]])
    with pytest.raises(NotAntisymmetric):
        GroupRep(2, torus_generators=[[[1, 0], [0, 0]]])
    with pytest.raises(NotCommuting):
        GroupRep(2, finite_elements=[[[1, 0], [0, 1]], [[1, 0], [0, -1]]], torus_generators=[ROTATION])


def test_act():
    assert act([[-1, 0], [0, -1]], [2, 3]) == [-2, -3]
    assert act([[1, 0], [0, 1]], [Fraction(1, 3), 5]) == [Fraction(1, 3), 5]
    assert act(ROTATION, [1, 0]) == [0, 1]
    with pytest.raises(DimensionMismatch):
        act(ROTATION, [1, 0, 0])


def test_reynolds_on_z2(z2):
    x = Polynomial.variable(1, 0)
    assert reynolds(x, z2) == 0
    assert reynolds(x**2, z2) == x**2
    assert reynolds(x**3, z2) == 0


def test_reynolds_needs_a_finite_group(so2):
    with pytest.raises(TorusPartPresent):
        reynolds(Polynomial.variable(2, 0), so2)


def test_lie_derivative_of_the_radius(so2):
    r2 = Polynomial.parse('x^2 + y^2', ['x', 'y'])
    assert lie_derivative(r2, ROTATION) == 0
    assert lie_derivative(Polynomial.parse('x', ['x', 'y']), ROTATION) != 0


def test_isotropy_of_the_origin_is_everything(z2, so2):
    assert isotropy([0], z2).is_whole()
    assert isotropy([0, 0], so2).is_whole()
    assert isotropy([0.0, 0.0], so2).is_whole()


def test_tiny_floating_points_can_count_as_the_origin(z2, so2):
    assert isotropy([6e-9], z2).is_trivial()
    assert isotropy([6e-9], z2, atol=1e-5).is_whole()
    assert str(isotropy([6e-9], z2, atol=1e-5).label) == '0.1/t0'
    assert isotropy([0.5], z2, atol=1e-5).is_trivial()
    assert torus_rank_nH([1e-7, 0.0], so2) == 1
    assert torus_rank_nH([1e-7, 0.0], so2, atol=1e-5) == 0


def test_isotropy_of_a_nonzero_point(z2, so2, s1):
    assert isotropy([1], z2).is_trivial()
    assert isotropy([0.3, -0.2], so2).is_trivial()
    H = isotropy([1, 0, 1, 0], s1)
    assert H.torus_dim == 0
    assert str(H.label) == '0/t0'


def test_fixed_subspaces():
    G = GroupRep.close([[[1, 0], [0, -1]]])
    assert fixed_subspace(Subgroup.trivial(G)).dim == 2
    assert fixed_subspace(Subgroup.whole(G)).basis == ((Fraction(1), Fraction(0)),)
    minus = GroupRep.close([[[-1, 0], [0, -1]]])
    assert fixed_subspace(Subgroup.whole(minus)).dim == 0


def test_reflections_of_d3_are_conjugate(d3):
    reflections = [i for i, g in enumerate(d3.finite_elements) if g[0][0] * g[1][1] - g[0][1] * g[1][0] == -1]
    assert len(reflections) == 3
    subgroups = [Subgroup(d3, [i]) for i in reflections]
    assert all(same_orbit_type(subgroups[0], H) for H in subgroups)
    assert same_orbit_type(subgroups[0], subgroups[0])
    assert not same_orbit_type(Subgroup.trivial(d3), Subgroup.whole(d3))
    assert is_subconjugate(Subgroup.trivial(d3), subgroups[1])
    assert not is_subconjugate(subgroups[1], Subgroup.trivial(d3))


def test_normalizer_of_a_reflection_in_d3(d3):
    reflection = next(i for i, g in enumerate(d3.finite_elements) if g == ((1, 0), (0, -1)))
    N = normalizer(Subgroup(d3, [reflection]))
    assert N.finite_member_indices == {0, reflection}


def test_torus_rank_of_the_normalizer_quotient(z2, so2):
    assert torus_rank_nH([1], z2) == 0
    assert torus_rank_nH([1.0, 0.5], so2) == 1
    assert torus_rank_nH([0, 0], so2) == 0


def test_labels_round_trip_through_text():
    label = IsotropyLabel([0, 3], 1)
    assert str(label) == '0.3/t1'
    assert IsotropyLabel.from_text('0.3/t1') == label
    with pytest.raises(ValueError):
        IsotropyLabel.from_text('0.3')


def test_subgroups_must_be_closed(d3):
    rotation = next(i for i, g in enumerate(d3.finite_elements) if g[0][0] == Fraction(-1, 2) and g[1][1] == g[0][0])
    with pytest.raises(NotClosed):
        Subgroup(d3, [rotation])
