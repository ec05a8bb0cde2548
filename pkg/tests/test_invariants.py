from __future__ import annotations

import numpy as np
import pytest

from orbitspace import (
    ConvergenceFailure,
    GroupRep,
    InvariantBasis,
    NotEquivariant,
    NotInvariant,
    PolyMap,
    Polynomial,
    discover_equivariants,
    discover_invariants,
    discover_relations,
    hilbert_map,
    is_equivariant,
    is_invariant,
    lift_point,
    normal_span,
    orbit_constancy,
    rewrite_family,
    rewrite_in_generators,
)
from orbitspace.invariants import EquivariantBasis

from .conftest import S1_NAMES

XY = ['x', 'y']


def xy(text: str) -> Polynomial:
    return Polynomial.parse(text, XY)


def test_z2_invariants(z2, z2_basis):
    assert z2_basis.generators == (Polynomial.parse('x^2', ['x']),)
    assert is_invariant(Polynomial.parse('x^4 + 3*x^2', ['x']), z2)
    assert not is_invariant(Polynomial.parse('x^3', ['x']), z2)


def test_so2_invariants(so2_basis):
    assert so2_basis.generators == (xy('x^2 + y^2'),)
    assert so2_basis.relations == ()


def test_trivial_group_invariants_are_the_coordinates():
    basis = discover_invariants(GroupRep(2), 1)
    assert basis.generators == (xy('x'), xy('y'))


def test_discovery_needs_a_positive_degree(z2):
    with pytest.raises(ValueError):
        discover_invariants(z2, 0)


def test_d3_invariants_have_degrees_two_and_three(d3):
    basis = discover_invariants(d3, 6)
    assert basis.degrees == (2, 3)
    basis.validate(d3)


def test_z2_equivariants(z2, z2_basis):
    found = discover_equivariants(z2, 3, z2_basis)
    assert found.size == 1
    assert found.generators[0] == PolyMap([Polynomial.parse('x', ['x'])], ambient_dim=1)


def test_so2_equivariants(so2, so2_basis):
    found = discover_equivariants(so2, 3, so2_basis)
    assert found.size == 2
    assert all(F.degree == 1 for F in found.generators)
    assert all(is_equivariant(F, so2) for F in found.generators)
    rotation = PolyMap([xy('-y'), xy('x')], ambient_dim=2)
    identity = PolyMap([xy('x'), xy('y')], ambient_dim=2)
    span = [F for F in found.generators]
    # the generators span the same degree-one slice as the identity and the rotation
    coefficients = np.array([[float(F[k].coefficient(m)) for k in range(2) for m in ((1, 0), (0, 1))] for F in span])
    target = np.array(
        [[float(F[k].coefficient(m)) for k in range(2) for m in ((1, 0), (0, 1))] for F in (identity, rotation)]
    )
    assert np.linalg.matrix_rank(np.vstack([coefficients, target])) == 2


def test_trivial_group_equivariants_start_with_constants():
    found = discover_equivariants(GroupRep(1), 1)
    assert found.generators[0] == PolyMap([Polynomial.constant(1, 1)], ambient_dim=1)


def test_invalid_bases_are_reported(z2):
    with pytest.raises(NotInvariant):
        InvariantBasis([Polynomial.parse('x^3', ['x'])], group=z2).validate(z2)
    with pytest.raises(NotInvariant):
        InvariantBasis(
            [Polynomial.parse('x^2', ['x']), Polynomial.parse('x^4', ['x'])], group=z2
        ).validate(z2)
    with pytest.raises(NotEquivariant):
        EquivariantBasis([PolyMap([Polynomial.parse('x^2', ['x'])], ambient_dim=1)]).validate(z2)


def test_rewrite_examples(so2_basis, z2_basis):
    assert rewrite_in_generators(xy('x^4 + 2*x^2*y^2 + y^4'), so2_basis) == Polynomial.parse('t1^2', ['t1'])
    assert rewrite_in_generators(Polynomial.parse('x^2', ['x']), z2_basis) == Polynomial.parse('t1', ['t1'])
    with pytest.raises(NotInvariant):
        rewrite_in_generators(xy('x'), so2_basis)


def test_rewrite_with_relations_is_pinned(s1_basis):
    p = Polynomial.parse('(q1*q2 + p1*p2)^2 + (q1*p2 - p1*q2)^2', S1_NAMES)
    rewritten = rewrite_in_generators(p, s1_basis)
    names = ['t1', 't2', 't3', 't4']
    assert rewritten == Polynomial.parse('t3^2 + t4^2', names)
    assert rewritten.compose(s1_basis.as_map) == p


def test_rewrite_family_keeps_the_parameter(z2_basis):
    p = Polynomial.parse('lam*x^2 - x^4 + lam^2', ['x', 'lam'])
    assert rewrite_family(p, z2_basis) == Polynomial.parse('lam*t1 - t1^2 + lam^2', ['t1', 'lam'])


def test_relations(so2_basis, s1_basis):
    assert discover_relations(so2_basis) == []
    assert discover_relations(InvariantBasis([xy('x'), xy('y')])) == []
    relations = discover_relations(s1_basis)
    assert relations == [Polynomial.parse('t3^2 + t4^2 - 4*t1*t2', ['t1', 't2', 't3', 't4'])]


def test_hilbert_map_examples(z2_basis, so2_basis, s1_basis):
    assert hilbert_map([2], z2_basis) == [4]
    assert hilbert_map([3, 4], so2_basis) == [25]
    assert hilbert_map([0, 0, 0, 0], s1_basis) == [0, 0, 0, 0]


def test_lift_onto_a_circle(so2_basis):
    v = lift_point([25.0], so2_basis, [1.0, 1.0])
    assert float(v @ v) == pytest.approx(25.0, abs=1e-10)


def test_lift_of_zero_is_the_origin(s1_basis):
    assert not np.any(lift_point([0.0, 0.0, 0.0, 0.0], s1_basis))


def test_lift_outside_the_image_fails(z2_basis):
    with pytest.raises(ConvergenceFailure):
        lift_point([-1.0], z2_basis, [0.5])


def test_lift_onto_an_s1_orbit(s1_basis, rng):
    target = [0.5, 0.5, 1.0, 0.0]
    v = lift_point(target, s1_basis, rng=rng)
    assert np.asarray(hilbert_map(v, s1_basis), dtype=float) == pytest.approx(target, abs=1e-10)


def test_gradients_span_the_normal_space(so2, so2_basis, d3, s1, s1_basis, rng):
    assert normal_span(so2_basis, so2, rng.standard_normal(2))
    assert normal_span(discover_invariants(d3, 6), d3, rng.standard_normal(2))
    assert normal_span(s1_basis, s1, rng.standard_normal(4))


def test_generators_are_constant_on_orbits(so2, so2_basis, s1, s1_basis, rng):
    assert orbit_constancy(so2_basis, so2, rng.standard_normal(2)) <= 1e-10
    assert orbit_constancy(s1_basis, s1, rng.standard_normal(4)) <= 1e-10
