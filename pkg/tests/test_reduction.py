from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from orbitspace import (
    DimensionMismatch,
    FieldFamily,
    GeneralReducedField,
    GroupRep,
    InvariantBasis,
    PoissonStructure,
    PolyMap,
    Polynomial,
    canonical_pairing,
    check_tangency,
    evaluate_reduced,
    poisson_matrix,
    project_general,
    reduced_hamiltonian_field,
)
from orbitspace.invariants import EquivariantBasis

T = ['t1', 't2', 't3', 't4']
TL = [*T, 'lam']


def t(text: str, names=T) -> Polynomial:
    return Polynomial.parse(text, names)


@pytest.fixture(scope='module')
def pitchfork(z2_basis) -> FieldFamily:
    equivariants = EquivariantBasis([PolyMap([Polynomial.parse('x', ['x'])], ambient_dim=1)])
    return FieldFamily.general(z2_basis, equivariants, [Polynomial.parse('lam - t1', ['t1', 'lam'])])


@pytest.fixture(scope='module')
def hopf(so2_basis) -> FieldFamily:
    names = ['x', 'y']
    equivariants = EquivariantBasis(
        [PolyMap.parse(['x', 'y'], names), PolyMap.parse(['-y', 'x'], names)], ambient_dim=2
    )
    coefficients = [Polynomial.parse('lam - t1', ['t1', 'lam']), Polynomial.constant(2, 1)]
    return FieldFamily.general(so2_basis, equivariants, coefficients)


@pytest.fixture(scope='module')
def s1_poisson(s1_basis) -> PoissonStructure:
    return poisson_matrix(s1_basis, canonical_pairing(4))


def test_pitchfork_reduces_to_the_logistic_field(pitchfork, z2_basis):
    reduced = project_general(pitchfork, z2_basis)
    assert reduced.tables[0] == PolyMap([Polynomial.parse('2*t1', ['t1'])], ambient_dim=1)
    assert reduced.components == PolyMap.parse(['2*t1*lam - 2*t1^2'], ['t1', 'lam'])
    assert evaluate_reduced(reduced, [1.0], 1.0) == pytest.approx([0.0])
    assert evaluate_reduced(reduced, [1.0], 2.0) == pytest.approx([2.0])
    with pytest.raises(DimensionMismatch):
        evaluate_reduced(reduced, [1.0, 2.0], 1.0)


def test_rotation_drops_out_of_the_hopf_reduction(hopf, so2_basis):
    reduced = project_general(hopf, so2_basis)
    assert reduced.tables[0] == PolyMap.parse(['2*t1'], ['t1'])
    assert reduced.tables[1].is_zero()
    assert reduced.to_dict()['tables'] == [['2 * t1'], ['0']]


def test_trivial_group_reduction_is_the_field_itself():
    names = ['x', 'y']
    basis = InvariantBasis([Polynomial.parse('x', names), Polynomial.parse('y', names)], group=GroupRep(2))
    equivariants = EquivariantBasis([PolyMap.parse(['x', 'y'], names)])
    family = FieldFamily.general(basis, equivariants, [Polynomial.constant(3, 1)])
    reduced = project_general(family, basis)
    assert reduced.tables[0] == PolyMap.parse(['t1', 't2'], ['t1', 't2'])


def test_full_field_of_a_general_family(pitchfork):
    assert pitchfork.vector_field() == PolyMap.parse(['lam*x - x^3'], ['x', 'lam'])


def test_s1_poisson_matrix(s1_poisson):
    P = s1_poisson
    assert P[0, 1] == 0
    assert P[0, 2] == t('t4')
    assert P[0, 3] == t('-t3')
    assert P[1, 2] == t('-t4')
    assert P[1, 3] == t('t3')
    assert P[2, 3] == t('2*t1 - 2*t2')
    assert P.is_antisymmetric()


def test_s1_poisson_matrix_satisfies_jacobi(s1_poisson):
    assert s1_poisson.jacobi_defects() == []


def test_s1_casimir_is_the_total_action(s1_poisson):
    assert s1_poisson.casimirs() == [[Fraction(1), Fraction(1), Fraction(0), Fraction(0)]]
    assert s1_poisson.bracket(t('t1 + t2'), t('t3^2 + t1*t4')) == 0


def test_jacobi_defects_are_reported_for_a_broken_matrix():
    zero = Polynomial.zero(3)
    x1, x2 = Polynomial.variable(3, 0), Polynomial.variable(3, 1)
    # {t1, t2} = t1 with {t1, t3} = t2 leaves the cyclic sum -t2
    broken = PoissonStructure([[zero, x1, x2], [-x1, zero, zero], [-x2, zero, zero]])
    assert broken.is_antisymmetric()
    assert broken.jacobi_defects()
    assert not PoissonStructure([[zero, x1, zero], [x1, zero, zero], [zero, zero, zero]]).is_antisymmetric()


def test_reduced_hamiltonian_field_is_tangent(s1_basis, s1_poisson):
    basis = s1_basis.with_relations([t('t3^2 + t4^2 - 4*t1*t2')])
    F = Polynomial.parse('t1 + t2 + t3*lam + t1^2', TL)
    field = reduced_hamiltonian_field(F, s1_poisson)
    assert field.components[0] == Polynomial.parse('t4*lam', TL)
    report = check_tangency(field, basis, rng=np.random.default_rng(3))
    assert report
    assert report.symbolic == [True]
    assert report.to_dict()['ok'] is True


def test_tangency_catches_a_field_leaving_the_variety(s1_basis):
    basis = s1_basis.with_relations([t('t3^2 + t4^2 - 4*t1*t2')])
    table = PolyMap([t('t1'), Polynomial.zero(4), Polynomial.zero(4), Polynomial.zero(4)], ambient_dim=4)
    field = GeneralReducedField([table], [Polynomial.constant(5, 1)])
    report = check_tangency(field, basis, rng=np.random.default_rng(3))
    assert not report
    assert report.symbolic == [False]
    assert report.violations


def test_hamiltonian_family_full_field(s1_basis):
    family = FieldFamily.hamiltonian_family(s1_basis, Polynomial.parse('t1', TL))
    names = ['q1', 'p1', 'q2', 'p2', 'lam']
    assert family.vector_field() == PolyMap.parse(['p1', '-q1', '0', '0'], names)
    with pytest.raises(DimensionMismatch):
        FieldFamily.hamiltonian_family(s1_basis, Polynomial.parse('t1', ['t1', 'lam']))
