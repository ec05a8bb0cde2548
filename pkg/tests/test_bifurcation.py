from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from orbitspace import (
    FieldFamily,
    GFunction,
    NoClassification,
    NondegeneracyClass,
    PoissonStructure,
    PolyMap,
    Polynomial,
    Subgroup,
    Verdict,
    ZeroFixedSpace,
    branch_existence_diagnostic,
    canonical_pairing,
    check_isotropy_monotonicity,
    check_transversality,
    classify_linearization,
    codim_criterion,
    coefficient_vector,
    continue_branch,
    discover_equivariants,
    discover_invariants,
    leading_coefficient,
    lift_branch,
    linearization_at,
    poisson_matrix,
    project_general,
    restrict_to_fixed_space,
)
from orbitspace.invariants import EquivariantBasis

from .conftest import ROTATION

TL = ['t1', 'lam']


def pitchfork_with(z2_basis, coefficient: str) -> FieldFamily:
    equivariants = EquivariantBasis([PolyMap([Polynomial.parse('x', ['x'])], ambient_dim=1)])
    return FieldFamily.general(z2_basis, equivariants, [Polynomial.parse(coefficient, TL)])


@pytest.fixture(scope='module')
def pitchfork(z2_basis) -> FieldFamily:
    return pitchfork_with(z2_basis, 'lam - t1')


@pytest.fixture(scope='module')
def hopf(so2_basis) -> FieldFamily:
    names = ['x', 'y']
    equivariants = EquivariantBasis(
        [PolyMap.parse(['x', 'y'], names), PolyMap.parse(['-y', 'x'], names)], ambient_dim=2
    )
    coefficients = [Polynomial.parse('lam - t1', TL), Polynomial.constant(2, 2)]
    return FieldFamily.general(so2_basis, equivariants, coefficients)


def test_pitchfork_is_stationary(pitchfork):
    report = classify_linearization(pitchfork)
    assert report.cls is NondegeneracyClass.stationary
    assert report.sigma0 == pytest.approx(0.0, abs=1e-12)
    assert report.sigma_prime0 == pytest.approx(1.0)
    assert report.transversal
    assert report.to_dict()['class'] == NondegeneracyClass.stationary.value


def test_hopf_needs_the_complex_structure(hopf):
    assert linearization_at(hopf, 0.5) == pytest.approx(np.array([[0.5, -2.0], [2.0, 0.5]]))
    report = classify_linearization(hopf, complex_structure=ROTATION)
    assert report.cls is NondegeneracyClass.hopf
    assert report.values_at_zero['rho'] == pytest.approx(2.0)
    assert report.sigma_prime0 == pytest.approx(1.0)

    unclassified = classify_linearization(hopf)
    assert unclassified.cls is NondegeneracyClass.none
    assert not unclassified.classified
    with pytest.raises(NoClassification):
        check_transversality(hopf, classification=unclassified)


def test_hamiltonian_steady_state(so2_basis):
    family = FieldFamily.hamiltonian_family(so2_basis, Polynomial.parse('lam*t1 + t1^2', TL))
    report = classify_linearization(family)
    assert report.cls is NondegeneracyClass.ham_steady_state
    assert report.sigma0 == pytest.approx(0.0, abs=1e-12)
    assert report.sigma_prime0 == pytest.approx(2.0)


def test_transversality(pitchfork, z2_basis):
    assert check_transversality(pitchfork)
    assert not check_transversality(pitchfork_with(z2_basis, '1 + lam'))
    assert not check_transversality(pitchfork_with(z2_basis, 'lam^2 - t1'))
    assert leading_coefficient(pitchfork) == Polynomial.parse('lam - t1', TL)
    assert coefficient_vector(pitchfork_with(z2_basis, '3 + lam')) == [Fraction(3)]
    with pytest.raises(TypeError):
        check_transversality(pitchfork, z2_basis)  # type: ignore


def test_codim_witness_for_the_one_to_one_resonance(s1_basis):
    report = codim_criterion(s1_basis, poisson_matrix(s1_basis, canonical_pairing(4)), np.random.default_rng(7))
    assert report.found
    assert report.indices == (1, 4)
    assert report.max_residual <= 1e-6
    assert 't4=0' in report.conclusion


def test_codim_search_is_inconclusive_for_a_commutative_bracket(so2_basis):
    report = codim_criterion(so2_basis, poisson_matrix(so2_basis, canonical_pairing(2)), np.random.default_rng(7))
    assert not report
    assert report.to_dict()['indices'] is None


def test_codim_rejects_ratios_that_do_not_shrink(s1_basis):
    eps = Polynomial.constant(4, Fraction(1, 10**13))
    one = Polynomial.constant(4, 1)
    zero = Polynomial.zero(4)
    matrix = [
        [zero, eps, zero, one],
        [-eps, zero, zero, -eps],
        [zero, zero, zero, zero],
        [-one, eps, zero, zero],
    ]
    report = codim_criterion(s1_basis, PoissonStructure(matrix), np.random.default_rng(7))
    assert not report.found


def test_lifted_hopf_branch_rotates(hopf, so2, so2_basis):
    g = GFunction.from_system(project_general(hopf, so2_basis))
    branch = continue_branch(g, ([1.0], 1.0), (0.5, 1.5), step=0.1)
    lift_branch(branch, so2_basis, hopf, so2, np.random.default_rng(5))
    for point in branch:
        assert not point.flagged
        assert float(point.v_lift @ point.v_lift) == pytest.approx(point.lam, abs=1e-9)
        assert point.velocity == pytest.approx([2.0], abs=1e-8)
        assert point.n_H == 1
        assert point.residual_lift <= 1e-8
    assert check_isotropy_monotonicity(branch, so2)


def test_lifted_pitchfork_branch_is_stationary(pitchfork, z2, z2_basis):
    g = GFunction.from_system(project_general(pitchfork, z2_basis))
    branch = continue_branch(g, ([1.0], 1.0), (0.5, 1.5), step=0.1)
    lift_branch(branch, z2_basis, pitchfork, z2, np.random.default_rng(5))
    for point in branch:
        assert point.velocity.size == 0
        assert point.n_H == 0
        assert str(point.isotropy) == '0/t0'
        assert point.residual_lift <= 1e-8


def test_pitchfork_branch_is_predicted(pitchfork, z2):
    classification = classify_linearization(pitchfork)
    diagnostic = branch_existence_diagnostic(
        pitchfork, z2, Subgroup.trivial(z2), np.random.default_rng(11), classification=classification
    )
    assert diagnostic.verdict is Verdict.existence
    assert diagnostic.to_dict()['isotropy'] == '0/t0'
    assert diagnostic.evidence['transversal'] is True


def test_diagnostic_without_transversality_is_inconclusive(z2, z2_basis):
    family = pitchfork_with(z2_basis, '1 + lam')
    classification = classify_linearization(family)
    diagnostic = branch_existence_diagnostic(
        family, z2, Subgroup.trivial(z2), np.random.default_rng(11), classification=classification
    )
    assert diagnostic.verdict is Verdict.inconclusive


def test_hopf_branch_is_predicted(hopf, so2):
    classification = classify_linearization(hopf, complex_structure=ROTATION)
    diagnostic = branch_existence_diagnostic(
        hopf, so2, Subgroup.trivial(so2), np.random.default_rng(11), classification=classification
    )
    assert diagnostic.verdict is Verdict.existence
    assert diagnostic.evidence['codim_upper'] == 1


def test_codim_zero_coefficient_sets_are_inconclusive(so2, so2_basis):
    family = FieldFamily.hamiltonian_family(so2_basis, Polynomial.parse('lam*t1 + t1^2', TL))
    classification = classify_linearization(family)
    diagnostic = branch_existence_diagnostic(
        family, so2, Subgroup.trivial(so2), np.random.default_rng(11), classification=classification
    )
    assert diagnostic.evidence['transversal'] is True
    assert diagnostic.evidence['codim_upper'] == 0
    assert diagnostic.verdict is Verdict.inconclusive
    assert 'codim 0' in diagnostic.detail


@pytest.fixture(scope='module')
def d3_family(d3) -> FieldFamily:
    basis = discover_invariants(d3, 6)
    equivariants = discover_equivariants(d3, 2, basis)
    names = ['t1', 't2', 'lam']
    coefficients = [Polynomial.parse('lam', names)] + [Polynomial.constant(3, 1)] * (equivariants.size - 1)
    return FieldFamily.general(basis, equivariants, coefficients)


def test_restriction_to_a_reflection_line(d3, d3_family):
    reflection = next(i for i, g in enumerate(d3.finite_elements) if g == ((1, 0), (0, -1)))
    restriction = restrict_to_fixed_space(d3_family, d3, Subgroup(d3, [reflection]))
    assert restriction.dim == 1
    assert not restriction.unchanged
    assert len(restriction.vector_field) == 1
    assert restriction.vector_field.ambient_dim == 2


def test_restriction_edge_cases(d3, d3_family):
    assert restrict_to_fixed_space(d3_family, d3, Subgroup.trivial(d3)).unchanged
    with pytest.raises(ZeroFixedSpace):
        restrict_to_fixed_space(d3_family, d3, Subgroup.whole(d3))
