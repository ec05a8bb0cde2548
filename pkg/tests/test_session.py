from __future__ import annotations

import pytest

from orbitspace import (
    NondegeneracyClass,
    Polynomial,
    Scenario,
    Session,
    TerminationReason,
    ValidationError,
    Verdict,
    catalog_names,
    load_scenario,
    solve_equilibrium,
)


def test_seed_must_be_an_integer():
    with pytest.raises(TypeError):
        Session('z2-pitchfork', seed=1.5)  # type: ignore


def test_reduce_the_pitchfork(sessions):
    payload = sessions['z2-pitchfork'].reduce()
    assert payload['scenario'] == 'z2-pitchfork'
    assert payload['invariants'] == ['1 * x^2']
    assert payload['relations'] == []
    assert payload['reduced']['tables'] == [['2 * t1']]
    (component,) = payload['reduced']['components']
    names = ['t1', 'lam']
    assert Polynomial.parse(component, names) == Polynomial.parse('2*t1*lam - 2*t1^2', names)


def test_reduce_the_resonance(sessions):
    payload = sessions['s1-resonance'].reduce()
    names = ['t1', 't2', 't3', 't4']
    (relation,) = payload['relations']
    assert Polynomial.parse(relation, names) == Polynomial.parse('t3^2 + t4^2 - 4*t1*t2', names)
    assert payload['jacobi_defects'] == []
    assert payload['casimirs'] == [['1', '1', '0', '0']]
    assert payload['equivariants'] == []


def test_pitchfork_branch(sessions):
    branch = sessions['z2-pitchfork'].continue_branch()
    assert branch.termination is TerminationReason.possible_bifurcation
    assert branch.metadata['isotropy_violations'] == []
    assert branch.metadata['scenario'] == 'z2-pitchfork'
    assert branch.metadata['n_H'] == 'torus rank, finite-part quotient ignored'
    for point in branch:
        assert point.theta[0] == pytest.approx(point.lam, abs=1e-4)
        assert point.v_lift is not None or point.flagged


def test_pitchfork_branch_ends_at_the_symmetric_origin(sessions):
    branch = sessions['z2-pitchfork'].continue_branch()
    origin = [p for p in branch if p.v_lift is not None and abs(p.lam) <= 1e-12]
    assert origin
    for point in origin:
        assert str(point.isotropy) == '0.1/t0'
        assert point.n_H == 0
    assert all(str(p.isotropy) == '0/t0' for p in branch if p.v_lift is not None and p.lam > 0.01)


def test_hopf_branch_rotates_with_unit_speed(sessions):
    branch = sessions['so2-hopf'].continue_branch()
    (seed,) = [p for p in branch if p.lam == 1.0]
    assert seed.velocity == pytest.approx([1.0], abs=1e-8)
    assert str(seed.isotropy) == '0/t0'
    assert seed.n_H == 1


def test_resonance_branch_from_the_presweep(sessions):
    session = sessions['s1-resonance']
    state = session.state
    branch = session.continue_branch()
    lams = [p.lam for p in branch]
    assert min(lams) == pytest.approx(0.3)
    assert max(lams) == pytest.approx(0.7)
    for point in branch:
        assert point.residual_reduced <= 1e-10
        assert point.condition_number < 1e6
        assert not point.flagged
        assert point.residual_lift <= 1e-8

    middle = min(branch, key=lambda p: abs(p.lam - 0.5))
    g = state.g.pinned(middle.theta)
    for lam in (middle.lam - 0.05, middle.lam + 0.05):
        resolved = solve_equilibrium(g, middle.theta, lam, tol=state.settings.tol, max_iter=state.settings.max_iter)
        assert resolved.iterations <= 5
        assert resolved.residual <= 1e-10


def test_pitchfork_equilibria(sessions):
    payload = sessions['z2-pitchfork'].equilibria(1.0)
    (record,) = payload['equilibria']
    assert record['theta'] == pytest.approx([1.0], abs=1e-10)
    assert record['isotropy'] == '0/t0'
    assert abs(record['v_lift'][0]) == pytest.approx(1.0, abs=1e-8)


def test_classification_of_the_catalog(sessions):
    assert sessions['z2-pitchfork'].classify().cls is NondegeneracyClass.stationary
    assert sessions['so2-hopf'].classify().cls is NondegeneracyClass.hopf
    assert sessions['so2-steady'].classify().cls is NondegeneracyClass.ham_steady_state


def test_transversality_payload(sessions):
    payload = sessions['z2-pitchfork'].transversality()
    assert payload['transversal'] is True
    assert payload['value_at_zero'] == '0'
    assert payload['derivative_at_zero'] == '1'


def test_codim_on_the_resonance(sessions):
    report = sessions['s1-resonance'].codim()
    assert report.found
    assert report.indices == (1, 4)


def test_diagnose_by_label(sessions):
    (diagnostic,) = sessions['z2-pitchfork'].diagnose('0/t0')
    assert diagnostic.verdict is Verdict.existence
    with pytest.raises(ValidationError):
        sessions['z2-pitchfork'].diagnose('0/t3')
    with pytest.raises(ValidationError):
        sessions['z2-pitchfork'].diagnose('nonsense')


def test_restriction_is_a_loadable_scenario(sessions):
    session = sessions['d3-plane']
    G = session.state.group
    reflection = next(i for i, g in enumerate(G.finite_elements) if g == ((1, 0), (0, -1)))
    payload = session.restrict([reflection])
    restricted = load_scenario(payload)
    assert isinstance(restricted, Scenario)
    assert restricted.dim == 1
    assert session.restrict([0]) == session.scenario.to_dict()


def test_simulation_commutes(sessions):
    report = sessions['z2-pitchfork'].simulate(starts=2)
    assert len(report.starts) == 2
    assert report.max_commutation_error <= 1e-6
    assert report.equivariance_error <= 1e-10
    assert report.energy_drift is None


def test_hamiltonian_simulation_conserves_energy(sessions):
    report = sessions['s1-resonance'].simulate(starts=1)
    assert report.energy_drift <= 1e-8
    assert report.relation_drift <= 1e-6
    assert report.max_commutation_error <= 1e-6


@pytest.mark.slow
@pytest.mark.parametrize('name', catalog_names())
def test_catalog_checks_pass(sessions, name: str):
    result = sessions[name].check()
    assert result['ok'], [c for c in result['checks'] if not c['ok']]


def test_same_seed_same_result():
    first = Session('s1-resonance', seed=4).equilibria(0.5)
    second = Session('s1-resonance', seed=4).equilibria(0.5)
    assert first == second


def test_catalog_listing():
    names = [entry['name'] for entry in Session.catalog()]
    assert names == catalog_names()
