from __future__ import annotations

import numpy as np
import pytest

from orbitspace import (
    ConvergenceFailure,
    FieldFamily,
    GFunction,
    InvalidSeed,
    NotAnEquilibrium,
    OrbitSpaceException,
    PolyMap,
    Polynomial,
    TerminationReason,
    assemble_g,
    canonical_pairing,
    check_hvs_nondegeneracy,
    continue_branch,
    poisson_matrix,
    presweep,
    solve_equilibrium,
)


@pytest.fixture(scope='module')
def logistic() -> GFunction:
    return GFunction(PolyMap.parse(['2*t1*lam - 2*t1^2'], ['t1', 'lam']))


def test_newton_finds_the_nontrivial_root(logistic):
    found = solve_equilibrium(logistic, [0.9], 1.0, tol=1e-13)
    assert found.theta[0] == pytest.approx(1.0, abs=1e-12)
    assert found.residual <= 1e-13
    assert found.history[0] > found.history[-1]
    assert found.to_dict()['lambda'] == 1.0


def test_newton_falls_to_the_trivial_root_below_zero(logistic):
    found = solve_equilibrium(logistic, [0.5], -1.0)
    assert found.theta[0] == pytest.approx(0.0, abs=1e-10)


def test_newton_reports_max_iter(logistic):
    with pytest.raises(ConvergenceFailure) as info:
        solve_equilibrium(logistic, [0.9], 1.0, max_iter=1)
    assert info.value.reason == 'max_iter'


def test_guess_must_match_the_orbit_space(logistic):
    with pytest.raises(OrbitSpaceException):
        solve_equilibrium(logistic, [0.9, 0.1], 1.0)


def test_nondegeneracy(logistic):
    assert check_hvs_nondegeneracy(logistic, [1.0], 1.0)
    degenerate = check_hvs_nondegeneracy(logistic, [0.0], 0.0)
    assert not degenerate
    assert degenerate.to_dict()['condition_number'] is None
    with pytest.raises(NotAnEquilibrium):
        check_hvs_nondegeneracy(logistic, [0.5], 1.0)


def test_branch_follows_the_diagonal_down_to_the_bifurcation(logistic):
    branch = continue_branch(logistic, ([1.0], 1.0), (1.0, 0.0), step=0.05)
    assert branch.termination is TerminationReason.possible_bifurcation
    assert branch.termination_start is None
    assert len(branch) > 2
    assert branch.thetas()[:, 0] == pytest.approx(branch.lambdas(), abs=1e-4)
    assert all(point.residual_reduced <= 1e-10 for point in branch)
    lambdas = branch.lambdas()
    assert np.all(np.diff(lambdas) < 0)
    assert lambdas[-1] < 0.05


def test_branch_reaches_the_range_end_away_from_the_bifurcation(logistic):
    branch = continue_branch(logistic, ([1.0], 1.0), (0.5, 2.0), step=0.05)
    assert branch.termination is TerminationReason.range_end
    assert branch.termination_start is TerminationReason.range_end
    assert branch.lambdas()[0] == 0.5
    assert branch.lambdas()[-1] == 2.0
    payload = branch.to_dict()
    assert payload['termination'] == 'range end'
    assert payload['seed']['lambda'] == 1.0


@pytest.mark.parametrize(
    'seed, lambda_range',
    [
        (([1.0], 1.0), (1.0, 1.0)),
        (([0.0], 0.0), (0.0, 1.0)),
        (([2.0], 2.0), (0.0, 1.0)),
    ],
)
def test_invalid_seeds(logistic, seed, lambda_range):
    with pytest.raises(InvalidSeed):
        continue_branch(logistic, seed, lambda_range)


def test_seed_off_the_equilibrium_set(logistic):
    with pytest.raises(NotAnEquilibrium):
        continue_branch(logistic, ([0.5], 1.0), (0.0, 1.0))


def test_hamiltonian_g_carries_relations_and_casimirs(s1_basis):
    basis = s1_basis.with_relations([Polynomial.parse('t3^2 + t4^2 - 4*t1*t2', ['t1', 't2', 't3', 't4'])])
    family = FieldFamily.hamiltonian_family(
        basis, Polynomial.parse('t1 + t2 + lam*t3', ['t1', 't2', 't3', 't4', 'lam'])
    )
    g = assemble_g(family, basis, poisson_matrix(basis, canonical_pairing(4)))
    assert g.size == 4
    assert len(g.relations) == 1
    assert [list(map(int, c)) for c in g.casimirs] == [[1, 1, 0, 0]]
    # g_1 = dF/dt3 {t1, t3} = lam * t4
    assert g.evaluate([0.5, 0.5, 1.0, 0.25], 2.0)[0] == pytest.approx(0.5)
    pinned = g.pinned([0.5, 0.5, 1.0, 0.0])
    assert pinned.levels == (1.0,)
    assert pinned.rows == 6


def test_presweep_keeps_only_the_nontrivial_seed(z2_basis, logistic):
    seeds = presweep(logistic, z2_basis, 1.0, np.random.default_rng(0), guesses=16)
    assert len(seeds) == 1
    assert seeds[0].theta[0] == pytest.approx(1.0, abs=1e-10)
    assert seeds[0].condition_number == pytest.approx(1.0)
