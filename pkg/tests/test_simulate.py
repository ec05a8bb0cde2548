from __future__ import annotations

import math

import numpy as np
import pytest

from orbitspace import (
    BlowUp,
    CompiledField,
    DimensionMismatch,
    FieldFamily,
    GridMismatch,
    PolyMap,
    Polynomial,
    commutation_error,
    conservation_drift,
    equivariance_error,
    integrate,
    project_general,
    simulate_pair,
)
from orbitspace.invariants import EquivariantBasis


def field(text: str, lam: float = 0.0) -> CompiledField:
    return CompiledField(PolyMap.parse([text], ['x', 'lam']), lam)


@pytest.fixture(scope='module')
def pitchfork(z2_basis) -> FieldFamily:
    equivariants = EquivariantBasis([PolyMap([Polynomial.parse('x', ['x'])], ambient_dim=1)])
    return FieldFamily.general(z2_basis, equivariants, [Polynomial.parse('lam - t1', ['t1', 'lam'])])


def test_rk4_on_exponential_decay():
    trajectory = integrate(field('-x'), [1.0], 1.0, 1e-3)
    assert trajectory.final[0] == pytest.approx(math.exp(-1.0), abs=1e-8)
    assert len(trajectory) == 1001
    assert trajectory.times[-1] == pytest.approx(1.0)
    assert trajectory.metadata['method'] == 'rk4'
    assert trajectory.rows()[0] == [0.0, 1.0]


def test_pitchfork_settles_on_the_nontrivial_state(pitchfork):
    trajectory = integrate(CompiledField.full(pitchfork, 1.0), [0.1], 10.0, 0.01)
    assert trajectory.final[0] == pytest.approx(1.0, abs=1e-4)


def test_full_and_reduced_flows_commute(pitchfork, z2_basis):
    system = project_general(pitchfork, z2_basis)
    full, reduced, error = simulate_pair(pitchfork, system, z2_basis, [0.5], 1.0, 5.0, 0.01)
    assert error <= 1e-6
    assert reduced.final[0] == pytest.approx(full.final[0] ** 2, abs=1e-6)
    assert full.metadata['level'] == 'full'
    assert reduced.metadata['level'] == 'reduced'


def test_commutation_needs_a_shared_grid(pitchfork, z2_basis):
    system = project_general(pitchfork, z2_basis)
    full = integrate(CompiledField.full(pitchfork, 1.0), [0.5], 1.0, 0.01)
    reduced = integrate(CompiledField.reduced(system, 1.0), [0.25], 1.0, 0.02)
    with pytest.raises(GridMismatch):
        commutation_error(full, reduced, z2_basis)


def test_integration_errors():
    with pytest.raises(ValueError):
        integrate(field('-x'), [1.0], 0.0, 0.1)
    with pytest.raises(ValueError):
        integrate(field('-x'), [1.0], 1.0, -0.1)
    with pytest.raises(DimensionMismatch):
        integrate(field('-x'), [1.0, 2.0], 1.0, 0.1)
    with pytest.raises(DimensionMismatch):
        CompiledField(PolyMap.parse(['x'], ['x']), 0.0)


def test_blow_up_is_reported():
    with np.errstate(over='ignore', invalid='ignore'), pytest.raises(BlowUp) as info:
        integrate(field('x^2'), [1.0], 5.0, 0.01)
    assert 0.9 <= info.value.time <= 5.0


def test_oscillator_conserves_energy(so2_basis):
    family = FieldFamily.hamiltonian_family(so2_basis, Polynomial.parse('t1', ['t1', 'lam']))
    trajectory = integrate(CompiledField.full(family, 0.0), [1.0, 0.0], 10.0, 0.01)
    energy = Polynomial.parse('x^2 + y^2', ['x', 'y'])
    assert conservation_drift(trajectory, energy) <= 1e-8
    with pytest.raises(DimensionMismatch):
        conservation_drift(trajectory, Polynomial.parse('x', ['x']))


def test_flow_of_an_odd_field_is_odd(pitchfork, z2):
    assert equivariance_error(pitchfork, z2, [0.3], 1.0, 2.0, 0.01) <= 1e-12
