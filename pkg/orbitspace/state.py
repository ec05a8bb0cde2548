"""
The MIT License (MIT)

Copyright (c) 2024-present MCausc78

Permission is hereby granted, free of charge, to any person obtaining a
copy of this software and associated documentation files (the "Software"),
to deal in the Software without restriction, including without limitation
the rights to use, copy, modify, merge, publish, distribute, sublicense,
and/or sell copies of the Software, and to permit persons to whom the
Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in
all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS
OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
DEALINGS IN THE SOFTWARE.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional, TYPE_CHECKING

import numpy as np

from .continuation import GFunction, assemble_g
from .enums import BasisMode, FieldKind
from .invariants import (
    EquivariantBasis,
    InvariantBasis,
    discover_equivariants,
    discover_invariants,
    discover_relations,
    rewrite_equivariant,
    rewrite_family,
)
from .groups import GroupRep
from .poly import Pairing, Polynomial, PolyMap, canonical_pairing
from .reduction import FieldFamily, PoissonStructure, poisson_matrix, project_general, reduced_hamiltonian_field
from .scenario import PARAMETER, _theta_names

if TYPE_CHECKING:
    from .abc import ReducedSystem
    from .scenario import Scenario, SolverSettings

_log = logging.getLogger(__name__)


def rewrite_equivariant_family(
    field: PolyMap, invariants: InvariantBasis, equivariants: EquivariantBasis
) -> List[Polynomial]:
    """Coefficients ``c_j(t, lam)`` with ``field(v, lam) = sum_j c_j(theta(v), lam) F_j(v)``.

    Each power of ``lam`` is rewritten separately.
    """
    n = invariants.ambient_dim
    l = invariants.size
    by_power: Dict[int, List[Polynomial]] = {}
    for k, component in enumerate(field):
        for power, coefficient in component.split(n).items():
            by_power.setdefault(power, [Polynomial.zero(n)] * n)[k] = coefficient
    lam = Polynomial.variable(l + 1, l)
    totals = [Polynomial.zero(l + 1) for _ in equivariants.generators]
    for power, components in sorted(by_power.items()):
        coefficients = rewrite_equivariant(PolyMap(components, ambient_dim=n), invariants, equivariants)
        for j, c in enumerate(coefficients):
            if c:
                totals[j] = totals[j] + c.embed(l + 1) * lam**power
    return totals


class SessionState:
    """Symbolic artifacts of one scenario, built on first use and cached.

    Attributes
    ----------
    scenario: :class:`~orbitspace.scenario.Scenario`
        The validated scenario.
    settings: :class:`~orbitspace.scenario.SolverSettings`
        Effective settings, flags applied.
    seed: :class:`int`
        Seed of every random generator handed out.
    max_degree: Optional[:class:`int`]
        Discovery degree cap taking precedence over the scenario and the settings.
    """

    __slots__ = (
        'scenario',
        'settings',
        'seed',
        'max_degree',
        '_basis',
        '_equivariants',
        '_family',
        '_schwarz',
        '_poisson',
        '_reduced',
        '_g',
    )

    def __init__(
        self, *, scenario: Scenario, settings: SolverSettings, seed: int = 0, max_degree: Optional[int] = None
    ) -> None:
        self.scenario: Scenario = scenario
        self.settings: SolverSettings = settings
        self.seed: int = seed
        self.max_degree: Optional[int] = max_degree
        self._basis: Optional[InvariantBasis] = None
        self._equivariants: Optional[EquivariantBasis] = None
        self._family: Optional[FieldFamily] = None
        self._schwarz: Optional[List[Polynomial]] = None
        self._poisson: Optional[PoissonStructure] = None
        self._reduced: Optional[ReducedSystem] = None
        self._g: Optional[GFunction] = None

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} scenario={self.scenario.name!r} seed={self.seed}>'

    def generator(self) -> np.random.Generator:
        """A fresh generator from :attr:`seed`, so results do not depend on call order."""
        return np.random.default_rng(self.seed)

    @property
    def group(self) -> GroupRep:
        return self.scenario.group

    @property
    def theta_names(self) -> List[str]:
        return [f't{i + 1}' for i in range(self.basis.size)]

    @property
    def basis(self) -> InvariantBasis:
        if self._basis is not None:
            return self._basis
        scenario = self.scenario
        if scenario.basis_mode is BasisMode.explicit and scenario.basis is not None:
            basis = scenario.basis
        else:
            degree = self.max_degree or scenario.basis_degree or self.settings.invariant_degree
            _log.info('discovering invariants of %r up to degree %d', scenario.name, degree)
            basis = discover_invariants(scenario.group, degree)
        if not basis.relations and basis.size > 1:
            relations = discover_relations(basis, self.settings.relation_degree)
            basis = basis.with_relations(relations)
        _log.info('invariant basis of size %d with %d relations', basis.size, len(basis.relations))
        self._basis = basis
        return basis

    @property
    def equivariants(self) -> EquivariantBasis:
        if self._equivariants is not None:
            return self._equivariants
        if self.scenario.equivariants is not None:
            result = self.scenario.equivariants
        else:
            degree = self.max_degree or self.settings.equivariant_degree
            _log.info('discovering equivariants of %r up to degree %d', self.scenario.name, degree)
            result = discover_equivariants(self.scenario.group, degree, self.basis)
        self._equivariants = result
        return result

    @property
    def family(self) -> FieldFamily:
        if self._family is not None:
            return self._family
        scenario = self.scenario
        field = scenario.field
        basis = self.basis
        names = _theta_names((), basis.size)
        if scenario.kind is FieldKind.general:
            if 'coefficients' in field:
                coefficients = [
                    Polynomial.parse(text, names) for text in field['coefficients']
                ]
            else:
                upstairs = PolyMap.parse(field['vector_field'], scenario.variable_names)
                coefficients = rewrite_equivariant_family(upstairs, basis, self.equivariants)
                self._schwarz = coefficients
            family = FieldFamily.general(basis, self.equivariants, coefficients)
        else:
            if 'hamiltonian' in field:
                hamiltonian = Polynomial.parse(field['hamiltonian'], names)
            else:
                hamiltonian = rewrite_family(Polynomial.parse(field['hamiltonian_v'], scenario.variable_names), basis)
            family = FieldFamily.hamiltonian_family(basis, hamiltonian, scenario.pairing)
        self._family = family
        return family

    @property
    def schwarz_coefficients(self) -> Optional[List[Polynomial]]:
        """Coefficients found for a field given upstairs, ``None`` otherwise."""
        if self._family is None:
            self._family = self.family
        return self._schwarz

    @property
    def pairing(self) -> Pairing:
        return self.scenario.pairing if self.scenario.pairing is not None else canonical_pairing(self.scenario.dim)

    @property
    def poisson(self) -> PoissonStructure:
        if self._poisson is None:
            self._poisson = poisson_matrix(self.basis, self.pairing)
        return self._poisson

    @property
    def reduced(self) -> ReducedSystem:
        if self._reduced is not None:
            return self._reduced
        family = self.family
        if family.kind is FieldKind.hamiltonian:
            assert family.hamiltonian is not None
            reduced: ReducedSystem = reduced_hamiltonian_field(family.hamiltonian, self.poisson)
        else:
            reduced = project_general(family, self.basis)
        self._reduced = reduced
        return reduced

    @property
    def g(self) -> GFunction:
        if self._g is not None:
            return self._g
        family = self.family
        if family.kind is FieldKind.hamiltonian:
            g = assemble_g(family, self.basis, self.poisson)
        else:
            g = GFunction.from_system(self.reduced, relations=self.basis.relations)
        self._g = g
        return g

    def reduced_names(self) -> List[str]:
        return [*self.theta_names, PARAMETER]


__all__ = (
    'rewrite_equivariant_family',
    'SessionState',
)
