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
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .abc import ReducedSystem
from .enums import FieldKind
from .errors import DimensionMismatch, OrbitSpaceException
from .invariants import EquivariantBasis, InvariantBasis, rewrite_in_generators
from .poly import (
    Pairing,
    Polynomial,
    PolyMap,
    canonical_pairing,
    hamiltonian_vector_field,
    poisson_bracket,
    validate_pairing,
)
from .utils import MISSING

_log = logging.getLogger(__name__)


def theta_lambda_map(basis: InvariantBasis) -> PolyMap:
    """The substitution ``(t, lam) -> (theta(v), lam)`` as a map in ``(v, lam)``."""
    n = basis.ambient_dim
    components = [theta.embed(n + 1) for theta in basis.generators]
    components.append(Polynomial.variable(n + 1, n))
    return PolyMap(components, ambient_dim=n + 1)


def _with_parameter(p: Polynomial) -> Polynomial:
    """Appends an unused ``lam`` variable."""
    return p.embed(p.ambient_dim + 1)


class FieldFamily:
    """A one-parameter family of symmetric vector fields on ``V``.

    A general family is ``X(v, lam) = sum_i f_i(theta(v), lam) F_i(v)``; a
    Hamiltonian family is the Hamiltonian field of ``F(theta(v), lam)`` for a
    canonical pairing.

    Attributes
    ----------
    kind: :class:`~orbitspace.enums.FieldKind`
        Which of the two forms this is.
    basis: :class:`~orbitspace.invariants.InvariantBasis`
        The invariant generators the coefficients are written in.
    equivariants: Optional[:class:`~orbitspace.invariants.EquivariantBasis`]
        The equivariant generators ``F_i`` (general only).
    coefficients: Tuple[:class:`~orbitspace.poly.Polynomial`, ...]
        ``f_i(t, lam)`` in ``l + 1`` variables (general only).
    hamiltonian: Optional[:class:`~orbitspace.poly.Polynomial`]
        The reduced Hamiltonian ``F(t, lam)`` (Hamiltonian only).
    pairing: Optional[Tuple[Tuple[:class:`int`, :class:`int`], ...]]
        The canonical pairs ``(q, p)`` (Hamiltonian only).
    """

    __slots__ = ('kind', 'basis', 'equivariants', 'coefficients', 'hamiltonian', 'pairing', '_field')

    def __init__(
        self,
        *,
        kind: FieldKind,
        basis: InvariantBasis,
        equivariants: Optional[EquivariantBasis] = None,
        coefficients: Iterable[Polynomial] = (),
        hamiltonian: Optional[Polynomial] = None,
        pairing: Optional[Pairing] = None,
    ) -> None:
        self.kind: FieldKind = kind
        self.basis: InvariantBasis = basis
        self.equivariants: Optional[EquivariantBasis] = equivariants
        self.coefficients: Tuple[Polynomial, ...] = tuple(coefficients)
        self.hamiltonian: Optional[Polynomial] = hamiltonian
        self.pairing: Optional[Pairing] = pairing
        self._field: Optional[PolyMap] = None

    @classmethod
    def general(
        cls, basis: InvariantBasis, equivariants: EquivariantBasis, coefficients: Sequence[Polynomial]
    ) -> FieldFamily:
        if len(coefficients) != equivariants.size:
            raise DimensionMismatch(equivariants.size, len(coefficients), 'coefficient count')
        for f in coefficients:
            if f.ambient_dim != basis.size + 1:
                raise DimensionMismatch(basis.size + 1, f.ambient_dim, 'coefficient arity')
        if equivariants.ambient_dim != basis.ambient_dim:
            raise DimensionMismatch(basis.ambient_dim, equivariants.ambient_dim)
        return cls(kind=FieldKind.general, basis=basis, equivariants=equivariants, coefficients=coefficients)

    @classmethod
    def hamiltonian_family(
        cls, basis: InvariantBasis, hamiltonian: Polynomial, pairing: Optional[Sequence[Sequence[int]]] = None
    ) -> FieldFamily:
        if hamiltonian.ambient_dim != basis.size + 1:
            raise DimensionMismatch(basis.size + 1, hamiltonian.ambient_dim, 'hamiltonian arity')
        n = basis.ambient_dim
        pairs = canonical_pairing(n) if pairing is None else validate_pairing(pairing, n)
        return cls(kind=FieldKind.hamiltonian, basis=basis, hamiltonian=hamiltonian, pairing=pairs)

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} kind={self.kind} l={self.basis.size}>'

    @property
    def ambient_dim(self) -> int:
        return self.basis.ambient_dim

    def scaled(self, factor: Any) -> FieldFamily:
        """The same family with every coefficient (or the Hamiltonian) multiplied by ``factor``."""
        if self.kind is FieldKind.hamiltonian:
            assert self.hamiltonian is not None
            return FieldFamily.hamiltonian_family(self.basis, self.hamiltonian.scale(factor), self.pairing)
        assert self.equivariants is not None
        return FieldFamily.general(self.basis, self.equivariants, [f.scale(factor) for f in self.coefficients])

    def full_hamiltonian(self) -> Polynomial:
        """``F(theta(v), lam)`` as a polynomial in ``(v, lam)``."""
        if self.hamiltonian is None:
            raise OrbitSpaceException('not a Hamiltonian family')
        return self.hamiltonian.compose(theta_lambda_map(self.basis))

    def vector_field(self) -> PolyMap:
        """The full-space field ``X(v, lam)``, one component per coordinate of ``V``."""
        if self._field is not None:
            return self._field
        n = self.ambient_dim
        if self.kind is FieldKind.hamiltonian:
            field = hamiltonian_vector_field(self.full_hamiltonian(), self.pairing, dim=n)
        else:
            assert self.equivariants is not None
            substitution = theta_lambda_map(self.basis)
            field = PolyMap.zero(n + 1, n)
            for f, F in zip(self.coefficients, self.equivariants.generators):
                field = field + F.embed(n + 1).scale(f.compose(substitution))
        self._field = field
        return field


class GeneralReducedField(ReducedSystem):
    """The projection ``theta_j' = sum_i f_i(theta, lam) (F_i)_j(theta)`` of a general family.

    Attributes
    ----------
    tables: Tuple[:class:`~orbitspace.poly.PolyMap`, ...]
        ``tables[i][j]`` is the rewrite of ``<F_i, grad theta_j>``.
    coefficients: Tuple[:class:`~orbitspace.poly.Polynomial`, ...]
        The coefficients ``f_i(t, lam)``.
    """

    __slots__ = ('tables', 'coefficients', '_components')

    def __init__(self, tables: Sequence[PolyMap], coefficients: Sequence[Polynomial]) -> None:
        if len(tables) != len(coefficients):
            raise DimensionMismatch(len(tables), len(coefficients), 'table count')
        self.tables: Tuple[PolyMap, ...] = tuple(tables)
        self.coefficients: Tuple[Polynomial, ...] = tuple(coefficients)
        self._components: Optional[PolyMap] = None

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} tables={len(self.tables)}>'

    @property
    def components(self) -> PolyMap:
        if self._components is None:
            size = len(self.tables[0]) if self.tables else self._size_hint()
            total = PolyMap.zero(size + 1, size)
            for table, f in zip(self.tables, self.coefficients):
                total = total + table.embed(size + 1).scale(f)
            self._components = total
        return self._components

    def _size_hint(self) -> int:
        if self.coefficients:
            return self.coefficients[0].ambient_dim - 1
        return 0

    def to_dict(self, names: Sequence[str] = MISSING) -> Dict[str, Any]:
        if names is MISSING:
            names = tuple(f't{i + 1}' for i in range(self.size))
        full = tuple(names) + ('lam',)
        return {
            'kind': 'general',
            'tables': [table.to_text(names) for table in self.tables],
            'coefficients': [f.to_text(full) for f in self.coefficients],
            'components': self.components.to_text(full),
        }


class PoissonStructure:
    """The matrix ``P_ij = {theta_i, theta_j}`` rewritten in the generators.

    Attributes
    ----------
    matrix: Tuple[Tuple[:class:`~orbitspace.poly.Polynomial`, ...], ...]
        The ``l x l`` matrix of polynomials in ``t``.
    basis: Optional[:class:`~orbitspace.invariants.InvariantBasis`]
        The generators it was computed from.
    """

    __slots__ = ('matrix', 'basis')

    def __init__(self, matrix: Sequence[Sequence[Polynomial]], basis: Optional[InvariantBasis] = None) -> None:
        size = len(matrix)
        for row in matrix:
            if len(row) != size:
                raise DimensionMismatch(size, len(row), 'poisson matrix row length')
            for entry in row:
                if entry.ambient_dim != size:
                    raise DimensionMismatch(size, entry.ambient_dim)
        self.matrix: Tuple[Tuple[Polynomial, ...], ...] = tuple(tuple(row) for row in matrix)
        self.basis: Optional[InvariantBasis] = basis

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} size={self.size}>'

    @property
    def size(self) -> int:
        return len(self.matrix)

    def __getitem__(self, index: Tuple[int, int]) -> Polynomial:
        i, j = index
        return self.matrix[i][j]

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self.matrix for entry in row)

    def is_antisymmetric(self) -> bool:
        return all(self.matrix[i][j] == -self.matrix[j][i] for i in range(self.size) for j in range(self.size))

    def bracket(self, f: Polynomial, g: Polynomial) -> Polynomial:
        """``{f, g}(t) = sum_ij df/dt_i P_ij dg/dt_j`` for polynomials in ``t``."""
        total = Polynomial.zero(self.size)
        for i in range(self.size):
            fi = f.differentiate(i)
            if not fi:
                continue
            for j in range(self.size):
                if self.matrix[i][j]:
                    total = total + fi * self.matrix[i][j] * g.differentiate(j)
        return total

    def jacobi_defects(self) -> List[Tuple[Tuple[int, int, int], Polynomial]]:
        """Cyclic sums ``{t_i,{t_j,t_k}} + ...`` that do not vanish on the image of the Hilbert map.

        An empty list means the downstairs Jacobi identity holds modulo the
        relations, the way it holds upstairs.
        """
        l = self.size
        defects = []
        substitution = self.basis.as_map if self.basis is not None else None
        for i in range(l):
            for j in range(i + 1, l):
                for k in range(j + 1, l):
                    cyclic = Polynomial.zero(l)
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for m in range(l):
                            if self.matrix[a][m]:
                                cyclic = cyclic + self.matrix[a][m] * self.matrix[b][c].differentiate(m)
                    if cyclic.is_zero():
                        continue
                    if substitution is not None and cyclic.compose(substitution).is_zero():
                        continue
                    defects.append(((i, j, k), cyclic))
        return defects

    def casimirs(self) -> List[List[Fraction]]:
        """Basis of the rational ``c`` with ``sum_i c_i P_ji = 0`` for every ``j``; ``c . t`` is a Casimir."""
        l = self.size
        rows: List[List[Fraction]] = []
        for j in range(l):
            monomials = sorted({m for entry in self.matrix[j] for m, _ in entry.items()})
            for m in monomials:
                rows.append([self.matrix[j][i].coefficient(m) for i in range(l)])
        return linalg.nullspace(rows, l) if rows else linalg.identity(l)

    def evaluate(self, theta: Sequence[float]) -> np.ndarray:
        flat = PolyMap([entry for row in self.matrix for entry in row], ambient_dim=self.size)
        return flat.compile()(np.asarray(theta, dtype=float)).reshape(self.size, self.size)

    def to_dict(self, names: Sequence[str] = MISSING) -> List[List[str]]:
        return [[entry.to_text(names) for entry in row] for row in self.matrix]


def project_general(family: FieldFamily, basis: InvariantBasis) -> GeneralReducedField:
    """Builds the tables ``<F_i, grad theta_j>`` rewritten in the generators.

    Raises
    ------
    RewriteFailure
        An inner product has no representation in the generators.
    """
    if family.kind is not FieldKind.general or family.equivariants is None:
        raise OrbitSpaceException('project_general needs a general family')
    gradients = basis.gradient_table
    tables = []
    for i, F in enumerate(family.equivariants.generators):
        column = [rewrite_in_generators(F.dot(gradient), basis) for gradient in gradients]
        tables.append(PolyMap(column, ambient_dim=basis.size))
        _log.debug('table %d rewritten', i)
    return GeneralReducedField(tables, family.coefficients)


def poisson_matrix(basis: InvariantBasis, pairing: Optional[Sequence[Sequence[int]]] = None) -> PoissonStructure:
    """The brackets ``{theta_i, theta_j}`` computed exactly and rewritten in the generators."""
    l = basis.size
    zero = Polynomial.zero(l)
    matrix = [[zero] * l for _ in range(l)]
    for i in range(l):
        for j in range(i + 1, l):
            bracket = poisson_bracket(basis.generators[i], basis.generators[j], pairing)
            if bracket.is_zero():
                continue
            entry = rewrite_in_generators(bracket, basis)
            matrix[i][j] = entry
            matrix[j][i] = -entry
    structure = PoissonStructure(matrix, basis)
    if not structure.is_antisymmetric():
        raise OrbitSpaceException('poisson matrix is not antisymmetric')
    return structure


class HamiltonianReducedField(ReducedSystem):
    """``theta_j' = sum_i dF/dt_i(theta, lam) P_ji(theta)``.

    Attributes
    ----------
    hamiltonian: :class:`~orbitspace.poly.Polynomial`
        ``F(t, lam)`` in ``l + 1`` variables.
    poisson: :class:`PoissonStructure`
        The Poisson matrix.
    """

    __slots__ = ('hamiltonian', 'poisson', '_components')

    def __init__(self, hamiltonian: Polynomial, poisson: PoissonStructure) -> None:
        if hamiltonian.ambient_dim != poisson.size + 1:
            raise DimensionMismatch(poisson.size + 1, hamiltonian.ambient_dim, 'hamiltonian arity')
        self.hamiltonian: Polynomial = hamiltonian
        self.poisson: PoissonStructure = poisson
        self._components: Optional[PolyMap] = None

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} size={self.poisson.size}>'

    @property
    def components(self) -> PolyMap:
        if self._components is None:
            l = self.poisson.size
            partials = [self.hamiltonian.differentiate(i) for i in range(l)]
            rows = []
            for j in range(l):
                total = Polynomial.zero(l + 1)
                for i in range(l):
                    entry = self.poisson.matrix[j][i]
                    if entry and partials[i]:
                        total = total + partials[i] * _with_parameter(entry)
                rows.append(total)
            self._components = PolyMap(rows, ambient_dim=l + 1)
        return self._components

    def to_dict(self, names: Sequence[str] = MISSING) -> Dict[str, Any]:
        if names is MISSING:
            names = tuple(f't{i + 1}' for i in range(self.size))
        full = tuple(names) + ('lam',)
        return {
            'kind': 'hamiltonian',
            'hamiltonian': self.hamiltonian.to_text(full),
            'poisson': self.poisson.to_dict(names),
            'components': self.components.to_text(full),
        }


def reduced_hamiltonian_field(hamiltonian: Polynomial, poisson: PoissonStructure) -> HamiltonianReducedField:
    return HamiltonianReducedField(hamiltonian, poisson)


def evaluate_reduced(field: ReducedSystem, theta: Sequence[float], lam: float) -> np.ndarray:
    """The reduced tangent vector at ``(theta, lam)``.

    Raises
    ------
    DimensionMismatch
        ``theta`` has the wrong length.
    """
    return field.evaluate(theta, lam)


class TangencyReport:
    """Result of :func:`check_tangency`.

    Attributes
    ----------
    symbolic: List[:class:`bool`]
        Per relation, whether ``grad R . theta'`` vanishes identically after
        substituting the generators.
    max_residual: :class:`float`
        The largest sampled ``|grad R(theta) . theta'|``.
    violations: List[Dict[:class:`str`, Any]]
        Sampled points above tolerance.
    samples: :class:`int`
        Number of sampled points.
    """

    __slots__ = ('symbolic', 'max_residual', 'violations', 'samples', 'tol')

    def __init__(
        self, *, symbolic: List[bool], max_residual: float, violations: List[Dict[str, Any]], samples: int, tol: float
    ) -> None:
        self.symbolic: List[bool] = symbolic
        self.max_residual: float = max_residual
        self.violations: List[Dict[str, Any]] = violations
        self.samples: int = samples
        self.tol: float = tol

    def __bool__(self) -> bool:
        return not self.violations and all(self.symbolic)

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} ok={bool(self)} max_residual={self.max_residual:.3e}>'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ok': bool(self),
            'symbolic': self.symbolic,
            'max_residual': self.max_residual,
            'violations': self.violations,
            'samples': self.samples,
            'tol': self.tol,
        }


def check_tangency(
    field: ReducedSystem,
    basis: InvariantBasis,
    relations: Optional[Sequence[Polynomial]] = None,
    *,
    sample_count: int = 20,
    tol: float = 1e-10,
    rng: Optional[np.random.Generator] = None,
) -> TangencyReport:
    """Checks that the reduced field is tangent to the relation variety.

    Every relation ``R`` must satisfy ``grad R(theta) . theta' = 0`` on the
    image of the Hilbert map. This is tested symbolically, by substituting
    the generators, and numerically at ``sample_count`` points ``pi(v)`` with
    random ``v`` and ``lam``. Residuals are relative to the size of the terms.
    """
    relations = basis.relations if relations is None else tuple(relations)
    rng = rng if rng is not None else np.random.default_rng(0)
    l = basis.size
    components = field.components
    substitution = theta_lambda_map(basis)
    symbolic = []
    derivatives = []
    for relation in relations:
        directional = PolyMap([_with_parameter(g) for g in relation.gradient()], ambient_dim=l + 1).dot(components)
        derivatives.append(directional)
        symbolic.append(directional.compose(substitution).is_zero())

    violations: List[Dict[str, Any]] = []
    max_residual = 0.0
    if relations:
        evaluate = basis.as_map.compile()
        directional_map = PolyMap(derivatives, ambient_dim=l + 1).compile()
        for sample in range(sample_count):
            v = rng.standard_normal(basis.ambient_dim)
            lam = float(rng.uniform(-1.0, 1.0))
            point = np.append(evaluate(v), lam)
            scale = max(1.0, float(np.max(np.abs(point))) ** max(r.degree for r in relations))
            residuals = np.abs(directional_map(point)) / scale
            for k, residual in enumerate(residuals):
                max_residual = max(max_residual, float(residual))
                if residual > tol:
                    violations.append({'relation': k, 'sample': sample, 'lam': lam, 'residual': float(residual)})
    if violations:
        _log.warning('tangency check found %d violations (max residual %.3e)', len(violations), max_residual)
    return TangencyReport(
        symbolic=symbolic,
        max_residual=max_residual,
        violations=violations,
        samples=sample_count if relations else 0,
        tol=tol,
    )


__all__ = (
    'theta_lambda_map',
    'FieldFamily',
    'GeneralReducedField',
    'PoissonStructure',
    'HamiltonianReducedField',
    'TangencyReport',
    'project_general',
    'poisson_matrix',
    'reduced_hamiltonian_field',
    'evaluate_reduced',
    'check_tangency',
)
