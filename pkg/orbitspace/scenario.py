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

import copy
import json
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, TYPE_CHECKING, Union

from .enums import BasisMode, FieldKind, try_enum
from .errors import (
    GroupError,
    MalformedPairing,
    NotEquivariant,
    NotInvariant,
    OrbitSpaceException,
    ParseError,
    ValidationError,
)
from .groups import GroupRep
from .invariants import EquivariantBasis, InvariantBasis
from .poly import Pairing, Polynomial, PolyMap, canonical_pairing, validate_pairing
from .utils import _from_json, fraction_matrix

if TYPE_CHECKING:
    from .types import Scenario as ScenarioPayload, Settings as SettingsPayload

    from typing_extensions import Self

_log = logging.getLogger(__name__)

_IDENTIFIER = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')
_THETA = re.compile(r'\bt(\d+)\b')
PARAMETER = 'lam'


class SolverSettings:
    """Numerical settings shared by every command.

    Attributes
    ----------
    tol: :class:`float`
        Residual tolerance of the equilibrium solver and the corrector.
    max_iter: :class:`int`
        Newton iteration cap.
    step: :class:`float`
        Initial (and largest) arclength step.
    min_step: :class:`float`
        Step below which continuation stops.
    max_steps: :class:`int`
        Accepted steps per direction.
    condition_threshold: :class:`float`
        Condition number above which a Jacobian counts as degenerate.
    isotropy_tol: :class:`float`
        Relative tolerance of numerical isotropy.
    lift_tol: :class:`float`
        Residual tolerance of Hilbert-map lifts.
    lift_retries: :class:`int`
        Random restarts of a failed lift.
    presweep_guesses: :class:`int`
        Random guesses per parameter value when searching seeds.
    invariant_degree: :class:`int`
        Degree cap of invariant discovery.
    equivariant_degree: :class:`int`
        Degree cap of equivariant discovery.
    relation_degree: Optional[:class:`int`]
        Weighted degree cap of relation discovery; twice the largest generator degree when ``None``.
    membership_tol: :class:`float`
        Tolerance of coefficient-set membership in diagnostics.
    membership_samples: :class:`int`
        Sampled points per diagnostic.
    lambda_grid: Optional[List[:class:`float`]]
        Grid of the classifier; five points around ``0`` with spacing ``1e-2`` when ``None``.
    """

    __slots__ = (
        'tol',
        'max_iter',
        'step',
        'min_step',
        'max_steps',
        'condition_threshold',
        'isotropy_tol',
        'lift_tol',
        'lift_retries',
        'presweep_guesses',
        'invariant_degree',
        'equivariant_degree',
        'relation_degree',
        'membership_tol',
        'membership_samples',
        'lambda_grid',
    )

    _FLOATS = ('tol', 'step', 'min_step', 'condition_threshold', 'isotropy_tol', 'lift_tol', 'membership_tol')
    _INTS = (
        'max_iter',
        'max_steps',
        'lift_retries',
        'presweep_guesses',
        'invariant_degree',
        'equivariant_degree',
        'membership_samples',
    )

    def __init__(
        self,
        *,
        tol: float = 1e-10,
        max_iter: int = 50,
        step: float = 1e-2,
        min_step: float = 1e-8,
        max_steps: int = 2000,
        condition_threshold: float = 1e8,
        isotropy_tol: float = 1e-9,
        lift_tol: float = 1e-10,
        lift_retries: int = 8,
        presweep_guesses: int = 32,
        invariant_degree: int = 6,
        equivariant_degree: int = 5,
        relation_degree: Optional[int] = None,
        membership_tol: float = 1e-6,
        membership_samples: int = 10000,
        lambda_grid: Optional[Sequence[float]] = None,
    ) -> None:
        self.tol: float = tol
        self.max_iter: int = max_iter
        self.step: float = step
        self.min_step: float = min_step
        self.max_steps: int = max_steps
        self.condition_threshold: float = condition_threshold
        self.isotropy_tol: float = isotropy_tol
        self.lift_tol: float = lift_tol
        self.lift_retries: int = lift_retries
        self.presweep_guesses: int = presweep_guesses
        self.invariant_degree: int = invariant_degree
        self.equivariant_degree: int = equivariant_degree
        self.relation_degree: Optional[int] = relation_degree
        self.membership_tol: float = membership_tol
        self.membership_samples: int = membership_samples
        self.lambda_grid: Optional[List[float]] = None if lambda_grid is None else [float(x) for x in lambda_grid]

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} tol={self.tol} step={self.step} max_steps={self.max_steps}>'

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SolverSettings) and self.to_dict() == other.to_dict()

    @classmethod
    def from_dict(cls, data: SettingsPayload, *, errors: Optional[List[Tuple[str, str]]] = None) -> Self:
        """Reads settings, reporting problems into ``errors`` (raising :exc:`ValidationError` when not given)."""
        problems: List[Tuple[str, str]] = [] if errors is None else errors
        kwargs: Dict[str, Any] = {}
        for key, value in data.items():
            path = f'settings.{key}'
            if key in cls._FLOATS:
                if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
                    problems.append((path, 'expected a positive number'))
                    continue
                kwargs[key] = float(value)
            elif key in cls._INTS:
                if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                    problems.append((path, 'expected a non-negative integer'))
                    continue
                kwargs[key] = value
            elif key == 'relation_degree':
                if value is not None and (isinstance(value, bool) or not isinstance(value, int) or value < 1):
                    problems.append((path, 'expected a positive integer or null'))
                    continue
                kwargs[key] = value
            elif key == 'lambda_grid':
                if value is not None and (
                    not isinstance(value, list) or not value or not all(isinstance(x, (int, float)) for x in value)
                ):
                    problems.append((path, 'expected a list of numbers or null'))
                    continue
                kwargs[key] = value
            else:
                problems.append((path, 'unknown setting'))
        if errors is None and problems:
            raise ValidationError(problems)
        return cls(**kwargs)

    def to_dict(self) -> SettingsPayload:
        return {name: getattr(self, name) for name in self.__slots__}  # type: ignore

    def replace(self, **overrides: Any) -> SolverSettings:
        """A copy with ``overrides`` applied; ``None`` values are ignored."""
        values = self.to_dict()
        values.update({k: v for k, v in overrides.items() if v is not None})  # type: ignore
        return SolverSettings(**values)


def _theta_names(texts: Sequence[str], known: Optional[int] = None) -> List[str]:
    """``t1..tl`` and ``lam``, with ``l`` the given size or the largest index referenced."""
    if known is None:
        known = max((int(m) for text in texts for m in _THETA.findall(text)), default=0)
    return [f't{i + 1}' for i in range(known)] + [PARAMETER]


def _parse(text: Any, names: Sequence[str], path: str) -> Polynomial:
    if not isinstance(text, str):
        raise ValidationError([(path, 'expected polynomial text')])
    try:
        return Polynomial.parse(text, names)
    except ParseError as exc:
        raise exc.with_path(path) from None


class Scenario:
    """A validated scenario.

    Validation covers the group (shapes, orthogonality, closure and
    commutation), explicit invariant and equivariant bases, polynomial syntax,
    pairings, structures and settings. Problems are collected and raised
    together as a :exc:`~orbitspace.errors.ValidationError`; the first
    polynomial that fails to parse raises a :exc:`~orbitspace.errors.ParseError`.

    Attributes
    ----------
    name: :class:`str`
        Scenario identifier.
    description: :class:`str`
        Free text.
    coordinates: Tuple[:class:`str`, ...]
        Coordinate names of ``V``.
    group: :class:`~orbitspace.groups.GroupRep`
        The symmetry group.
    basis_mode: :class:`~orbitspace.enums.BasisMode`
        Whether invariants are discovered or given.
    basis_degree: Optional[:class:`int`]
        Degree cap of discovery, overriding the settings.
    basis: Optional[:class:`~orbitspace.invariants.InvariantBasis`]
        The explicit basis, when given.
    equivariants: Optional[:class:`~orbitspace.invariants.EquivariantBasis`]
        Explicit equivariant generators, when given.
    kind: :class:`~orbitspace.enums.FieldKind`
        General or Hamiltonian.
    field: Dict[:class:`str`, Any]
        The field section as given.
    pairing: Optional[Tuple[Tuple[:class:`int`, :class:`int`], ...]]
        Canonical pairs, for Hamiltonian scenarios.
    complex_structure: Optional[Tuple[Tuple[:class:`~fractions.Fraction`, ...], ...]]
        ``J`` for Hopf classification.
    hopf_blocks: Optional[List[Tuple[Tuple[:class:`~fractions.Fraction`, ...], ...]]]
        ``A_1..A_4`` for Hamiltonian Hopf classification.
    continuation: Dict[:class:`str`, Any]
        ``lambda0``, ``from``, ``to``, ``step`` and ``seed``.
    settings: :class:`SolverSettings`
        Numerical settings.
    simulation: Dict[:class:`str`, Any]
        ``lambda``, ``T``, ``dt``, ``starts`` and ``radius``.
    """

    __slots__ = (
        '_payload',
        'name',
        'description',
        'coordinates',
        'group',
        'basis_mode',
        'basis_degree',
        'basis',
        'equivariants',
        'kind',
        'field',
        'pairing',
        'complex_structure',
        'hopf_blocks',
        'continuation',
        'settings',
        'simulation',
    )

    def __init__(self, *, data: ScenarioPayload) -> None:
        errors: List[Tuple[str, str]] = []
        self._payload: ScenarioPayload = copy.deepcopy(data)

        name = data.get('name')
        if not isinstance(name, str) or not name:
            errors.append(('name', 'expected a non-empty string'))
            name = '<unnamed>'
        self.name: str = name
        self.description: str = data.get('description', '')

        coordinates = data.get('coordinates')
        if (
            not isinstance(coordinates, list)
            or not coordinates
            or not all(isinstance(c, str) and _IDENTIFIER.fullmatch(c) for c in coordinates)
        ):
            raise ValidationError([('coordinates', 'expected a non-empty list of identifiers')])
        if len(set(coordinates)) != len(coordinates) or PARAMETER in coordinates:
            raise ValidationError([('coordinates', f'names must be distinct and differ from {PARAMETER!r}')])
        self.coordinates: Tuple[str, ...] = tuple(coordinates)
        n = len(coordinates)

        self.group: GroupRep = self._read_group(data.get('group', {}), n, errors)
        if errors:
            raise ValidationError(errors)

        basis = data.get('basis', {'mode': 'discover'})
        self.basis_mode: BasisMode = try_enum(BasisMode, basis.get('mode', 'discover'))
        self.basis_degree: Optional[int] = basis.get('max_degree')
        self.basis: Optional[InvariantBasis] = None
        if basis.get('mode', 'discover') not in BasisMode:
            errors.append(('basis.mode', f'unknown mode {basis.get("mode")!r}'))
        elif self.basis_mode is BasisMode.explicit:
            self.basis = self._read_basis(basis, errors)
        if self.basis_degree is not None and (not isinstance(self.basis_degree, int) or self.basis_degree < 1):
            errors.append(('basis.max_degree', 'expected a positive integer'))

        self.equivariants: Optional[EquivariantBasis] = None
        if 'equivariants' in data:
            self.equivariants = self._read_equivariants(data['equivariants'], errors)

        field = data.get('field')
        self.field: Dict[str, Any] = dict(field) if isinstance(field, dict) else {}
        self.kind: FieldKind = try_enum(FieldKind, self.field.get('kind'))
        self.pairing: Optional[Pairing] = None
        self._read_field(errors)

        structures = data.get('structures', {})
        self.complex_structure = self._read_matrix(
            structures.get('complex_structure'), 'structures.complex_structure', errors
        )
        hopf = structures.get('hopf')
        self.hopf_blocks: Optional[List[Tuple[Tuple[Fraction, ...], ...]]] = None
        if hopf is not None:
            blocks = hopf.get('blocks', [])
            if len(blocks) != 4:
                errors.append(('structures.hopf.blocks', 'expected four matrices'))
            else:
                self.hopf_blocks = [
                    self._read_matrix(block, f'structures.hopf.blocks[{i}]', errors) for i, block in enumerate(blocks)
                ]  # type: ignore

        self.continuation: Dict[str, Any] = self._read_continuation(data.get('continuation', {}), errors)
        self.settings: SolverSettings = SolverSettings.from_dict(data.get('settings', {}), errors=errors)
        self.simulation: Dict[str, Any] = self._read_simulation(data.get('simulation', {}), errors)

        if errors:
            raise ValidationError(errors)
        _log.debug('scenario %r validated', self.name)

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} name={self.name!r} kind={self.kind} dim={self.dim}>'

    @classmethod
    def from_dict(cls, data: ScenarioPayload) -> Self:
        if not isinstance(data, dict):
            raise ValidationError([('', 'expected a JSON object')])
        return cls(data=data)

    def to_dict(self) -> ScenarioPayload:
        return copy.deepcopy(self._payload)

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    @property
    def variable_names(self) -> List[str]:
        """The coordinates followed by ``lam``."""
        return [*self.coordinates, PARAMETER]

    # validation helpers

    def _read_matrix(
        self, value: Any, path: str, errors: List[Tuple[str, str]]
    ) -> Optional[Tuple[Tuple[Fraction, ...], ...]]:
        if value is None:
            return None
        n = len(self.coordinates)
        square = isinstance(value, list) and len(value) == n and all(isinstance(r, list) and len(r) == n for r in value)
        if not square:
            errors.append((path, f'expected a {n}x{n} matrix'))
            return None
        try:
            return fraction_matrix(value)
        except ValueError as exc:
            errors.append((path, str(exc)))
            return None

    def _read_group(self, group: Any, n: int, errors: List[Tuple[str, str]]) -> GroupRep:
        if not isinstance(group, dict):
            errors.append(('group', 'expected an object'))
            return GroupRep(n)
        generators = [
            self._read_matrix(m, f'group.generators[{i}]', errors) for i, m in enumerate(group.get('generators', []))
        ]
        torus = [self._read_matrix(m, f'group.torus[{i}]', errors) for i, m in enumerate(group.get('torus', []))]
        metric = self._read_matrix(group.get('metric'), 'group.metric', errors)
        if errors:
            return GroupRep(n)
        gram = metric if metric is not None else fraction_matrix([[int(i == j) for j in range(n)] for i in range(n)])
        for i, g in enumerate(generators):
            assert g is not None
            moved = [
                [sum(g[k][r] * gram[k][m] * g[m][c] for k in range(n) for m in range(n)) for c in range(n)]
                for r in range(n)
            ]
            if tuple(tuple(row) for row in moved) != gram:
                errors.append((f'group.generators[{i}]', 'matrix is not orthogonal for the metric'))
        if errors:
            return GroupRep(n)
        try:
            return GroupRep.close(
                generators,  # type: ignore
                dim=n,
                torus_generators=torus,  # type: ignore
                metric=metric,
                max_order=group.get('max_order', 1000),
            )
        except GroupError as exc:
            errors.append(('group', str(exc)))
            return GroupRep(n)

    def _read_basis(self, basis: Dict[str, Any], errors: List[Tuple[str, str]]) -> Optional[InvariantBasis]:
        texts = basis.get('generators')
        if not isinstance(texts, list) or not texts:
            errors.append(('basis.generators', 'explicit mode needs a non-empty list of generators'))
            return None
        generators = [_parse(text, self.coordinates, f'basis.generators[{i}]') for i, text in enumerate(texts)]
        names = _theta_names((), len(generators))[:-1]
        relations = [_parse(text, names, f'basis.relations[{i}]') for i, text in enumerate(basis.get('relations', []))]
        try:
            result = InvariantBasis(generators, relations=relations, group=self.group)
            result.validate(self.group)
        except NotInvariant as exc:
            errors.append(('basis.generators', str(exc)))
            return None
        except (ValueError, OrbitSpaceException) as exc:
            errors.append(('basis', str(exc)))
            return None
        return result

    def _read_equivariants(self, value: Any, errors: List[Tuple[str, str]]) -> Optional[EquivariantBasis]:
        n = len(self.coordinates)
        if not isinstance(value, list) or not all(isinstance(F, list) and len(F) == n for F in value):
            errors.append(('equivariants', f'expected a list of maps with {n} components'))
            return None
        maps = [
            PolyMap(
                [_parse(text, self.coordinates, f'equivariants[{i}][{j}]') for j, text in enumerate(F)], ambient_dim=n
            )
            for i, F in enumerate(value)
        ]
        result = EquivariantBasis(maps, ambient_dim=n)
        try:
            result.validate(self.group)
        except NotEquivariant as exc:
            errors.append(('equivariants', str(exc)))
            return None
        return result

    def _read_field(self, errors: List[Tuple[str, str]]) -> None:
        field = self.field
        if field.get('kind') not in FieldKind:
            errors.append(('field.kind', f'expected "general" or "hamiltonian", received {field.get("kind")!r}'))
            return
        known = self.basis.size if self.basis is not None else None
        if self.kind is FieldKind.general:
            given = [key for key in ('coefficients', 'vector_field') if key in field]
            if len(given) != 1:
                errors.append(('field', 'general fields need exactly one of "coefficients" and "vector_field"'))
                return
            if 'coefficients' in field:
                texts = field['coefficients']
                if not isinstance(texts, list):
                    errors.append(('field.coefficients', 'expected a list of polynomial texts'))
                    return
                names = _theta_names(texts, known)
                for i, text in enumerate(texts):
                    _parse(text, names, f'field.coefficients[{i}]')
                if self.equivariants is not None and len(texts) != self.equivariants.size:
                    errors.append(('field.coefficients', f'expected {self.equivariants.size} coefficients'))
            else:
                texts = field['vector_field']
                if not isinstance(texts, list) or len(texts) != self.dim:
                    errors.append(('field.vector_field', f'expected {self.dim} component texts'))
                    return
                for i, text in enumerate(texts):
                    _parse(text, self.variable_names, f'field.vector_field[{i}]')
            return

        given = [key for key in ('hamiltonian', 'hamiltonian_v') if key in field]
        if len(given) != 1:
            errors.append(('field', 'hamiltonian fields need exactly one of "hamiltonian" and "hamiltonian_v"'))
            return
        if 'hamiltonian' in field:
            _parse(field['hamiltonian'], _theta_names([field['hamiltonian']], known), 'field.hamiltonian')
        else:
            _parse(field['hamiltonian_v'], self.variable_names, 'field.hamiltonian_v')
        try:
            pairing = field.get('pairing')
            self.pairing = canonical_pairing(self.dim) if pairing is None else validate_pairing(pairing, self.dim)
        except MalformedPairing as exc:
            errors.append(('field.pairing', str(exc)))

    def _read_continuation(self, value: Dict[str, Any], errors: List[Tuple[str, str]]) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        for key in ('lambda0', 'from', 'to', 'step'):
            if key in value:
                number = value[key]
                if isinstance(number, bool) or not isinstance(number, (int, float)):
                    errors.append((f'continuation.{key}', 'expected a number'))
                    continue
                result[key] = float(number)
        if result.get('step', 1.0) <= 0:
            errors.append(('continuation.step', 'expected a positive number'))
        if 'seed' in value:
            seed = value['seed']
            if not isinstance(seed, list) or not all(isinstance(x, (int, float)) for x in seed):
                errors.append(('continuation.seed', 'expected a list of numbers'))
            else:
                result['seed'] = [float(x) for x in seed]
        return result

    def _read_simulation(self, value: Dict[str, Any], errors: List[Tuple[str, str]]) -> Dict[str, Any]:
        result: Dict[str, Any] = {'lambda': 1.0, 'T': 5.0, 'dt': 1e-3, 'starts': 20, 'radius': 1.0}
        for key, default in list(result.items()):
            if key not in value:
                continue
            number = value[key]
            if isinstance(number, bool) or not isinstance(number, type(default) if key == 'starts' else (int, float)):
                errors.append((f'simulation.{key}', 'expected a number'))
                continue
            if key in ('T', 'dt', 'radius') and number <= 0:
                errors.append((f'simulation.{key}', 'expected a positive number'))
                continue
            result[key] = number
        return result

    # derived values

    def coefficient_texts(self) -> List[str]:
        return list(self.field.get('coefficients', []))

    def parameter_range(self, *, start: Optional[float] = None, stop: Optional[float] = None) -> Tuple[float, float]:
        """The continuation range, flags taking precedence over the file."""
        lam_from = start if start is not None else self.continuation.get('from', self.continuation.get('lambda0', 0.0))
        lam_to = stop if stop is not None else self.continuation.get('to', 1.0)
        return float(lam_from), float(lam_to)


def load_scenario(source: Union[str, Path, Dict[str, Any]]) -> Scenario:
    """Loads a scenario from a catalog name, a JSON file or a payload.

    Raises
    ------
    ParseError
        The file is not valid JSON, or a polynomial text is malformed.
    ValidationError
        The scenario is inconsistent; every problem is listed with its field path.
    """
    from .catalog import CATALOG

    if isinstance(source, dict):
        return Scenario.from_dict(source)  # type: ignore
    if isinstance(source, str) and source in CATALOG:
        return Scenario.from_dict(CATALOG[source])
    path = Path(source)
    if not path.is_file():
        raise ValidationError([('scenario', f'no catalog entry or file named {str(source)!r}')])
    text = path.read_text(encoding='utf-8')
    try:
        data = _from_json(text)
    except json.JSONDecodeError as exc:
        raise ParseError(text, exc.pos, exc.msg, path=str(path)) from None
    except ValueError as exc:
        raise ParseError(text, getattr(exc, 'pos', 0), str(exc), path=str(path)) from None
    _log.info('loaded scenario file %s', path)
    return Scenario.from_dict(data)


__all__ = (
    'PARAMETER',
    'SolverSettings',
    'Scenario',
    'load_scenario',
)
