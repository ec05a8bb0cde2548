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
import math
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg as sla

from . import linalg
from .errors import ConvergenceFailure, DimensionMismatch, NotEquivariant, NotInvariant, RewriteFailure
from .groups import (
    GroupRep,
    Subgroup,
    TORUS_SAMPLE_TIMES,
    fixed_subspace,
    isotropy,
    lie_derivative,
    map_lie_derivative,
    orbit_sample,
)
from .poly import Monomial, Polynomial, PolyMap, default_names, grevlex_key, monomials_of_degree
from .utils import MISSING, is_exact

_log = logging.getLogger(__name__)


def _coordinates(polys: Sequence[Polynomial]) -> Tuple[List[Monomial], List[List[Fraction]]]:
    """Writes polynomials as columns over the union of their monomials.

    Returns the row monomials and the matrix ``rows x len(polys)``.
    """
    monomials = sorted({m for p in polys for m, _ in p.items()}, key=grevlex_key, reverse=True)
    index = {m: r for r, m in enumerate(monomials)}
    rows = [[Fraction(0)] * len(polys) for _ in monomials]
    for c, p in enumerate(polys):
        for m, value in p.items():
            rows[index[m]][c] = value
    return monomials, rows


def _solve_in_span(columns: Sequence[Polynomial], target: Polynomial) -> Optional[List[Fraction]]:
    """Exact coefficients ``c`` with ``sum c_k columns[k] = target``, or ``None``."""
    if target.is_zero():
        return [Fraction(0)] * len(columns)
    if not columns:
        return None
    monomials, rows = _coordinates(list(columns) + [target])
    matrix = [row[:-1] for row in rows]
    rhs = [row[-1] for row in rows]
    return linalg.solve(matrix, rhs, len(columns))


def _vector_of(p: Polynomial, index: Dict[Monomial, int]) -> List[Fraction]:
    vector = [Fraction(0)] * len(index)
    for m, c in p.items():
        vector[index[m]] = c
    return vector


def _poly_of(vector: Sequence[Fraction], monomials: Sequence[Monomial], dim: int) -> Polynomial:
    return Polynomial(dim, {m: c for m, c in zip(monomials, vector) if c})


def _finite_average(p: Polynomial, G: GroupRep) -> Polynomial:
    if G.order == 1:
        return p
    total = Polynomial.zero(G.dim)
    for g in range(G.order):
        total = total + G.substitute(p, g)
    return total / G.order


def _finite_average_map(F: PolyMap, G: GroupRep) -> PolyMap:
    if G.order == 1:
        return F
    total = PolyMap.zero(G.dim, len(F))
    for g in range(G.order):
        moved = F.compose(PolyMap.linear(G.finite_elements[g], G.dim))
        total = total + moved.transform(G.finite_elements[G.inverse_index(g)])
    return total.scale(Fraction(1, G.order))


def is_invariant(p: Polynomial, G: GroupRep) -> bool:
    if p.ambient_dim != G.dim:
        raise DimensionMismatch(G.dim, p.ambient_dim)
    if any(G.substitute(p, g) != p for g in range(1, G.order)):
        return False
    return all(lie_derivative(p, xi).is_zero() for xi in G.torus_generators)


def is_equivariant(F: PolyMap, G: GroupRep) -> bool:
    if F.ambient_dim != G.dim or len(F) != G.dim:
        raise DimensionMismatch(G.dim, len(F))
    for g in range(1, G.order):
        matrix = G.finite_elements[g]
        if F.compose(PolyMap.linear(matrix, G.dim)) != F.transform(matrix):
            return False
    return all(map_lie_derivative(F, xi).is_zero() for xi in G.torus_generators)


class InvariantBasis:
    """A Hilbert basis ``theta_1, ..., theta_l`` together with its relations.

    The generators are homogeneous of positive degree. Expansions of
    generator monomials ``theta^alpha`` are cached, since every rewrite and
    relation search goes through them.

    Attributes
    ----------
    generators: Tuple[:class:`~orbitspace.poly.Polynomial`, ...]
        The invariant generators.
    degrees: Tuple[:class:`int`, ...]
        Their degrees.
    relations: Tuple[:class:`~orbitspace.poly.Polynomial`, ...]
        Polynomials in ``l`` variables vanishing after substituting the generators.
    group: Optional[:class:`~orbitspace.groups.GroupRep`]
        The group the generators are invariant under, if known.
    """

    __slots__ = (
        'generators',
        'degrees',
        'relations',
        'group',
        'ambient_dim',
        '_map',
        '_gradients',
        '_expansions',
        '_theta_monomials',
        '_relation_map',
    )

    def __init__(
        self,
        generators: Iterable[Polynomial],
        *,
        relations: Iterable[Polynomial] = (),
        group: Optional[GroupRep] = None,
        ambient_dim: int = MISSING,
    ) -> None:
        generators = tuple(generators)
        if ambient_dim is MISSING:
            if generators:
                ambient_dim = generators[0].ambient_dim
            elif group is not None:
                ambient_dim = group.dim
            else:
                raise ValueError('ambient_dim is required for an empty basis')
        for i, theta in enumerate(generators):
            if theta.ambient_dim != ambient_dim:
                raise DimensionMismatch(ambient_dim, theta.ambient_dim)
            if theta.degree < 1 or not theta.is_homogeneous():
                raise ValueError(f'generator {i} must be homogeneous of positive degree')
        relations = tuple(relations)
        for relation in relations:
            if relation.ambient_dim != len(generators):
                raise DimensionMismatch(len(generators), relation.ambient_dim, 'relation arity')
        self.generators: Tuple[Polynomial, ...] = generators
        self.degrees: Tuple[int, ...] = tuple(theta.degree for theta in generators)
        self.relations: Tuple[Polynomial, ...] = relations
        self.group: Optional[GroupRep] = group
        self.ambient_dim: int = ambient_dim
        self._map: PolyMap = PolyMap(generators, ambient_dim=ambient_dim)
        self._gradients: Optional[Tuple[PolyMap, ...]] = None
        self._expansions: Dict[Monomial, Polynomial] = {}
        self._theta_monomials: Dict[int, List[Monomial]] = {}
        self._relation_map: Optional[PolyMap] = None

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} size={self.size} degrees={self.degrees} relations={len(self.relations)}>'

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def size(self) -> int:
        """:class:`int`: The number ``l`` of generators."""
        return len(self.generators)

    @property
    def names(self) -> Tuple[str, ...]:
        return default_names(self.size, 't')

    @property
    def as_map(self) -> PolyMap:
        return self._map

    @property
    def gradient_table(self) -> Tuple[PolyMap, ...]:
        if self._gradients is None:
            self._gradients = tuple(theta.gradient() for theta in self.generators)
        return self._gradients

    @property
    def relation_cap(self) -> int:
        return 2 * max(self.degrees, default=1)

    @property
    def relation_map(self) -> PolyMap:
        if self._relation_map is None:
            self._relation_map = PolyMap(self.relations, ambient_dim=self.size)
        return self._relation_map

    def with_relations(self, relations: Iterable[Polynomial]) -> InvariantBasis:
        basis = InvariantBasis(self.generators, relations=relations, group=self.group, ambient_dim=self.ambient_dim)
        basis._expansions = self._expansions
        basis._theta_monomials = self._theta_monomials
        basis._gradients = self._gradients
        return basis

    def weighted_degree(self, alpha: Sequence[int]) -> int:
        return sum(e * d for e, d in zip(alpha, self.degrees))

    def theta_monomials(self, weight: int) -> List[Monomial]:
        """Generator monomials of the given weighted degree, ascending in grevlex order."""
        try:
            return self._theta_monomials[weight]
        except KeyError:
            pass
        result: List[Monomial] = []
        size = self.size
        degrees = self.degrees

        def extend(i: int, remaining: int, prefix: List[int]) -> None:
            if i == size:
                if remaining == 0:
                    result.append(tuple(prefix))
                return
            for e in range(remaining // degrees[i] + 1):
                prefix.append(e)
                extend(i + 1, remaining - e * degrees[i], prefix)
                prefix.pop()

        if weight >= 0:
            extend(0, weight, [])
        result.sort(key=grevlex_key)
        self._theta_monomials[weight] = result
        return result

    def expansion(self, alpha: Sequence[int]) -> Polynomial:
        """``theta^alpha`` expanded in the ambient variables."""
        alpha = tuple(alpha)
        cached = self._expansions.get(alpha)
        if cached is not None:
            return cached
        if not any(alpha):
            value = Polynomial.constant(self.ambient_dim, 1)
        else:
            i = next(k for k, e in enumerate(alpha) if e)
            lower = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1 :]
            value = self.expansion(lower) * self.generators[i]
        self._expansions[alpha] = value
        return value

    def hilbert_map(self, v: Sequence[Any]) -> List[Any]:
        return hilbert_map(v, self)

    def validate(self, G: GroupRep) -> None:
        """Checks invariance, relation vanishing and minimality.

        Raises
        ------
        NotInvariant
            A generator is not invariant, a relation does not vanish, or a
            generator is a polynomial in the lower-degree ones.
        """
        if G.dim != self.ambient_dim:
            raise DimensionMismatch(G.dim, self.ambient_dim)
        for i, theta in enumerate(self.generators):
            if not is_invariant(theta, G):
                raise NotInvariant(theta.to_text(), f'generator {i}')
        for k, relation in enumerate(self.relations):
            if not relation.compose(self._map).is_zero():
                raise NotInvariant(relation.to_text(self.names), f'relation {k} does not vanish')
        # same-degree generators must stay independent modulo products of lower ones
        for degree in sorted(set(self.degrees)):
            products = [self.expansion(a) for a in self.theta_monomials(degree) if sum(a) > 1]
            peers = [i for i, d in enumerate(self.degrees) if d == degree]
            for position, i in enumerate(peers):
                others = products + [self.generators[j] for j in peers[:position]]
                if _solve_in_span(others, self.generators[i]) is not None:
                    raise NotInvariant(self.generators[i].to_text(), f'generator {i} is redundant')

    def to_dict(self, coordinates: Sequence[str] = MISSING) -> Dict[str, Any]:
        return {
            'generators': [theta.to_text(coordinates) for theta in self.generators],
            'degrees': list(self.degrees),
            'relations': [r.to_text(self.names) for r in self.relations],
        }


class EquivariantBasis:
    """Generators ``F_1, ..., F_k`` of the module of equivariant polynomial maps.

    Attributes
    ----------
    generators: Tuple[:class:`~orbitspace.poly.PolyMap`, ...]
        The homogeneous equivariant generators.
    degrees: Tuple[:class:`int`, ...]
        Their degrees.
    """

    __slots__ = ('generators', 'degrees', 'ambient_dim')

    def __init__(self, generators: Iterable[PolyMap], *, ambient_dim: int = MISSING) -> None:
        generators = tuple(generators)
        if ambient_dim is MISSING:
            if not generators:
                raise ValueError('ambient_dim is required for an empty basis')
            ambient_dim = generators[0].ambient_dim
        degrees = []
        for F in generators:
            if F.ambient_dim != ambient_dim or len(F) != ambient_dim:
                raise DimensionMismatch(ambient_dim, len(F))
            if F.is_zero() or not F.is_homogeneous():
                raise ValueError('equivariant generators must be nonzero and homogeneous')
            degrees.append(max(c.degree for c in F))
        self.generators: Tuple[PolyMap, ...] = generators
        self.degrees: Tuple[int, ...] = tuple(degrees)
        self.ambient_dim: int = ambient_dim

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} size={self.size} degrees={self.degrees}>'

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def size(self) -> int:
        return len(self.generators)

    def validate(self, G: GroupRep) -> None:
        for j, F in enumerate(self.generators):
            if not is_equivariant(F, G):
                raise NotEquivariant(f'generator {j}')

    def to_dict(self, coordinates: Sequence[str] = MISSING) -> List[List[str]]:
        return [F.to_text(coordinates) for F in self.generators]


def _reduce_new(candidates: List[List[Fraction]], spanned: List[List[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Rows spanning ``span(candidates)`` modulo ``span(spanned)``, in reduced form."""
    reduced, pivots = linalg.rref(spanned, ncols) if spanned else ([], ())
    residuals = [linalg.reduce_against(v, reduced, pivots) for v in candidates]
    residuals = [r for r in residuals if any(r)]
    if not residuals:
        return []
    rows, _ = linalg.rref(residuals, ncols)
    return rows


def discover_invariants(G: GroupRep, max_degree: int) -> InvariantBasis:
    """Finds invariant generators degree by degree up to ``max_degree``.

    Each degree slice is averaged over the finite part, cut down to the kernel
    of every torus derivation, and reduced modulo products of the generators
    already found.
    """
    if max_degree < 1:
        raise ValueError('max_degree must be at least 1')
    n = G.dim
    generators: List[Polynomial] = []
    partial = InvariantBasis([], group=G, ambient_dim=n)
    for degree in range(1, max_degree + 1):
        monomials = monomials_of_degree(n, degree)
        index = {m: i for i, m in enumerate(monomials)}
        averaged = [_vector_of(_finite_average(Polynomial(n, {m: 1}), G), index) for m in monomials]
        space, _ = linalg.rref(averaged, len(monomials))
        if G.torus_generators and space:
            span = [_poly_of(row, monomials, n) for row in space]
            constraints: List[Polynomial] = []
            for xi in G.torus_generators:
                constraints.extend(lie_derivative(p, xi) for p in span)
            # coefficients c with sum c_k D_xi(span_k) = 0 for every xi
            blocks = []
            for a in range(len(G.torus_generators)):
                block = constraints[a * len(span) : (a + 1) * len(span)]
                _, rows = _coordinates(block)
                blocks.extend(rows)
            kernel = linalg.nullspace(blocks, len(span)) if blocks else linalg.identity(len(span))
            space = [
                [sum((c * row[j] for c, row in zip(vector, space)), Fraction(0)) for j in range(len(monomials))]
                for vector in kernel
            ]
        if not space:
            _log.debug('degree %d: no invariants', degree)
            continue
        products = [
            _vector_of(partial.expansion(alpha), index)
            for alpha in partial.theta_monomials(degree)
            if any(alpha)
        ]
        new = _reduce_new(space, products, len(monomials))
        _log.debug('degree %d: %d invariants, %d new generators', degree, len(space), len(new))
        if new:
            generators.extend(_poly_of(row, monomials, n) for row in new)
            partial = InvariantBasis(generators, group=G, ambient_dim=n)
    if not generators:
        _log.warning('empty invariant basis up to degree %d: only constants are invariant', max_degree)
    _log.info('discovered %d invariant generators up to degree %d', len(generators), max_degree)
    return partial


def _map_columns(dim: int, degree: int) -> List[Tuple[Monomial, int]]:
    # monomial-major: descending monomials, then ascending component
    return [(m, k) for m in monomials_of_degree(dim, degree) for k in range(dim)]


def _map_vector(F: PolyMap, index: Dict[Tuple[Monomial, int], int]) -> List[Fraction]:
    vector = [Fraction(0)] * len(index)
    for k, component in enumerate(F):
        for m, c in component.items():
            vector[index[m, k]] = c
    return vector


def _map_of(vector: Sequence[Fraction], columns: Sequence[Tuple[Monomial, int]], dim: int) -> PolyMap:
    terms: List[Dict[Monomial, Fraction]] = [{} for _ in range(dim)]
    for (m, k), c in zip(columns, vector):
        if c:
            terms[k][m] = c
    return PolyMap([Polynomial(dim, t) for t in terms], ambient_dim=dim)


def _unit_map(dim: int, monomial: Monomial, component: int) -> PolyMap:
    components = [Polynomial.zero(dim)] * dim
    components[component] = Polynomial(dim, {monomial: 1})
    return PolyMap(components, ambient_dim=dim)


def discover_equivariants(
    G: GroupRep, max_degree: int, invariants: Optional[InvariantBasis] = None
) -> EquivariantBasis:
    """Finds module generators of the equivariant maps, degree 0 through ``max_degree``.

    Degree slices are averaged with ``F -> avg g^-1 F(g v)``, cut down to the
    maps commuting with every torus generator, and reduced modulo
    ``theta^alpha F_j`` for the generators already found.
    """
    if max_degree < 1:
        raise ValueError('max_degree must be at least 1')
    n = G.dim
    if invariants is None:
        invariants = discover_invariants(G, max_degree)
    generators: List[PolyMap] = []
    for degree in range(0, max_degree + 1):
        columns = _map_columns(n, degree)
        index = {c: i for i, c in enumerate(columns)}
        averaged = [_map_vector(_finite_average_map(_unit_map(n, m, k), G), index) for m, k in columns]
        space, _ = linalg.rref(averaged, len(columns))
        if G.torus_generators and space:
            span = [_map_of(row, columns, n) for row in space]
            rows: List[List[Fraction]] = []
            for xi in G.torus_generators:
                defects = [map_lie_derivative(F, xi) for F in span]
                for component in range(n):
                    _, block = _coordinates([d[component] for d in defects])
                    rows.extend(block)
            kernel = linalg.nullspace(rows, len(span)) if rows else linalg.identity(len(span))
            space = [
                [sum((c * row[j] for c, row in zip(vector, space)), Fraction(0)) for j in range(len(columns))]
                for vector in kernel
            ]
        if not space:
            continue
        module = []
        for F in generators:
            for alpha in invariants.theta_monomials(degree - F.degree):
                if any(alpha):
                    module.append(_map_vector(F.scale(invariants.expansion(alpha)), index))
        new = _reduce_new(space, module, len(columns))
        _log.debug('degree %d: %d equivariants, %d new generators', degree, len(space), len(new))
        generators.extend(_map_of(row, columns, n) for row in new)
    if not generators:
        _log.warning('empty equivariant basis up to degree %d', max_degree)
    return EquivariantBasis(generators, ambient_dim=n)


def rewrite_in_generators(p: Polynomial, basis: InvariantBasis) -> Polynomial:
    """Expresses an invariant polynomial as a polynomial in the generators.

    Each homogeneous part of degree ``d`` is solved exactly over the generator
    monomials of weighted degree ``d``. Columns are ordered by ascending
    grevlex and free variables are set to zero, so when relations make the
    answer non-unique the smallest monomials are used.

    Raises
    ------
    NotInvariant
        ``p`` is not invariant under ``basis.group``.
    RewriteFailure
        There is no representation; the basis is likely incomplete.
    """
    if p.ambient_dim != basis.ambient_dim:
        raise DimensionMismatch(basis.ambient_dim, p.ambient_dim)
    if basis.group is not None and not is_invariant(p, basis.group):
        raise NotInvariant(p.to_text())
    l = basis.size
    terms: Dict[Monomial, Fraction] = {}
    for degree, part in p.homogeneous_components().items():
        alphas = basis.theta_monomials(degree)
        solution = _solve_in_span([basis.expansion(a) for a in alphas], part)
        if solution is None:
            _log.warning('rewrite failed at degree %d; the invariant basis may be incomplete', degree)
            raise RewriteFailure(p.to_text(), degree)
        for alpha, c in zip(alphas, solution):
            if c:
                terms[alpha] = c
    return Polynomial(l, terms)


def rewrite_family(p: Polynomial, basis: InvariantBasis) -> Polynomial:
    """Rewrites a polynomial in ``(v, lam)`` as a polynomial in ``(theta, lam)``.

    The parameter is the last variable on both sides.
    """
    n = basis.ambient_dim
    if p.ambient_dim != n + 1:
        raise DimensionMismatch(n + 1, p.ambient_dim)
    l = basis.size
    lam = Polynomial.variable(l + 1, l)
    total = Polynomial.zero(l + 1)
    for power, coefficient in p.split(n).items():
        rewritten = rewrite_in_generators(coefficient, basis).embed(l + 1)
        total = total + rewritten * lam**power
    return total


def rewrite_equivariant(
    F: PolyMap, invariants: InvariantBasis, equivariants: EquivariantBasis
) -> List[Polynomial]:
    """Finds ``c_j`` with ``F = sum c_j(theta) F_j`` exactly.

    Raises
    ------
    NotEquivariant
        ``F`` fails the equivariance check.
    RewriteFailure
        No representation exists up to the degree of ``F``.
    """
    n = invariants.ambient_dim
    if F.ambient_dim != n or len(F) != n:
        raise DimensionMismatch(n, len(F))
    if invariants.group is not None and not is_equivariant(F, invariants.group):
        raise NotEquivariant('supplied field')
    l = invariants.size
    coefficients: List[Dict[Monomial, Fraction]] = [{} for _ in equivariants.generators]
    parts: Dict[int, List[Polynomial]] = {}
    for k, component in enumerate(F):
        for degree, part in component.homogeneous_components().items():
            parts.setdefault(degree, [Polynomial.zero(n)] * n)[k] = part
    for degree, components in sorted(parts.items()):
        unknowns = [
            (j, alpha)
            for j, d in enumerate(equivariants.degrees)
            for alpha in invariants.theta_monomials(degree - d)
        ]
        target = PolyMap(components, ambient_dim=n)
        vectors = [equivariants.generators[j].scale(invariants.expansion(alpha)) for j, alpha in unknowns]
        # stack the components with a marker variable so one exact solve covers the map
        stacked = [_stack(v) for v in vectors]
        solution = _solve_in_span(stacked, _stack(target))
        if solution is None:
            raise RewriteFailure(' ; '.join(F.to_text()), degree)
        for (j, alpha), c in zip(unknowns, solution):
            if c:
                coefficients[j][alpha] = c
    return [Polynomial(l, terms) for terms in coefficients]


def _stack(F: PolyMap) -> Polynomial:
    n = F.ambient_dim
    total: Dict[Monomial, Fraction] = {}
    for k, component in enumerate(F):
        for m, c in component.items():
            marker = [0] * len(F)
            marker[k] = 1
            total[tuple(m) + tuple(marker)] = c
    return Polynomial(n + len(F), total)


def _normalize_relation(relation: Polynomial) -> Polynomial:
    denominators = 1
    for _, c in relation.items():
        denominators = denominators * c.denominator // math.gcd(denominators, c.denominator)
    scaled = relation.scale(denominators)
    content = 0
    for _, c in scaled.items():
        content = math.gcd(content, c.numerator)
    scaled = scaled / content if content else scaled
    smallest = scaled.monomials[-1]
    if scaled.coefficient(smallest) < 0:
        scaled = -scaled
    return scaled


def discover_relations(basis: InvariantBasis, max_degree: Optional[int] = None) -> List[Polynomial]:
    """Finds the relations among the generators up to weighted degree ``max_degree``.

    Each weighted degree contributes the kernel of ``alpha -> theta^alpha``,
    reduced modulo multiples of the relations already found. Relations are
    returned with primitive integer coefficients, the smallest monomial
    carrying a positive coefficient.
    """
    cap = basis.relation_cap if max_degree is None else max_degree
    l = basis.size
    relations: List[Polynomial] = []
    relation_weights: List[int] = []
    for weight in range(1, cap + 1):
        alphas = basis.theta_monomials(weight)
        if len(alphas) < 2:
            continue
        _, rows = _coordinates([basis.expansion(a) for a in alphas])
        kernel = linalg.nullspace(rows, len(alphas))
        if not kernel:
            continue
        position = {a: i for i, a in enumerate(alphas)}
        ideal = []
        for relation, w in zip(relations, relation_weights):
            for beta in basis.theta_monomials(weight - w):
                shifted = relation * Polynomial(l, {beta: 1})
                vector = [Fraction(0)] * len(alphas)
                for m, c in shifted.items():
                    vector[position[m]] = c
                ideal.append(vector)
        new = _reduce_new(kernel, ideal, len(alphas))
        for row in new:
            relation = _normalize_relation(Polynomial(l, {a: c for a, c in zip(alphas, row) if c}))
            relations.append(relation)
            relation_weights.append(weight)
        if new:
            _log.debug('weighted degree %d: %d new relations', weight, len(new))
    return relations


def hilbert_map(v: Sequence[Any], basis: InvariantBasis) -> List[Any]:
    """``(theta_1(v), ..., theta_l(v))``; exact for rational ``v``."""
    if len(v) != basis.ambient_dim:
        raise DimensionMismatch(basis.ambient_dim, len(v))
    if is_exact(v):
        return basis.as_map.evaluate(v)
    return list(basis.as_map.compile()(np.asarray(v, dtype=float)))


def _jacobian(basis: InvariantBasis, v: np.ndarray) -> np.ndarray:
    rows = [table.compile()(v) for table in basis.gradient_table]
    return np.array(rows).reshape(basis.size, basis.ambient_dim)


def default_guess(theta_target: Sequence[float], basis: InvariantBasis, rng: np.random.Generator) -> np.ndarray:
    """A random direction scaled by the degree-weighted size of the target."""
    magnitudes = [abs(float(t)) ** (1.0 / d) for t, d in zip(theta_target, basis.degrees)]
    scale = float(np.mean(magnitudes)) if magnitudes else 1.0
    direction = rng.standard_normal(basis.ambient_dim)
    return direction / float(np.linalg.norm(direction)) * (scale or 1.0)


def lift_point(
    theta_target: Sequence[float],
    basis: InvariantBasis,
    guess: Sequence[float] = MISSING,
    *,
    tol: float = 1e-10,
    max_iter: int = 50,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Finds ``v`` with ``|hilbert_map(v) - theta_target| <= tol`` by Gauss-Newton.

    Any point of the orbit is an acceptable answer.

    Raises
    ------
    ConvergenceFailure
        No convergence; the target may lie outside the image of the Hilbert map.
    """
    target = np.asarray(theta_target, dtype=float)
    if target.shape != (basis.size,):
        raise DimensionMismatch(basis.size, target.size)
    if not np.any(target):
        return np.zeros(basis.ambient_dim)
    if guess is MISSING:
        guess = default_guess(target, basis, rng if rng is not None else np.random.default_rng(0))
    v = np.array(guess, dtype=float)
    if v.shape != (basis.ambient_dim,):
        raise DimensionMismatch(basis.ambient_dim, v.size)
    evaluate = basis.as_map.compile()
    residual = evaluate(v) - target
    norm = float(np.linalg.norm(residual))
    start = norm
    for iteration in range(max_iter + 1):
        if norm <= tol:
            _log.debug('lift converged in %d iterations (residual %.3e)', iteration, norm)
            return v
        if iteration == max_iter:
            break
        step = sla.lstsq(_jacobian(basis, v), -residual, lapack_driver='gelsd')[0]
        if float(np.linalg.norm(step)) <= 1e-15 * (1.0 + float(np.linalg.norm(v))):
            raise ConvergenceFailure(iteration, norm, 'stalled', 'lift')
        v = v + step
        residual = evaluate(v) - target
        norm = float(np.linalg.norm(residual))
        if not math.isfinite(norm) or norm > 1e8 * (1.0 + start):
            raise ConvergenceFailure(iteration + 1, norm, 'diverged', 'lift')
    raise ConvergenceFailure(max_iter, norm, 'max_iter', 'lift')


def lift_with_retries(
    theta_target: Sequence[float],
    basis: InvariantBasis,
    rng: np.random.Generator,
    *,
    guess: Sequence[float] = MISSING,
    retries: int = 8,
    tol: float = 1e-10,
    max_iter: int = 50,
) -> np.ndarray:
    """:func:`lift_point` from ``guess``, then from up to ``retries`` fresh random guesses."""
    failure: Optional[ConvergenceFailure] = None
    attempts = ([guess] if guess is not MISSING else []) + [MISSING] * retries
    for attempt in attempts:
        try:
            return lift_point(theta_target, basis, attempt, tol=tol, max_iter=max_iter, rng=rng)
        except ConvergenceFailure as exc:
            failure = exc
    assert failure is not None
    raise failure


class NormalSpanReport:
    """Outcome of comparing generator gradients with the fixed normal space at a point.

    Attributes
    ----------
    rank: :class:`int`
        Rank of the metric gradients of the generators at the point.
    expected: :class:`int`
        Dimension of the isotropy-fixed part of the normal space to the orbit.
    contained: :class:`bool`
        Whether every gradient lies in that space.
    """

    __slots__ = ('rank', 'expected', 'contained')

    def __init__(self, *, rank: int, expected: int, contained: bool) -> None:
        self.rank: int = rank
        self.expected: int = expected
        self.contained: bool = contained

    def __bool__(self) -> bool:
        return self.contained and self.rank == self.expected

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} rank={self.rank} expected={self.expected} contained={self.contained}>'

    def to_dict(self) -> Dict[str, Any]:
        return {'rank': self.rank, 'expected': self.expected, 'contained': self.contained, 'ok': bool(self)}


def normal_span(basis: InvariantBasis, G: GroupRep, v: Sequence[float], tol: float = 1e-8) -> NormalSpanReport:
    """Checks that the generator gradients span the ``G_v``-fixed normal space at ``v``.

    Gradients are taken with respect to the invariant metric, so they are
    fixed by ``G_v`` and orthogonal to the orbit.
    """
    point = np.asarray(v, dtype=float)
    metric = linalg.to_array(G.metric)
    metric_inverse = np.linalg.inv(metric)
    gradients = (_jacobian(basis, point) @ metric_inverse.T).T if basis.size else np.zeros((G.dim, 0))
    H: Subgroup = isotropy(point, G)
    space = fixed_subspace(H)
    fixed = linalg.to_array(space.matrix()) if space.dim else np.zeros((G.dim, 0))
    _, torus = G.arrays()
    tangent = np.array([metric @ (xi @ point) for xi in torus]).reshape(-1, G.dim)
    if fixed.shape[1] and tangent.shape[0]:
        inside = fixed @ linalg.numeric_null_space(tangent @ fixed, tol)
    else:
        inside = fixed
    expected = linalg.numeric_rank(inside, tol) if inside.size else 0
    rank = linalg.numeric_rank(gradients, tol) if gradients.size else 0
    if inside.size and gradients.size:
        q, _ = np.linalg.qr(inside)
        q = q[:, :expected]
        leftover = gradients - q @ (q.T @ gradients)
        contained = float(np.max(np.abs(leftover))) <= tol * max(1.0, float(np.max(np.abs(gradients))))
    else:
        contained = not gradients.size or float(np.max(np.abs(gradients), initial=0.0)) <= tol
    return NormalSpanReport(rank=rank, expected=expected, contained=contained)


def orbit_constancy(
    basis: InvariantBasis, G: GroupRep, v: Sequence[float], times: Sequence[float] = TORUS_SAMPLE_TIMES
) -> float:
    """Largest relative change of the Hilbert map over sampled orbit points of ``v``."""
    evaluate = basis.as_map.compile()
    reference = evaluate(np.asarray(v, dtype=float))
    images = evaluate(orbit_sample(v, G, times))
    scale = max(1.0, float(np.max(np.abs(reference), initial=0.0)))
    return float(np.max(np.abs(images - reference), initial=0.0)) / scale


__all__ = (
    'InvariantBasis',
    'EquivariantBasis',
    'NormalSpanReport',
    'is_invariant',
    'is_equivariant',
    'discover_invariants',
    'discover_equivariants',
    'rewrite_in_generators',
    'rewrite_family',
    'rewrite_equivariant',
    'discover_relations',
    'hilbert_map',
    'default_guess',
    'lift_point',
    'lift_with_retries',
    'normal_span',
    'orbit_constancy',
)
