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
from collections import deque
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg as sla

from . import linalg
from .errors import (
    ClosureExceeded,
    DimensionMismatch,
    GroupError,
    NotAntisymmetric,
    NotClosed,
    NotCommuting,
    NotOrthogonal,
    TorusPartPresent,
)
from .mixins import Hashable
from .poly import Polynomial, PolyMap
from .utils import MISSING, fraction_matrix, is_exact, matrix_to_strings

_log = logging.getLogger(__name__)

Matrix = Tuple[Tuple[Fraction, ...], ...]

NH_NOTE = 'torus rank, finite-part quotient ignored'
TORUS_SAMPLE_TIMES: Tuple[float, ...] = (0.1, 0.7, 1.3, 2.9)


def _freeze(matrix: Sequence[Sequence[Any]]) -> Matrix:
    return fraction_matrix(matrix)


def _mul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(row) for row in linalg.matmul(a, b))


def _transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def _identity(dim: int) -> Matrix:
    return tuple(tuple(row) for row in linalg.identity(dim))


def _check_square(matrix: Matrix, dim: int) -> None:
    if len(matrix) != dim or any(len(row) != dim for row in matrix):
        raise DimensionMismatch(dim, len(matrix), 'matrix size')


def act(matrix: Sequence[Sequence[Any]], v: Sequence[Any]) -> List[Any]:
    """Applies a group element or algebra element to a vector.

    The product is exact when both operands are rational, floating otherwise.

    Raises
    ------
    DimensionMismatch
        The vector length differs from the matrix column count.
    """
    columns = len(matrix[0]) if len(matrix) else 0
    if len(v) != columns:
        raise DimensionMismatch(columns, len(v))
    if is_exact(v) and all(is_exact(row) for row in matrix):
        return [sum((Fraction(a) * Fraction(x) for a, x in zip(row, v)), Fraction(0)) for row in matrix]
    return list(linalg.to_array(matrix) @ np.asarray(v, dtype=float))


def lie_derivative(p: Polynomial, xi: Sequence[Sequence[Any]]) -> Polynomial:
    """The derivation ``grad p . (xi x)``; zero exactly when ``p`` is invariant under ``exp(t xi)``."""
    field = PolyMap.linear(xi, p.ambient_dim)
    return p.gradient().dot(field)


def map_lie_derivative(F: PolyMap, xi: Sequence[Sequence[Any]]) -> PolyMap:
    """``xi F(x) - DF(x) xi x``; zero exactly when ``F`` commutes with ``exp(t xi)``."""
    field = PolyMap.linear(xi, F.ambient_dim)
    rotated = F.transform(xi)
    flowed = PolyMap([row.dot(field) for row in F.jacobian()], ambient_dim=F.ambient_dim)
    return rotated - flowed


class GroupRep:
    """A linear representation of a compact group ``finite x torus``.

    The finite part is a list of matrices closed under products, with the
    identity first. The torus part is a list of commuting infinitesimal
    generators. Every matrix preserves the invariant Gram matrix ``metric``.

    Attributes
    ----------
    dim: :class:`int`
        Dimension of the represented space.
    finite_elements: Tuple[Tuple[Tuple[:class:`~fractions.Fraction`, ...], ...], ...]
        The finite group elements; element ``0`` is the identity.
    torus_generators: Tuple[Tuple[Tuple[:class:`~fractions.Fraction`, ...], ...], ...]
        Infinitesimal generators of the torus part.
    labels: Tuple[:class:`str`, ...]
        Element names; defaults to ``g0``, ``g1`` and so on.
    metric: Tuple[Tuple[:class:`~fractions.Fraction`, ...], ...]
        The invariant positive definite Gram matrix.
    """

    __slots__ = (
        'dim',
        'finite_elements',
        'torus_generators',
        'labels',
        'metric',
        '_index',
        '_products',
        '_inverses',
        '_metric_inverse',
        '_arrays',
    )

    def __init__(
        self,
        dim: int,
        *,
        finite_elements: Iterable[Sequence[Sequence[Any]]] = MISSING,
        torus_generators: Iterable[Sequence[Sequence[Any]]] = (),
        labels: Optional[Sequence[str]] = None,
        metric: Optional[Sequence[Sequence[Any]]] = None,
    ) -> None:
        identity = _identity(dim)
        elements = [identity] if finite_elements is MISSING else [_freeze(m) for m in finite_elements]
        torus = [_freeze(m) for m in torus_generators]
        gram = identity if metric is None else _freeze(metric)
        _check_square(gram, dim)
        self._validate_metric(gram)

        for element in elements:
            _check_square(element, dim)
        for xi in torus:
            _check_square(xi, dim)

        names = list(labels) if labels is not None else None
        if names is not None and len(names) != len(elements):
            raise DimensionMismatch(len(elements), len(names), 'label count')

        for i, element in enumerate(elements):
            if _mul(_mul(_transpose(element), gram), element) != gram:
                raise NotOrthogonal(i)

        # de-duplicate, then move the identity to the front
        seen: Dict[Matrix, int] = {}
        ordered: List[Matrix] = []
        ordered_names: List[str] = []
        for i, element in enumerate(elements):
            if element in seen:
                continue
            seen[element] = len(ordered)
            ordered.append(element)
            if names is not None:
                ordered_names.append(names[i])
        if identity not in seen:
            raise NotClosed('identity missing')
        position = seen[identity]
        if position:
            ordered.insert(0, ordered.pop(position))
            if names is not None:
                ordered_names.insert(0, ordered_names.pop(position))

        self.dim: int = dim
        self.finite_elements: Tuple[Matrix, ...] = tuple(ordered)
        self.torus_generators: Tuple[Matrix, ...] = tuple(torus)
        self.labels: Tuple[str, ...] = (
            tuple(ordered_names) if names is not None else tuple(f'g{i}' for i in range(len(ordered)))
        )
        self.metric: Matrix = gram
        self._index: Dict[Matrix, int] = {m: i for i, m in enumerate(self.finite_elements)}
        self._products: Dict[Tuple[int, int], int] = {}
        self._inverses: Dict[int, int] = {}
        self._metric_inverse: Matrix = tuple(tuple(row) for row in linalg.inverse(gram))
        self._arrays: Optional[Tuple[np.ndarray, np.ndarray]] = None

        self._validate_closure()
        self._validate_torus()

    @staticmethod
    def _validate_metric(gram: Matrix) -> None:
        if gram != _transpose(gram):
            raise GroupError('metric is not symmetric')
        if gram and np.min(np.linalg.eigvalsh(linalg.to_array(gram))) <= 0:
            raise GroupError('metric is not positive definite')

    def _validate_closure(self) -> None:
        order = len(self.finite_elements)
        for i in range(order):
            for j in range(order):
                product = _mul(self.finite_elements[i], self.finite_elements[j])
                k = self._index.get(product)
                if k is None:
                    raise NotClosed(f'product of elements {i} and {j} is missing')
                self._products[i, j] = k
        for i in range(order):
            for j in range(order):
                if self._products[i, j] == 0:
                    self._inverses[i] = j
                    break

    def _validate_torus(self) -> None:
        gram = self.metric
        zero = tuple(tuple(Fraction(0) for _ in range(self.dim)) for _ in range(self.dim))
        for a, xi in enumerate(self.torus_generators):
            lhs = _mul(_transpose(xi), gram)
            rhs = _mul(gram, xi)
            if tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(lhs, rhs)) != zero:
                raise NotAntisymmetric(a)
        for a, xi in enumerate(self.torus_generators):
            for b in range(a + 1, len(self.torus_generators)):
                eta = self.torus_generators[b]
                if _mul(xi, eta) != _mul(eta, xi):
                    raise NotCommuting(f'torus generator {a}', f'torus generator {b}')
            for i, g in enumerate(self.finite_elements):
                if _mul(xi, g) != _mul(g, xi):
                    raise NotCommuting(f'torus generator {a}', f'finite element {i}')

    @classmethod
    def close(
        cls,
        generators: Sequence[Sequence[Sequence[Any]]],
        *,
        dim: int = MISSING,
        torus_generators: Iterable[Sequence[Sequence[Any]]] = (),
        metric: Optional[Sequence[Sequence[Any]]] = None,
        max_order: int = 1000,
    ) -> GroupRep:
        """Builds the representation generated by ``generators`` and the torus part."""
        torus = [_freeze(m) for m in torus_generators]
        if dim is MISSING:
            if generators:
                dim = len(generators[0])
            elif torus:
                dim = len(torus[0])
            else:
                raise ValueError('dim is required without generators')
        elements = close_group(generators, max_order, dim=dim)
        return cls(dim, finite_elements=elements, torus_generators=torus, metric=metric)

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} dim={self.dim} order={self.order} torus_rank={self.torus_rank}>'

    @property
    def order(self) -> int:
        """:class:`int`: Number of finite elements."""
        return len(self.finite_elements)

    @property
    def torus_rank(self) -> int:
        return len(self.torus_generators)

    @property
    def is_finite(self) -> bool:
        return not self.torus_generators

    def index_of(self, matrix: Sequence[Sequence[Any]]) -> Optional[int]:
        return self._index.get(_freeze(matrix))

    def product_index(self, i: int, j: int) -> int:
        return self._products[i, j]

    def inverse_index(self, i: int) -> int:
        return self._inverses[i]

    def conjugate_index(self, g: int, h: int) -> int:
        """Index of ``g h g^-1``."""
        return self._products[self._products[g, h], self._inverses[g]]

    def substitute(self, p: Polynomial, g: int) -> Polynomial:
        """The polynomial ``p o g`` for finite element ``g``."""
        return p.compose(PolyMap.linear(self.finite_elements[g], self.dim))

    def algebra_element(self, coefficients: Sequence[Any]) -> Any:
        """``sum c_a xi_a``; exact for rational coefficients, else a :class:`numpy.ndarray`."""
        if len(coefficients) != self.torus_rank:
            raise DimensionMismatch(self.torus_rank, len(coefficients))
        if is_exact(coefficients):
            total = [[Fraction(0)] * self.dim for _ in range(self.dim)]
            for c, xi in zip(coefficients, self.torus_generators):
                for r in range(self.dim):
                    for s in range(self.dim):
                        total[r][s] += Fraction(c) * xi[r][s]
            return tuple(tuple(row) for row in total)
        _, torus = self.arrays()
        return np.tensordot(np.asarray(coefficients, dtype=float), torus, axes=1)

    def torus_element(self, coefficients: Sequence[float]) -> np.ndarray:
        """The group element ``exp(sum c_a xi_a)``."""
        return sla.expm(np.asarray(self.algebra_element([float(c) for c in coefficients]), dtype=float))

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Float copies of the finite elements and torus generators, stacked."""
        if self._arrays is None:
            finite = np.array([linalg.to_array(m) for m in self.finite_elements]).reshape(-1, self.dim, self.dim)
            torus = np.array([linalg.to_array(m) for m in self.torus_generators]).reshape(-1, self.dim, self.dim)
            self._arrays = (finite, torus)
        return self._arrays

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            'generators': [matrix_to_strings(m) for m in self.finite_elements[1:]],
            'torus': [matrix_to_strings(m) for m in self.torus_generators],
        }
        if self.metric != _identity(self.dim):
            payload['metric'] = matrix_to_strings(self.metric)
        return payload


def close_group(
    generators: Sequence[Sequence[Sequence[Any]]], max_order: int = 1000, *, dim: int = MISSING
) -> List[Matrix]:
    """Closes a set of matrices under multiplication, identity included.

    Elements are listed in breadth-first order from the identity.

    Raises
    ------
    ClosureExceeded
        More than ``max_order`` elements were produced.
    """
    frozen = [_freeze(g) for g in generators]
    if dim is MISSING:
        if not frozen:
            raise ValueError('dim is required without generators')
        dim = len(frozen[0])
    for g in frozen:
        _check_square(g, dim)
    identity = _identity(dim)
    elements = [identity]
    seen = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in frozen:
            product = _mul(g, current)
            if product not in seen:
                if len(elements) >= max_order:
                    raise ClosureExceeded(max_order)
                seen.add(product)
                elements.append(product)
                queue.append(product)
    _log.debug('closed %d generators into a group of order %d', len(frozen), len(elements))
    return elements


class IsotropyLabel(Hashable):
    """Canonical name of a conjugacy class of subgroups.

    The finite key is the lexicographically smallest sorted member tuple over
    all conjugates; the torus part is compared by dimension.

    .. container:: operations

        .. describe:: x == y

            Checks if two labels name the same conjugacy class.

        .. describe:: str(x)

            The text form, for example ``0.3/t0``.
    """

    __slots__ = ('finite_key', 'torus_dim')

    def __init__(self, finite_key: Sequence[int], torus_dim: int) -> None:
        self.finite_key: Tuple[int, ...] = tuple(finite_key)
        self.torus_dim: int = torus_dim

    @property
    def key(self) -> Tuple[Tuple[int, ...], int]:
        return (self.finite_key, self.torus_dim)

    @classmethod
    def from_text(cls, text: str) -> IsotropyLabel:
        finite, _, torus = text.partition('/')
        if not torus.startswith('t'):
            raise ValueError(f'malformed isotropy label {text!r}')
        return cls([int(x) for x in finite.split('.') if x], int(torus[1:]))

    def __str__(self) -> str:
        return '.'.join(map(str, self.finite_key)) + f'/t{self.torus_dim}'

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} {self}>'


class Subgroup:
    """A subgroup ``H`` of a :class:`GroupRep`.

    Attributes
    ----------
    parent: :class:`GroupRep`
        The ambient group.
    finite_member_indices: FrozenSet[:class:`int`]
        Indices into ``parent.finite_elements``.
    torus_subalgebra: Tuple[Tuple[:class:`~fractions.Fraction`, ...], ...]
        A basis, in reduced row echelon form, of the torus subalgebra in
        coordinates of ``parent.torus_generators``.
    """

    __slots__ = ('parent', 'finite_member_indices', 'torus_subalgebra')

    def __init__(
        self,
        parent: GroupRep,
        finite_member_indices: Iterable[int],
        torus_subalgebra: Sequence[Sequence[Any]] = (),
    ) -> None:
        members = frozenset(int(i) for i in finite_member_indices) | {0}
        for i in members:
            if not 0 <= i < parent.order:
                raise GroupError(f'finite element index {i} out of range')
        for i in members:
            for j in members:
                if parent.product_index(i, j) not in members:
                    raise NotClosed(f'product of members {i} and {j} leaves the subgroup')
        rows = [[Fraction(x) for x in row] for row in torus_subalgebra]
        for row in rows:
            if len(row) != parent.torus_rank:
                raise DimensionMismatch(parent.torus_rank, len(row), 'subalgebra coordinate count')
        reduced, _ = linalg.rref(rows, parent.torus_rank)
        self.parent: GroupRep = parent
        self.finite_member_indices: FrozenSet[int] = members
        self.torus_subalgebra: Tuple[Tuple[Fraction, ...], ...] = tuple(tuple(r) for r in reduced)

    @classmethod
    def trivial(cls, parent: GroupRep) -> Subgroup:
        return cls(parent, [0])

    @classmethod
    def whole(cls, parent: GroupRep) -> Subgroup:
        return cls(parent, range(parent.order), linalg.identity(parent.torus_rank))

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} label={self.label} order={self.order} torus_dim={self.torus_dim}>'

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Subgroup):
            return (
                self.parent is other.parent
                and self.finite_member_indices == other.finite_member_indices
                and self.torus_subalgebra == other.torus_subalgebra
            )
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.parent), self.finite_member_indices, self.torus_subalgebra))

    @property
    def order(self) -> int:
        return len(self.finite_member_indices)

    @property
    def torus_dim(self) -> int:
        return len(self.torus_subalgebra)

    def is_trivial(self) -> bool:
        return self.order == 1 and not self.torus_dim

    def is_whole(self) -> bool:
        return self.order == self.parent.order and self.torus_dim == self.parent.torus_rank

    def conjugate(self, g: int) -> Subgroup:
        """The subgroup ``g H g^-1``; the torus part is central and unchanged."""
        members = {self.parent.conjugate_index(g, h) for h in self.finite_member_indices}
        return Subgroup(self.parent, members, self.torus_subalgebra)

    @property
    def label(self) -> IsotropyLabel:
        parent = self.parent
        best = min(
            tuple(sorted(parent.conjugate_index(g, h) for h in self.finite_member_indices))
            for g in range(parent.order)
        )
        return IsotropyLabel(best, self.torus_dim)

    def algebra_elements(self) -> List[Matrix]:
        return [self.parent.algebra_element(row) for row in self.torus_subalgebra]


def reynolds(p: Polynomial, G: GroupRep) -> Polynomial:
    """The group average ``(1/|G|) sum_g p o g``.

    Raises
    ------
    TorusPartPresent
        ``G`` has torus generators.
    """
    if not G.is_finite:
        raise TorusPartPresent()
    if p.ambient_dim != G.dim:
        raise DimensionMismatch(G.dim, p.ambient_dim)
    total = Polynomial.zero(G.dim)
    for g in range(G.order):
        total = total + G.substitute(p, g)
    return total / G.order


def _torus_kernel_exact(v: Sequence[Fraction], G: GroupRep) -> List[List[Fraction]]:
    columns = [act(xi, v) for xi in G.torus_generators]
    rows = linalg.transpose(columns) if columns else []
    return linalg.nullspace(rows, G.torus_rank)


def _torus_kernel_numeric(v: np.ndarray, G: GroupRep, tol: float) -> List[List[Fraction]]:
    _, torus = G.arrays()
    norm = float(np.linalg.norm(v))
    matrix = np.stack([xi @ v for xi in torus], axis=1) / (norm if norm else 1.0)
    s = sla.svd(matrix, compute_uv=False)
    rank = int(np.sum(s > tol))
    if rank == G.torus_rank:
        return []
    if rank == 0:
        return linalg.identity(G.torus_rank)
    _, _, vh = sla.svd(matrix)
    kernel = vh[rank:]
    # pivoted QR picks well-conditioned coordinates for a reduced, rationalizable basis
    _, _, pivots = sla.qr(kernel, pivoting=True)
    pivots = np.sort(pivots[: kernel.shape[0]])
    reduced = np.linalg.solve(kernel[:, pivots], kernel)
    return [linalg.rationalize(row) for row in reduced]


def isotropy(v: Sequence[Any], G: GroupRep, tol: float = 1e-9, *, atol: float = 0.0) -> Subgroup:
    """The isotropy subgroup ``G_v``.

    For rational ``v`` membership is exact. Otherwise a finite element belongs
    when ``|g v - v| <= tol |v|`` and the torus part is the numerical kernel of
    ``c -> (sum c_a xi_a) v`` at relative threshold ``tol``. A floating point
    with ``|v| <= atol`` is the origin and has all of ``G``.
    """
    if len(v) != G.dim:
        raise DimensionMismatch(G.dim, len(v))
    if is_exact(v):
        exact = [Fraction(x) for x in v]
        members = [i for i, g in enumerate(G.finite_elements) if act(g, exact) == exact]
        kernel = _torus_kernel_exact(exact, G) if G.torus_rank else []
        return Subgroup(G, members, kernel)

    point = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(point))
    if norm <= atol:
        return Subgroup.whole(G)
    finite, _ = G.arrays()
    defects = np.linalg.norm(finite @ point - point, axis=1)
    members = [i for i, d in enumerate(defects) if d <= tol * norm]
    kernel = _torus_kernel_numeric(point, G, tol) if G.torus_rank else []
    return Subgroup(G, members, kernel)


class FixedSubspace:
    """The fixed-point subspace ``V^H``.

    Attributes
    ----------
    subgroup: :class:`Subgroup`
        The subgroup ``H``.
    basis: Tuple[Tuple[:class:`~fractions.Fraction`, ...], ...]
        An exact basis, orthogonal with respect to the group's metric.
    """

    __slots__ = ('subgroup', 'basis')

    def __init__(self, subgroup: Subgroup, basis: Sequence[Sequence[Fraction]]) -> None:
        self.subgroup: Subgroup = subgroup
        self.basis: Tuple[Tuple[Fraction, ...], ...] = tuple(tuple(b) for b in basis)

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} dim={self.dim}>'

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return self.subgroup.parent.dim

    def matrix(self) -> List[List[Fraction]]:
        """The basis vectors as the columns of an ``ambient_dim x dim`` matrix."""
        if not self.basis:
            return [[] for _ in range(self.ambient_dim)]
        return linalg.transpose(self.basis)

    def orthonormal(self) -> np.ndarray:
        """A Euclidean orthonormal basis, as columns."""
        if not self.basis:
            return np.zeros((self.ambient_dim, 0))
        q, _ = np.linalg.qr(linalg.to_array(self.matrix()))
        return q

    def contains(self, v: Sequence[Any], tol: float = 1e-9) -> bool:
        q = self.orthonormal()
        point = np.asarray(v, dtype=float)
        residual = point - q @ (q.T @ point)
        return float(np.linalg.norm(residual)) <= tol * max(1.0, float(np.linalg.norm(point)))


def _metric_gram_schmidt(vectors: Sequence[Sequence[Fraction]], metric: Matrix) -> List[List[Fraction]]:
    def inner(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
        terms = (a[i] * metric[i][j] * b[j] for i in range(len(a)) for j in range(len(b)) if metric[i][j])
        return sum(terms, Fraction(0))

    result: List[List[Fraction]] = []
    for vector in vectors:
        current = list(vector)
        for done in result:
            factor = inner(current, done) / inner(done, done)
            if factor:
                current = [x - factor * y for x, y in zip(current, done)]
        if any(current):
            result.append(current)
    return result


def fixed_subspace(H: Subgroup) -> FixedSubspace:
    """The subspace fixed by every finite member and annihilated by the torus subalgebra.

    Computed as an exact nullspace, then made orthogonal for the group metric.
    """
    G = H.parent
    rows: List[List[Fraction]] = []
    for i in sorted(H.finite_member_indices):
        if i == 0:
            continue
        g = G.finite_elements[i]
        rows.extend([g[r][c] - (1 if r == c else 0) for c in range(G.dim)] for r in range(G.dim))
    for element in H.algebra_elements():
        rows.extend(list(row) for row in element)
    kernel = linalg.nullspace(rows, G.dim) if rows else linalg.identity(G.dim)
    basis = _metric_gram_schmidt(kernel, G.metric)
    return FixedSubspace(H, basis)


def same_orbit_type(H1: Subgroup, H2: Subgroup) -> bool:
    """Whether ``H1`` and ``H2`` are conjugate (finite part exactly, torus part by dimension)."""
    if H1.parent is not H2.parent:
        raise GroupError('subgroups of different groups')
    return H1.label == H2.label


def is_subconjugate(H1: Subgroup, H2: Subgroup) -> bool:
    """Whether some conjugate of ``H1`` lies inside ``H2``."""
    if H1.parent is not H2.parent:
        raise GroupError('subgroups of different groups')
    if H1.torus_dim > H2.torus_dim or H1.order > H2.order:
        return False
    parent = H1.parent
    for g in range(parent.order):
        if {parent.conjugate_index(g, h) for h in H1.finite_member_indices} <= H2.finite_member_indices:
            return True
    return False


def normalizer(H: Subgroup) -> Subgroup:
    """``N(H)``: finite elements with ``g H g^-1 = H`` plus the whole (central) torus."""
    parent = H.parent
    members = [
        g
        for g in range(parent.order)
        if {parent.conjugate_index(g, h) for h in H.finite_member_indices} == H.finite_member_indices
    ]
    return Subgroup(parent, members, linalg.identity(parent.torus_rank))


def torus_rank_nH(v: Sequence[Any], G: GroupRep, tol: float = 1e-9, *, atol: float = 0.0) -> int:
    """The torus rank of ``N(G_v)/G_v``, counting the torus part only.

    Every torus generator normalizes ``G_v``, so this is the torus rank of
    ``G`` minus the dimension of the isotropy subalgebra.
    """
    return G.torus_rank - isotropy(v, G, tol, atol=atol).torus_dim


def orbit_sample(v: Sequence[float], G: GroupRep, times: Sequence[float] = TORUS_SAMPLE_TIMES) -> np.ndarray:
    """Points on the orbit of ``v``: every finite image and ``exp(t xi_a) v`` for the sample times."""
    point = np.asarray(v, dtype=float)
    finite, torus = G.arrays()
    images = [g @ point for g in finite]
    for xi in torus:
        for t in times:
            images.append(sla.expm(t * xi) @ point)
    return np.array(images)


__all__ = (
    'NH_NOTE',
    'TORUS_SAMPLE_TIMES',
    'act',
    'lie_derivative',
    'map_lie_derivative',
    'GroupRep',
    'close_group',
    'IsotropyLabel',
    'Subgroup',
    'reynolds',
    'isotropy',
    'FixedSubspace',
    'fixed_subspace',
    'same_orbit_type',
    'is_subconjugate',
    'normalizer',
    'torus_rank_nH',
    'orbit_sample',
)
