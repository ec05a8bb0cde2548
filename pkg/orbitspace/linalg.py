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
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg as sla
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .utils import as_fraction

_log = logging.getLogger(__name__)

Row = List[Fraction]


def _to_domain(rows: Sequence[Sequence[Any]], ncols: int) -> DomainMatrix:
    entries = []
    for row in rows:
        if len(row) != ncols:
            raise ValueError(f'row of length {len(row)} in a matrix with {ncols} columns')
        converted = []
        for x in row:
            x = x if isinstance(x, Fraction) else as_fraction(x)
            converted.append((x.numerator, x.denominator))
        entries.append(converted)
    return DomainMatrix.from_list(entries, QQ)


def _from_domain(element: Any) -> Fraction:
    return Fraction(int(element.numerator), int(element.denominator))


def rref(rows: Sequence[Sequence[Any]], ncols: int) -> Tuple[List[Row], Tuple[int, ...]]:
    """Exact reduced row echelon form over the rationals.

    Returns the nonzero rows of the reduced matrix and the pivot columns.
    """
    if not rows or not ncols:
        return [], ()
    reduced, pivots = _to_domain(rows, ncols).rref()
    pivots = tuple(int(p) for p in pivots)
    out = [[_from_domain(e) for e in row] for row in reduced.to_list()[: len(pivots)]]
    return out, pivots


def rank(rows: Sequence[Sequence[Any]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[Any]], ncols: int) -> List[Row]:
    """An exact basis of ``{x : A x = 0}``, one vector per free column.

    Each basis vector has a 1 in its free column and 0 in every other free
    column, so the basis is already in reduced form.
    """
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for column in free:
        vector = [Fraction(0)] * ncols
        vector[column] = Fraction(1)
        for row, pivot in zip(reduced, pivots):
            vector[pivot] = -row[column]
        basis.append(vector)
    return basis


def solve(rows: Sequence[Sequence[Any]], rhs: Sequence[Any], ncols: int) -> Optional[Row]:
    """Solves ``A x = b`` exactly; free variables are set to zero.

    Returns ``None`` when the system is inconsistent.
    """
    if len(rows) != len(rhs):
        raise ValueError('right-hand side length does not match the row count')
    if not rows:
        return [Fraction(0)] * ncols
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    solution = [Fraction(0)] * ncols
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = row[ncols]
    return solution


def reduce_against(vector: Sequence[Fraction], reduced: Sequence[Row], pivots: Sequence[int]) -> Row:
    """Subtracts multiples of RREF rows to clear the pivot columns of ``vector``."""
    result = list(vector)
    for row, pivot in zip(reduced, pivots):
        factor = result[pivot]
        if factor:
            result = [a - factor * b for a, b in zip(result, row)]
    return result


def transpose(rows: Sequence[Sequence[Any]]) -> List[List[Any]]:
    return [list(column) for column in zip(*rows)]


def matmul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> List[List[Any]]:
    columns = transpose(b)
    return [[sum((x * y for x, y in zip(row, column)), Fraction(0)) for column in columns] for row in a]


def identity(dim: int) -> List[List[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]


def inverse(matrix: Sequence[Sequence[Any]]) -> List[List[Fraction]]:
    """Exact inverse of a square rational matrix.

    Raises
    ------
    ValueError
        The matrix is singular.
    """
    dim = len(matrix)
    augmented = [list(row) + unit for row, unit in zip(matrix, identity(dim))]
    reduced, pivots = rref(augmented, 2 * dim)
    if pivots[:dim] != tuple(range(dim)) or len(pivots) < dim:
        raise ValueError('matrix is singular')
    return [row[dim:] for row in reduced[:dim]]


def to_array(matrix: Sequence[Sequence[Any]]) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in matrix], dtype=float).reshape(len(matrix), -1)


def numeric_rank(matrix: np.ndarray, tol: float) -> int:
    """Rank by singular values above ``tol`` relative to the largest one."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.size == 0:
        return 0
    s = sla.svd(matrix, compute_uv=False)
    if not s.size or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def numeric_null_space(matrix: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal kernel basis as columns; every column is a kernel vector."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.shape[0] == 0:
        return np.eye(matrix.shape[1])
    if not np.any(matrix):
        return np.eye(matrix.shape[1])
    return sla.null_space(matrix, rcond=tol)


def condition_number(matrix: np.ndarray) -> Tuple[float, float, float]:
    """Returns ``(condition, largest, smallest)`` singular values of ``matrix``.

    An empty matrix is perfectly conditioned; a rank-deficient square or tall
    matrix has infinite condition number.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.size == 0:
        return 1.0, 0.0, 0.0
    s = sla.svd(matrix, compute_uv=False)
    needed = min(matrix.shape)
    if s.size < needed or s[needed - 1] == 0.0:
        return float('inf'), float(s[0]) if s.size else 0.0, 0.0
    return float(s[0] / s[needed - 1]), float(s[0]), float(s[needed - 1])


def rationalize(values: Sequence[float], max_denominator: int = 1000) -> List[Fraction]:
    return [Fraction(float(v)).limit_denominator(max_denominator) for v in values]


__all__ = (
    'rref',
    'rank',
    'nullspace',
    'solve',
    'reduce_against',
    'transpose',
    'matmul',
    'identity',
    'inverse',
    'to_array',
    'numeric_rank',
    'numeric_null_space',
    'condition_number',
    'rationalize',
)
