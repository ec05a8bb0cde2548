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

from typing import Any, List, Optional, Sequence, Tuple


class OrbitSpaceException(Exception):
    """Base exception class for orbitspace

    Ideally speaking, this could be caught to handle any exceptions raised from this library.
    """

    pass


class DimensionMismatch(OrbitSpaceException):
    """Exception that's raised when operands live in spaces of different dimension.

    Attributes
    ----------
    expected: :class:`int`
        The dimension the operation required.
    received: :class:`int`
        The dimension it was given.
    """

    def __init__(self, expected: int, received: int, what: str = 'dimension') -> None:
        self.expected: int = expected
        self.received: int = received
        super().__init__(f'{what} mismatch: expected {expected}, received {received}')


class InvalidIndex(OrbitSpaceException):
    """Exception that's raised when a variable index is out of range.

    Attributes
    ----------
    index: :class:`int`
        The offending index.
    dim: :class:`int`
        The number of variables available.
    """

    def __init__(self, index: int, dim: int) -> None:
        self.index: int = index
        self.dim: int = dim
        super().__init__(f'variable index {index} out of range for {dim} variables')


class MalformedPairing(OrbitSpaceException):
    """Exception that's raised when a canonical coordinate pairing is unusable.

    Attributes
    ----------
    pairing: Sequence[Tuple[:class:`int`, :class:`int`]]
        The pairing that was rejected.
    reason: :class:`str`
        Why it was rejected.
    """

    def __init__(self, pairing: Sequence[Tuple[int, int]], reason: str) -> None:
        self.pairing = tuple(tuple(p) for p in pairing)
        self.reason: str = reason
        super().__init__(f'malformed pairing {list(self.pairing)!r}: {reason}')


class GroupError(OrbitSpaceException):
    """Base exception for invalid group data.

    Subclass of :exc:`OrbitSpaceException`.
    """

    pass


class ClosureExceeded(GroupError):
    """Exception that's raised when closing a set of generators produces more
    elements than allowed, which signals an infinite or too-large group.

    Attributes
    ----------
    max_order: :class:`int`
        The order cap that was exceeded.
    """

    def __init__(self, max_order: int) -> None:
        self.max_order: int = max_order
        super().__init__(f'closure exceeded {max_order} elements')


class NotOrthogonal(GroupError):
    """Exception that's raised for a finite element that does not preserve the invariant metric.

    Attributes
    ----------
    index: :class:`int`
        Position of the element in the supplied list.
    """

    def __init__(self, index: int) -> None:
        self.index: int = index
        super().__init__(f'finite element {index} is not orthogonal')


class NotAntisymmetric(GroupError):
    """Exception that's raised for a torus generator that is not antisymmetric
    with respect to the invariant metric.

    Attributes
    ----------
    index: :class:`int`
        Position of the generator in the supplied list.
    """

    def __init__(self, index: int) -> None:
        self.index: int = index
        super().__init__(f'torus generator {index} is not antisymmetric')


class NotClosed(GroupError):
    """Exception that's raised when a finite element list is not closed under
    products and inverses."""

    def __init__(self, detail: str) -> None:
        super().__init__(f'finite elements are not closed: {detail}')


class NotCommuting(GroupError):
    """Exception that's raised when a torus generator fails to commute with
    another generator or with a finite element.

    Attributes
    ----------
    first: :class:`str`
        Label of the first matrix.
    second: :class:`str`
        Label of the second matrix.
    """

    def __init__(self, first: str, second: str) -> None:
        self.first: str = first
        self.second: str = second
        super().__init__(f'{first} does not commute with {second}')


class TorusPartPresent(GroupError):
    """Exception that's raised when the Reynolds operator is requested for a group
    with a continuous part. Use derivation-kernel discovery instead."""

    def __init__(self) -> None:
        super().__init__('reynolds averaging needs a finite group; torus part is nonempty')


class NotInvariant(OrbitSpaceException):
    """Exception that's raised when a polynomial expected to be invariant is not.

    Attributes
    ----------
    polynomial: :class:`str`
        Text of the offending polynomial.
    """

    def __init__(self, polynomial: str, detail: str = '') -> None:
        self.polynomial: str = polynomial
        message = f'not invariant: {polynomial}'
        if detail:
            message += f' ({detail})'
        super().__init__(message)


class NotEquivariant(OrbitSpaceException):
    """Exception that's raised when a polynomial map expected to be equivariant is not."""

    def __init__(self, detail: str) -> None:
        super().__init__(f'not equivariant: {detail}')


class RewriteFailure(OrbitSpaceException):
    """Exception that's raised when a polynomial has no representation in the
    generators up to the weighted degree cap.

    This usually means the basis is incomplete; raising the degree cap is the
    only remedy.

    Attributes
    ----------
    polynomial: :class:`str`
        Text of the polynomial that could not be rewritten.
    cap: :class:`int`
        The weighted degree searched.
    """

    def __init__(self, polynomial: str, cap: int) -> None:
        self.polynomial: str = polynomial
        self.cap: int = cap
        super().__init__(
            f'no representation up to weighted degree cap {cap} for {polynomial}; '
            'the basis may be incomplete (completeness warning), raise the degree cap'
        )


class ConvergenceFailure(OrbitSpaceException):
    """Exception that's raised when an iterative solver gives up.

    Attributes
    ----------
    iterations: :class:`int`
        Iterations performed.
    residual: :class:`float`
        Residual norm at the last iterate.
    reason: :class:`str`
        One of ``'max_iter'``, ``'diverged'`` or ``'stalled'``.
    """

    def __init__(self, iterations: int, residual: float, reason: str, what: str = 'solver') -> None:
        self.iterations: int = iterations
        self.residual: float = residual
        self.reason: str = reason
        super().__init__(f'{what}: no convergence ({reason}) after {iterations} iterations, residual {residual:.3e}')


class NotAnEquilibrium(OrbitSpaceException):
    """Exception that's raised when a point handed to a theorem check does not solve g = 0.

    Attributes
    ----------
    residual: :class:`float`
        The stacked residual norm at the point.
    """

    def __init__(self, residual: float) -> None:
        self.residual: float = residual
        super().__init__(f'point is not an equilibrium within tolerance (residual {residual:.3e})')


class InvalidSeed(OrbitSpaceException):
    """Exception that's raised when a continuation seed is unusable."""

    def __init__(self, reason: str) -> None:
        self.reason: str = reason
        super().__init__(f'invalid continuation seed: {reason}')


class NoClassification(OrbitSpaceException):
    """Exception that's raised when a family fits none of the nondegeneracy classes,
    so theorem diagnostics that need one cannot run."""

    def __init__(self) -> None:
        super().__init__('linearization fits no nondegeneracy class')


class ZeroFixedSpace(OrbitSpaceException):
    """Exception that's raised when restricting to a subgroup whose fixed space is {0}."""

    def __init__(self) -> None:
        super().__init__('zero fixed space')


class DegeneratePairing(OrbitSpaceException):
    """Exception that's raised when the symplectic pairing restricted to a fixed space is degenerate."""

    def __init__(self) -> None:
        super().__init__('restricted pairing is degenerate')


class BlowUp(OrbitSpaceException):
    """Exception that's raised when an integrator meets a non-finite state.

    Attributes
    ----------
    time: :class:`float`
        The time at which the state stopped being finite.
    """

    def __init__(self, time: float) -> None:
        self.time: float = time
        super().__init__(f'non-finite state encountered at t={time:.6g}')


class GridMismatch(OrbitSpaceException):
    """Exception that's raised when two trajectories are compared on different time grids."""

    def __init__(self) -> None:
        super().__init__('trajectories use different time grids')


class ScenarioError(OrbitSpaceException):
    """Base exception for scenario files that cannot be used.

    Subclass of :exc:`OrbitSpaceException`.
    """

    pass


class ParseError(ScenarioError):
    """Exception that's raised when text cannot be parsed.

    Attributes
    ----------
    text: :class:`str`
        The text being parsed.
    position: :class:`int`
        Zero-based character offset of the failure.
    path: Optional[:class:`str`]
        The scenario field the text came from, if known.
    """

    def __init__(self, text: str, position: int, message: str, *, path: Optional[str] = None) -> None:
        self.text: str = text
        self.position: int = position
        self.path: Optional[str] = path
        self.message: str = message
        where = f'{path}: ' if path else ''
        super().__init__(f'{where}parse error at position {position}: {message}')

    def with_path(self, path: str) -> ParseError:
        return ParseError(self.text, self.position, self.message, path=path)


class ValidationError(ScenarioError):
    """Exception that's raised when a scenario fails validation.

    Attributes
    ----------
    errors: List[Tuple[:class:`str`, :class:`str`]]
        Every problem found, as ``(field path, message)`` pairs.
    """

    def __init__(self, errors: List[Tuple[str, str]]) -> None:
        self.errors: List[Tuple[str, str]] = errors
        lines = '; '.join(f'{path}: {message}' for path, message in errors)
        super().__init__(f'scenario validation failed: {lines}')

    def to_dict(self) -> List[Any]:
        return [{'path': path, 'message': message} for path, message in self.errors]


__all__ = (
    'OrbitSpaceException',
    'DimensionMismatch',
    'InvalidIndex',
    'MalformedPairing',
    'GroupError',
    'ClosureExceeded',
    'NotOrthogonal',
    'NotAntisymmetric',
    'NotClosed',
    'NotCommuting',
    'TorusPartPresent',
    'NotInvariant',
    'NotEquivariant',
    'RewriteFailure',
    'ConvergenceFailure',
    'NotAnEquilibrium',
    'InvalidSeed',
    'NoClassification',
    'ZeroFixedSpace',
    'DegeneratePairing',
    'BlowUp',
    'GridMismatch',
    'ScenarioError',
    'ParseError',
    'ValidationError',
)
