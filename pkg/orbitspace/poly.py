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

import itertools
import logging
import re
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union, overload

import numpy as np

from .enums import ArithmeticOp, try_enum
from .errors import DimensionMismatch, InvalidIndex, MalformedPairing, ParseError
from .utils import MISSING, as_fraction, format_fraction, is_exact

_log = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]
Pairing = Tuple[Tuple[int, int], ...]


def grevlex_key(monomial: Monomial) -> Tuple[int, Tuple[int, ...]]:
    """Sort key for the graded reverse-lexicographic order.

    Larger keys are larger monomials, so ``sorted(..., reverse=True)`` lists
    monomials in canonical (descending) order.
    """
    return (sum(monomial), tuple(-e for e in reversed(monomial)))


def monomials_of_degree(dim: int, degree: int) -> List[Monomial]:
    """All monomials of the given total degree in descending grevlex order."""
    if degree < 0:
        return []
    if dim == 0:
        return [()] if degree == 0 else []
    result = []
    for bars in itertools.combinations(range(degree + dim - 1), dim - 1):
        exps = []
        previous = -1
        for bar in bars:
            exps.append(bar - previous - 1)
            previous = bar
        exps.append(degree + dim - 2 - previous)
        result.append(tuple(exps))
    result.sort(key=grevlex_key, reverse=True)
    return result


def default_names(dim: int, prefix: str = 'x') -> Tuple[str, ...]:
    return tuple(f'{prefix}{i + 1}' for i in range(dim))


def _mul_monomials(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """A sparse multivariate polynomial with exact rational coefficients.

    Polynomials are immutable. Terms are stored without zero coefficients and
    listed in graded reverse-lexicographic order, so equal polynomials have
    identical serializations.

    .. container:: operations

        .. describe:: x == y

            Checks if two polynomials are equal. A rational number compares
            equal to the constant polynomial with that value.

        .. describe:: hash(x)

            Returns the polynomial's hash.

    Attributes
    ----------
    ambient_dim: :class:`int`
        The number of variables.
    """

    __slots__ = ('ambient_dim', '_terms', '_order', '_hash')

    def __init__(self, ambient_dim: int, terms: Optional[Mapping[Sequence[int], Any]] = None) -> None:
        if ambient_dim < 0:
            raise ValueError('ambient_dim must be non-negative')
        clean: Dict[Monomial, Fraction] = {}
        for monomial, coefficient in (terms or {}).items():
            key = tuple(int(e) for e in monomial)
            if len(key) != ambient_dim:
                raise DimensionMismatch(ambient_dim, len(key), 'monomial length')
            if any(e < 0 for e in key):
                raise ValueError(f'negative exponent in {key!r}')
            value = coefficient if isinstance(coefficient, Fraction) else as_fraction(coefficient)
            value = clean.get(key, Fraction(0)) + value
            if value:
                clean[key] = value
            else:
                clean.pop(key, None)
        self.ambient_dim: int = ambient_dim
        self._terms: Dict[Monomial, Fraction] = clean
        self._order: Optional[Tuple[Monomial, ...]] = None
        self._hash: Optional[int] = None

    @classmethod
    def _from_clean(cls, ambient_dim: int, terms: Dict[Monomial, Fraction]) -> Polynomial:
        self = cls.__new__(cls)
        self.ambient_dim = ambient_dim
        self._terms = terms
        self._order = None
        self._hash = None
        return self

    @classmethod
    def zero(cls, ambient_dim: int) -> Polynomial:
        return cls._from_clean(ambient_dim, {})

    @classmethod
    def constant(cls, ambient_dim: int, value: Any) -> Polynomial:
        value = as_fraction(value)
        if not value:
            return cls.zero(ambient_dim)
        return cls._from_clean(ambient_dim, {(0,) * ambient_dim: value})

    @classmethod
    def variable(cls, ambient_dim: int, index: int) -> Polynomial:
        if not 0 <= index < ambient_dim:
            raise InvalidIndex(index, ambient_dim)
        exps = [0] * ambient_dim
        exps[index] = 1
        return cls._from_clean(ambient_dim, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coefficient: Any = 1) -> Polynomial:
        return cls(len(exponents), {tuple(exponents): coefficient})

    # canonical views

    @property
    def monomials(self) -> Tuple[Monomial, ...]:
        if self._order is None:
            self._order = tuple(sorted(self._terms, key=grevlex_key, reverse=True))
        return self._order

    @property
    def terms(self) -> Tuple[Tuple[Monomial, Fraction], ...]:
        """Tuple[Tuple[Monomial, :class:`~fractions.Fraction`], ...]: The terms in canonical order."""
        return tuple((m, self._terms[m]) for m in self.monomials)

    def items(self) -> Iterable[Tuple[Monomial, Fraction]]:
        return self._terms.items()

    def coefficient(self, monomial: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(monomial), Fraction(0))

    @property
    def degree(self) -> int:
        """:class:`int`: The total degree. The zero polynomial has degree ``-1``."""
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    @property
    def min_degree(self) -> int:
        if not self._terms:
            return -1
        return min(sum(m) for m in self._terms)

    def degree_in(self, index: int) -> int:
        if not 0 <= index < self.ambient_dim:
            raise InvalidIndex(index, self.ambient_dim)
        return max((m[index] for m in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and sum(next(iter(self._terms))) == 0)

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.ambient_dim, Fraction(0))

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def homogeneous_components(self) -> Dict[int, Polynomial]:
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            parts.setdefault(sum(m), {})[m] = c
        return {d: Polynomial._from_clean(self.ambient_dim, t) for d, t in sorted(parts.items())}

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} ambient_dim={self.ambient_dim} text={self.to_text()!r}>'

    def __str__(self) -> str:
        return self.to_text()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.ambient_dim == other.ambient_dim and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_term == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ambient_dim, frozenset(self._terms.items())))
        return self._hash

    # arithmetic

    def _coerce(self, other: Any) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ambient_dim != self.ambient_dim:
                raise DimensionMismatch(self.ambient_dim, other.ambient_dim)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self.ambient_dim, other)
        raise TypeError(f'cannot combine Polynomial with {other.__class__.__name__}')

    def __add__(self, other: Any) -> Polynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            value = terms.get(m, 0) + c
            if value:
                terms[m] = value
            else:
                terms.pop(m, None)
        return Polynomial._from_clean(self.ambient_dim, terms)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._from_clean(self.ambient_dim, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> Polynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> Polynomial:
        return (-self) + other

    def __mul__(self, other: Any) -> Polynomial:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mul_monomials(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return Polynomial._from_clean(self.ambient_dim, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Polynomial:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError('polynomial division by zero')
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, exponent: int) -> Polynomial:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError('exponent must be a non-negative integer')
        result = Polynomial.constant(self.ambient_dim, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def scale(self, factor: Any) -> Polynomial:
        factor = as_fraction(factor)
        if not factor:
            return Polynomial.zero(self.ambient_dim)
        return Polynomial._from_clean(self.ambient_dim, {m: c * factor for m, c in self._terms.items()})

    # calculus

    def differentiate(self, var_index: int) -> Polynomial:
        """Returns the exact partial derivative with respect to ``x[var_index]``.

        Raises
        ------
        InvalidIndex
            The index is outside ``range(ambient_dim)``.
        """
        if not 0 <= var_index < self.ambient_dim:
            raise InvalidIndex(var_index, self.ambient_dim)
        terms: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            e = m[var_index]
            if e:
                lowered = m[:var_index] + (e - 1,) + m[var_index + 1 :]
                terms[lowered] = c * e
        return Polynomial._from_clean(self.ambient_dim, terms)

    def gradient(self) -> PolyMap:
        return PolyMap([self.differentiate(k) for k in range(self.ambient_dim)], ambient_dim=self.ambient_dim)

    # evaluation and substitution

    def evaluate(self, point: Sequence[Any]) -> Any:
        """Evaluates the polynomial at a point.

        The result is exact when every coordinate is an :class:`int` or
        :class:`~fractions.Fraction`, and a :class:`float` otherwise.
        """
        if len(point) != self.ambient_dim:
            raise DimensionMismatch(self.ambient_dim, len(point))
        if is_exact(point):
            values: List[Any] = [Fraction(x) for x in point]
            total: Any = Fraction(0)
        else:
            values = [float(x) for x in point]
            total = 0.0
        if not self._terms:
            return total
        # one power table per variable, filled up to the largest exponent used
        tables: List[List[Any]] = []
        for k, x in enumerate(values):
            top = max(m[k] for m in self._terms)
            row = [x ** 0]
            for _ in range(top):
                row.append(row[-1] * x)
            tables.append(row)
        for m, c in self._terms.items():
            term: Any = c if not isinstance(total, float) else float(c)
            for k, e in enumerate(m):
                if e:
                    term = term * tables[k][e]
            total += term
        return total

    def compose(self, subs: PolyMap) -> Polynomial:
        """Substitutes ``subs[k]`` for variable ``k``.

        Parameters
        ----------
        subs: :class:`PolyMap`
            One component per variable of this polynomial.

        Returns
        -------
        :class:`Polynomial`
            A polynomial in ``subs.ambient_dim`` variables.
        """
        if len(subs) != self.ambient_dim:
            raise DimensionMismatch(self.ambient_dim, len(subs), 'arity')
        target = subs.ambient_dim
        powers: List[Dict[int, Polynomial]] = [{0: Polynomial.constant(target, 1)} for _ in range(self.ambient_dim)]

        def power(k: int, e: int) -> Polynomial:
            cache = powers[k]
            if e not in cache:
                below = max(x for x in cache if x < e)
                value = cache[below]
                for step in range(below + 1, e + 1):
                    value = value * subs[k]
                    cache[step] = value
            return cache[e]

        total: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            product = Polynomial.constant(target, c)
            for k, e in enumerate(m):
                if e:
                    product = product * power(k, e)
            for mm, cc in product._terms.items():
                total[mm] = total.get(mm, 0) + cc
        return Polynomial._from_clean(target, {m: c for m, c in total.items() if c})

    def substitute(self, index: int, value: Any) -> Polynomial:
        """Fixes variable ``index`` to a rational value and drops it."""
        if not 0 <= index < self.ambient_dim:
            raise InvalidIndex(index, self.ambient_dim)
        value = as_fraction(value)
        terms: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            key = m[:index] + m[index + 1 :]
            terms[key] = terms.get(key, 0) + c * value ** m[index]
        return Polynomial._from_clean(self.ambient_dim - 1, {m: c for m, c in terms.items() if c})

    def split(self, index: int) -> Dict[int, Polynomial]:
        """Splits by powers of variable ``index``.

        Returns a mapping ``power -> coefficient`` where each coefficient is a
        polynomial in the remaining ``ambient_dim - 1`` variables.
        """
        if not 0 <= index < self.ambient_dim:
            raise InvalidIndex(index, self.ambient_dim)
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            parts.setdefault(m[index], {})[m[:index] + m[index + 1 :]] = c
        return {e: Polynomial._from_clean(self.ambient_dim - 1, t) for e, t in sorted(parts.items())}

    def embed(self, ambient_dim: int, positions: Sequence[int] = MISSING) -> Polynomial:
        """Re-expresses the polynomial in a larger variable set.

        ``positions[k]`` is the new index of old variable ``k``; by default
        the old variables become the leading ones.
        """
        if positions is MISSING:
            positions = range(self.ambient_dim)
        positions = list(positions)
        if len(positions) != self.ambient_dim:
            raise DimensionMismatch(self.ambient_dim, len(positions), 'position count')
        terms: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            exps = [0] * ambient_dim
            for k, e in enumerate(m):
                exps[positions[k]] += e
            terms[tuple(exps)] = c
        return Polynomial._from_clean(ambient_dim, terms)

    # text

    def to_text(self, names: Sequence[str] = MISSING) -> str:
        """Serializes to the canonical text form.

        Terms are joined by ``" + "``, each written ``"c * x^e*y"``. The
        zero polynomial is ``"0"`` and a constant term is the bare rational.
        """
        if names is MISSING:
            names = default_names(self.ambient_dim)
        if len(names) != self.ambient_dim:
            raise DimensionMismatch(self.ambient_dim, len(names), 'name count')
        if not self._terms:
            return '0'
        pieces = []
        for m, c in self.terms:
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f'{name}^{e}')
            if factors:
                pieces.append(f'{format_fraction(c)} * ' + '*'.join(factors))
            else:
                pieces.append(format_fraction(c))
        return ' + '.join(pieces)

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> Polynomial:
        """Parses polynomial text over the given variable names.

        Accepts the canonical form plus ``-`` separators, ``**`` powers,
        parentheses, decimals and implicit unit coefficients.

        Raises
        ------
        ParseError
            The text is malformed; :attr:`ParseError.position` locates the problem.
        """
        return _Parser(text, names).parse()


class _Token:
    __slots__ = ('kind', 'text', 'position')

    def __init__(self, kind: str, text: str, position: int) -> None:
        self.kind = kind
        self.text = text
        self.position = position


_TOKEN_RE = re.compile(
    r'\s*(?:(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))'
)


class _Parser:
    __slots__ = ('text', 'names', 'index', 'tokens', 'pos')

    def __init__(self, text: str, names: Sequence[str]) -> None:
        if not isinstance(text, str):
            raise ParseError(repr(text), 0, 'expected a string')
        self.text = text
        self.names = {name: i for i, name in enumerate(names)}
        self.index = len(names)
        self.tokens = self._tokenize()
        self.pos = 0

    def _tokenize(self) -> List[_Token]:
        tokens = []
        offset = 0
        text = self.text
        while offset < len(text):
            if text[offset:].strip() == '':
                break
            match = _TOKEN_RE.match(text, offset)
            if match is None or match.end() == offset:
                position = offset + (len(text[offset:]) - len(text[offset:].lstrip()))
                raise ParseError(text, position, f'unexpected character {text[position]!r}')
            kind = match.lastgroup or 'op'
            start = match.start(kind)
            tokens.append(_Token(kind, match.group(kind), start))
            offset = match.end()
        tokens.append(_Token('end', '', len(text)))
        return tokens

    def _peek(self) -> _Token:
        return self.tokens[self.pos]

    def _next(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _fail(self, token: _Token, message: str) -> ParseError:
        return ParseError(self.text, token.position, message)

    def parse(self) -> Polynomial:
        if self._peek().kind == 'end':
            raise self._fail(self._peek(), 'empty polynomial')
        value = self._expr()
        token = self._peek()
        if token.kind != 'end':
            raise self._fail(token, f'unexpected {token.text!r}')
        return value

    def _expr(self) -> Polynomial:
        value = self._term()
        while self._peek().text in ('+', '-') and self._peek().kind == 'op':
            op = self._next().text
            rhs = self._term()
            value = value + rhs if op == '+' else value - rhs
        return value

    def _term(self) -> Polynomial:
        value = self._unary()
        while self._peek().kind == 'op' and self._peek().text in ('*', '/'):
            op = self._next()
            rhs_token = self._peek()
            rhs = self._unary()
            if op.text == '*':
                value = value * rhs
            else:
                if not rhs.is_constant():
                    raise self._fail(rhs_token, 'division by a non-constant')
                if rhs.constant_term == 0:
                    raise self._fail(rhs_token, 'division by zero')
                value = value / rhs.constant_term
        return value

    def _unary(self) -> Polynomial:
        token = self._peek()
        if token.kind == 'op' and token.text in ('+', '-'):
            self._next()
            value = self._unary()
            return -value if token.text == '-' else value
        return self._power()

    def _power(self) -> Polynomial:
        base = self._atom()
        token = self._peek()
        if token.kind == 'op' and token.text in ('^', '**'):
            self._next()
            exponent = self._next()
            if exponent.kind != 'number' or not exponent.text.isdigit():
                raise self._fail(exponent, 'exponent must be a non-negative integer')
            return base ** int(exponent.text)
        return base

    def _atom(self) -> Polynomial:
        token = self._next()
        if token.kind == 'number':
            return Polynomial.constant(self.index, Fraction(token.text))
        if token.kind == 'name':
            try:
                return Polynomial.variable(self.index, self.names[token.text])
            except KeyError:
                raise self._fail(token, f'unknown variable {token.text!r}') from None
        if token.kind == 'op' and token.text == '(':
            value = self._expr()
            closing = self._next()
            if closing.text != ')':
                raise self._fail(closing, "expected ')'")
            return value
        if token.kind == 'end':
            raise self._fail(token, 'unexpected end of input')
        raise self._fail(token, f'unexpected {token.text!r}')


class PolyMap:
    """A polynomial map: an ordered list of :class:`Polynomial` over the same variables.

    Houses equivariant generators, gradients and vector fields.

    Attributes
    ----------
    components: Tuple[:class:`Polynomial`, ...]
        The component polynomials.
    ambient_dim: :class:`int`
        The number of variables every component uses.
    """

    __slots__ = ('components', 'ambient_dim', '_compiled')

    def __init__(self, components: Iterable[Polynomial], *, ambient_dim: int = MISSING) -> None:
        components = tuple(components)
        if ambient_dim is MISSING:
            if not components:
                raise ValueError('ambient_dim is required for an empty map')
            ambient_dim = components[0].ambient_dim
        for component in components:
            if component.ambient_dim != ambient_dim:
                raise DimensionMismatch(ambient_dim, component.ambient_dim)
        self.components: Tuple[Polynomial, ...] = components
        self.ambient_dim: int = ambient_dim
        self._compiled: Optional[CompiledMap] = None

    @classmethod
    def zero(cls, ambient_dim: int, size: int) -> PolyMap:
        return cls([Polynomial.zero(ambient_dim)] * size, ambient_dim=ambient_dim)

    @classmethod
    def identity(cls, ambient_dim: int) -> PolyMap:
        return cls([Polynomial.variable(ambient_dim, k) for k in range(ambient_dim)], ambient_dim=ambient_dim)

    @classmethod
    def linear(cls, matrix: Sequence[Sequence[Any]], ambient_dim: int = MISSING) -> PolyMap:
        """The linear map ``v -> matrix @ v`` as polynomials."""
        if ambient_dim is MISSING:
            ambient_dim = len(matrix[0]) if matrix else 0
        components = []
        for row in matrix:
            terms = {}
            for k, entry in enumerate(row):
                entry = as_fraction(entry)
                if entry:
                    exps = [0] * ambient_dim
                    exps[k] = 1
                    terms[tuple(exps)] = entry
            components.append(Polynomial._from_clean(ambient_dim, terms))
        return cls(components, ambient_dim=ambient_dim)

    @classmethod
    def parse(cls, texts: Sequence[str], names: Sequence[str]) -> PolyMap:
        return cls([Polynomial.parse(t, names) for t in texts], ambient_dim=len(names))

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.components)

    @overload
    def __getitem__(self, index: int) -> Polynomial: ...

    @overload
    def __getitem__(self, index: slice) -> PolyMap: ...

    def __getitem__(self, index):
        if isinstance(index, slice):
            return PolyMap(self.components[index], ambient_dim=self.ambient_dim)
        return self.components[index]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PolyMap):
            return self.ambient_dim == other.ambient_dim and self.components == other.components
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.components))

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} size={len(self)} ambient_dim={self.ambient_dim}>'

    @property
    def degree(self) -> int:
        return max((c.degree for c in self.components), default=-1)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def is_homogeneous(self) -> bool:
        return len({c.degree for c in self.components if c}) <= 1 and all(c.is_homogeneous() for c in self.components)

    def _check(self, other: PolyMap) -> None:
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch(self.ambient_dim, other.ambient_dim)
        if len(other) != len(self):
            raise DimensionMismatch(len(self), len(other), 'component count')

    def __add__(self, other: PolyMap) -> PolyMap:
        self._check(other)
        return PolyMap([a + b for a, b in zip(self, other)], ambient_dim=self.ambient_dim)

    def __sub__(self, other: PolyMap) -> PolyMap:
        self._check(other)
        return PolyMap([a - b for a, b in zip(self, other)], ambient_dim=self.ambient_dim)

    def __neg__(self) -> PolyMap:
        return PolyMap([-a for a in self], ambient_dim=self.ambient_dim)

    def scale(self, factor: Union[Polynomial, Scalar]) -> PolyMap:
        return PolyMap([c * factor for c in self], ambient_dim=self.ambient_dim)

    def dot(self, other: PolyMap) -> Polynomial:
        """The Euclidean inner product ``sum_a self[a] * other[a]``."""
        self._check(other)
        total = Polynomial.zero(self.ambient_dim)
        for a, b in zip(self, other):
            if a and b:
                total = total + a * b
        return total

    def transform(self, matrix: Sequence[Sequence[Any]]) -> PolyMap:
        """Returns ``matrix @ self`` (mixes components)."""
        if any(len(row) != len(self) for row in matrix):
            raise DimensionMismatch(len(self), len(matrix[0]) if matrix else 0, 'component count')
        result = []
        for row in matrix:
            total = Polynomial.zero(self.ambient_dim)
            for entry, component in zip(row, self.components):
                entry = as_fraction(entry)
                if entry and component:
                    total = total + component.scale(entry)
            result.append(total)
        return PolyMap(result, ambient_dim=self.ambient_dim)

    def compose(self, subs: PolyMap) -> PolyMap:
        return PolyMap([c.compose(subs) for c in self], ambient_dim=subs.ambient_dim)

    def embed(self, ambient_dim: int, positions: Sequence[int] = MISSING) -> PolyMap:
        return PolyMap([c.embed(ambient_dim, positions) for c in self], ambient_dim=ambient_dim)

    def substitute(self, index: int, value: Any) -> PolyMap:
        return PolyMap([c.substitute(index, value) for c in self], ambient_dim=self.ambient_dim - 1)

    def jacobian(self) -> Tuple[PolyMap, ...]:
        """Row ``a`` is the gradient of component ``a``."""
        return tuple(c.gradient() for c in self)

    def evaluate(self, point: Sequence[Any]) -> List[Any]:
        return [c.evaluate(point) for c in self]

    def compile(self) -> CompiledMap:
        if self._compiled is None:
            self._compiled = CompiledMap(self.components, self.ambient_dim)
        return self._compiled

    def to_text(self, names: Sequence[str] = MISSING) -> List[str]:
        return [c.to_text(names) for c in self]


class CompiledMap:
    """Floating point batch evaluator for a list of polynomials.

    All monomials are gathered once so an evaluation is a power table and a
    single matrix product. Inputs may carry leading batch axes.
    """

    __slots__ = ('ambient_dim', 'size', '_exponents', '_coefficients')

    def __init__(self, components: Sequence[Polynomial], ambient_dim: int) -> None:
        monomials = sorted({m for c in components for m in c._terms}, key=grevlex_key, reverse=True)
        index = {m: i for i, m in enumerate(monomials)}
        coefficients = np.zeros((len(components), len(monomials)))
        for row, component in enumerate(components):
            for m, c in component._terms.items():
                coefficients[row, index[m]] = float(c)
        self.ambient_dim: int = ambient_dim
        self.size: int = len(components)
        self._exponents = np.array(monomials, dtype=np.int64).reshape(len(monomials), ambient_dim)
        self._coefficients = coefficients

    def __call__(self, x: Any) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.ambient_dim,):
            raise DimensionMismatch(self.ambient_dim, x.shape[-1] if x.ndim else 0)
        if not self._exponents.shape[0]:
            return np.zeros(x.shape[:-1] + (self.size,))
        powers = np.prod(x[..., None, :] ** self._exponents, axis=-1)
        return powers @ self._coefficients.T


def arithmetic(p: Polynomial, q: Union[Polynomial, Scalar], op: Union[ArithmeticOp, str]) -> Polynomial:
    """Exact ``add``, ``sub``, ``mul`` or ``scale``; for ``scale``, ``q`` is the rational factor."""
    op = try_enum(ArithmeticOp, op)
    if op is ArithmeticOp.scale:
        return p.scale(q)
    if not isinstance(q, Polynomial):
        raise TypeError('expected a Polynomial operand')
    if q.ambient_dim != p.ambient_dim:
        raise DimensionMismatch(p.ambient_dim, q.ambient_dim)
    if op is ArithmeticOp.add:
        return p + q
    if op is ArithmeticOp.sub:
        return p - q
    if op is ArithmeticOp.mul:
        return p * q
    raise ValueError(f'unknown operation {op!r}')


def canonical_pairing(dim: int) -> Pairing:
    """Consecutive coordinates paired as ``(q_a, p_a)``."""
    if dim % 2:
        raise MalformedPairing((), f'odd dimension {dim}')
    return tuple((2 * a, 2 * a + 1) for a in range(dim // 2))


def validate_pairing(pairing: Sequence[Sequence[int]], dim: int) -> Pairing:
    if dim % 2:
        raise MalformedPairing(pairing, f'odd dimension {dim}')
    result = []
    seen: set = set()
    for pair in pairing:
        if len(pair) != 2:
            raise MalformedPairing(pairing, f'{list(pair)!r} is not a pair')
        a, b = int(pair[0]), int(pair[1])
        for index in (a, b):
            if not 0 <= index < dim:
                raise MalformedPairing(pairing, f'index {index} out of range')
            if index in seen:
                raise MalformedPairing(pairing, f'index {index} used twice')
            seen.add(index)
        result.append((a, b))
    if len(seen) != dim:
        raise MalformedPairing(pairing, 'pairs do not cover every coordinate')
    return tuple(result)


def poisson_bracket(p: Polynomial, q: Polynomial, pairing: Optional[Sequence[Sequence[int]]] = None) -> Polynomial:
    """The canonical bracket ``sum (dp/dq_a dq/dp_a - dp/dp_a dq/dq_a)``.

    Raises
    ------
    MalformedPairing
        The dimension is odd or the pairs do not partition the coordinates.
    """
    if p.ambient_dim != q.ambient_dim:
        raise DimensionMismatch(p.ambient_dim, q.ambient_dim)
    pairs = canonical_pairing(p.ambient_dim) if pairing is None else validate_pairing(pairing, p.ambient_dim)
    total = Polynomial.zero(p.ambient_dim)
    for a, b in pairs:
        total = total + p.differentiate(a) * q.differentiate(b) - p.differentiate(b) * q.differentiate(a)
    return total


def poisson_tensor(dim: int, pairing: Optional[Sequence[Sequence[int]]] = None) -> Tuple[Tuple[Fraction, ...], ...]:
    """The constant matrix ``J`` with ``X_H = J grad H`` for the given pairing."""
    pairs = canonical_pairing(dim) if pairing is None else validate_pairing(pairing, dim)
    rows = [[Fraction(0)] * dim for _ in range(dim)]
    for a, b in pairs:
        rows[a][b] = Fraction(1)
        rows[b][a] = Fraction(-1)
    return tuple(tuple(row) for row in rows)


def hamiltonian_vector_field(
    hamiltonian: Polynomial, pairing: Optional[Sequence[Sequence[int]]] = None, *, dim: int = MISSING
) -> PolyMap:
    """Hamilton's equations ``q' = dH/dp``, ``p' = -dH/dq``.

    ``dim`` selects how many leading variables are phase-space coordinates;
    trailing variables (such as a parameter) are carried along untouched.
    """
    if dim is MISSING:
        dim = hamiltonian.ambient_dim
    pairs = canonical_pairing(dim) if pairing is None else validate_pairing(pairing, dim)
    components: List[Polynomial] = [Polynomial.zero(hamiltonian.ambient_dim)] * dim
    for a, b in pairs:
        components[a] = hamiltonian.differentiate(b)
        components[b] = -hamiltonian.differentiate(a)
    return PolyMap(components, ambient_dim=hamiltonian.ambient_dim)


def rational_vector(values: Iterable[Any]) -> Tuple[Fraction, ...]:
    return tuple(as_fraction(v) for v in values)


def apply_linear(matrix: Sequence[Sequence[Any]], vector: Sequence[Any]) -> List[Any]:
    start = Fraction(0) if is_exact(vector) else 0.0
    return [sum((entry * x for entry, x in zip(row, vector)), start) for row in matrix]


__all__ = (
    'Monomial',
    'Pairing',
    'grevlex_key',
    'monomials_of_degree',
    'default_names',
    'Polynomial',
    'PolyMap',
    'CompiledMap',
    'arithmetic',
    'canonical_pairing',
    'validate_pairing',
    'poisson_bracket',
    'poisson_tensor',
    'hamiltonian_vector_field',
    'rational_vector',
    'apply_linear',
)
