from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orbitspace import (
    DimensionMismatch,
    InvalidIndex,
    MalformedPairing,
    ParseError,
    PolyMap,
    Polynomial,
    arithmetic,
    canonical_pairing,
    hamiltonian_vector_field,
    monomials_of_degree,
    poisson_bracket,
    validate_pairing,
)

from .conftest import S1_NAMES

NAMES = ['x', 'y']


def polynomials(dim: int, max_degree: int = 3) -> st.SearchStrategy[Polynomial]:
    monomial = st.tuples(*[st.integers(0, max_degree)] * dim).filter(lambda m: sum(m) <= max_degree)
    coefficient = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(monomial, coefficient, max_size=5).map(lambda terms: Polynomial(dim, terms))


def p(text: str, names=NAMES) -> Polynomial:
    return Polynomial.parse(text, names)


def test_arithmetic_examples():
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    assert arithmetic(x + y, x - y, 'mul') == p('x^2 - y^2')
    assert arithmetic(x, x, 'sub') == 0
    assert arithmetic(x, Fraction(1, 2), 'scale') == p('1/2 * x')
    assert (x + 1) ** 2 == p('x^2 + 2*x + 1')
    assert (2 * x) / 4 == p('1/2 * x')


def test_arithmetic_rejects_mismatched_dimensions():
    with pytest.raises(DimensionMismatch):
        arithmetic(Polynomial.variable(2, 0), Polynomial.variable(3, 0), 'add')
    with pytest.raises(TypeError):
        arithmetic(Polynomial.variable(2, 0), 1.5, 'add')


def test_zero_polynomial():
    zero = Polynomial.zero(3)
    assert zero.degree == -1
    assert zero.to_text() == '0'
    assert not zero
    assert Polynomial(2, {(1, 0): 1}) - Polynomial(2, {(1, 0): 1}) == 0


def test_variable_index_is_checked():
    with pytest.raises(InvalidIndex):
        Polynomial.variable(2, 2)
    with pytest.raises(InvalidIndex):
        p('x').differentiate(5)


def test_differentiate_and_gradient():
    q = p('x^3*y + 2*y^2')
    assert q.differentiate(0) == p('3 * x^2*y')
    assert q.gradient() == PolyMap([p('3 * x^2*y'), p('x^3 + 4*y')], ambient_dim=2)


def test_evaluate_is_exact_for_rationals():
    q = p('1/3 * x^2 + y')
    value = q.evaluate([Fraction(1, 2), 1])
    assert isinstance(value, Fraction)
    assert value == Fraction(13, 12)
    assert q.evaluate([0.5, 1.0]) == pytest.approx(13 / 12)
    with pytest.raises(DimensionMismatch):
        q.evaluate([1])


def test_compose_checks_arity():
    q = p('x*y')
    square = PolyMap([p('x + y'), p('x - y')], ambient_dim=2)
    assert q.compose(square) == p('x^2 - y^2')
    with pytest.raises(DimensionMismatch):
        q.compose(PolyMap([p('x')], ambient_dim=2))


def test_split_substitute_embed():
    q = Polynomial.parse('x^2*lam + 3*x - lam^2', ['x', 'lam'])
    parts = q.split(1)
    assert parts[0] == Polynomial.parse('3*x', ['x'])
    assert parts[1] == Polynomial.parse('x^2', ['x'])
    assert parts[2] == -1
    assert q.substitute(1, 2) == Polynomial.parse('2*x^2 + 3*x - 4', ['x'])
    assert Polynomial.parse('x', ['x']).embed(3, [2]) == Polynomial.variable(3, 2)


def test_homogeneous_components():
    q = p('x^2 + x*y + 3*y + 1')
    parts = q.homogeneous_components()
    assert set(parts) == {0, 1, 2}
    assert parts[2] == p('x^2 + x*y')
    assert not q.is_homogeneous()
    assert parts[2].is_homogeneous()


def test_text_form_is_canonical():
    q = p('y*x + 2 - x**2')
    assert q.to_text(NAMES) == '-1 * x^2 + 1 * x*y + 2'
    assert Polynomial.parse(q.to_text(NAMES), NAMES) == q
    assert p('(x + y)*(x - y)') == p('x^2 - y^2')
    assert p('0.5 * x') == p('1/2 * x')


@pytest.mark.parametrize('text', ['x +', '2 * z', 'x^-1', '(x', 'x $ y'])
def test_parse_errors_carry_a_position(text: str):
    with pytest.raises(ParseError) as info:
        p(text)
    assert 0 <= info.value.position <= len(text)


def test_monomials_of_degree_counts():
    assert len(monomials_of_degree(3, 2)) == 6
    assert monomials_of_degree(2, 0) == [(0, 0)]
    assert monomials_of_degree(2, -1) == []


def test_compiled_map_matches_exact_evaluation():
    F = PolyMap([p('x^2 - y'), p('3*x*y + 1')], ambient_dim=2)
    points = np.array([[0.5, -1.0], [2.0, 3.0]])
    values = F.compile()(points)
    for row, point in zip(values, points):
        assert row == pytest.approx([float(c.evaluate(point.tolist())) for c in F])


def test_canonical_pair_bracket():
    q1, p1 = Polynomial.variable(4, 0), Polynomial.variable(4, 1)
    assert poisson_bracket(q1, p1) == 1
    assert poisson_bracket(p1, q1) == -1


def test_s1_generator_bracket():
    theta1 = Polynomial.parse('1/2 * q1^2 + 1/2 * p1^2', S1_NAMES)
    theta3 = Polynomial.parse('q1*q2 + p1*p2', S1_NAMES)
    assert poisson_bracket(theta1, theta3) == Polynomial.parse('q1*p2 - p1*q2', S1_NAMES)


@given(polynomials(4))
def test_bracket_with_itself_vanishes(f: Polynomial):
    assert poisson_bracket(f, f) == 0


@given(polynomials(4), polynomials(4), polynomials(4))
def test_bracket_is_a_derivation(f: Polynomial, g: Polynomial, h: Polynomial):
    assert poisson_bracket(f, g * h) == poisson_bracket(f, g) * h + g * poisson_bracket(f, h)


@given(polynomials(4, 2), polynomials(4, 2), polynomials(4, 2))
def test_jacobi_identity(f: Polynomial, g: Polynomial, h: Polynomial):
    total = (
        poisson_bracket(f, poisson_bracket(g, h))
        + poisson_bracket(g, poisson_bracket(h, f))
        + poisson_bracket(h, poisson_bracket(f, g))
    )
    assert total == 0


@given(polynomials(2), polynomials(2))
def test_multiplication_commutes_and_distributes(f: Polynomial, g: Polynomial):
    assert f * g == g * f
    assert f * (g + 1) == f * g + f


def test_pairings():
    assert canonical_pairing(4) == ((0, 1), (2, 3))
    with pytest.raises(MalformedPairing):
        canonical_pairing(3)
    assert validate_pairing([[1, 0]], 2) == ((1, 0),)
    with pytest.raises(MalformedPairing):
        validate_pairing([[0, 0]], 2)
    with pytest.raises(MalformedPairing):
        validate_pairing([[0, 1]], 4)


def test_hamiltonian_vector_field_of_the_oscillator():
    H = Polynomial.parse('1/2 * q^2 + 1/2 * p^2', ['q', 'p'])
    X = hamiltonian_vector_field(H, dim=2)
    assert X == PolyMap([Polynomial.parse('p', ['q', 'p']), Polynomial.parse('-q', ['q', 'p'])], ambient_dim=2)
