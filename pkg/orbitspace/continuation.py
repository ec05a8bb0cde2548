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
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg as sla

from . import linalg
from .abc import ReducedSystem
from .enums import FieldKind, TerminationReason
from .errors import ConvergenceFailure, InvalidSeed, NotAnEquilibrium, OrbitSpaceException
from .groups import IsotropyLabel
from .invariants import InvariantBasis, hilbert_map, lift_with_retries
from .poly import Polynomial, PolyMap
from .reduction import FieldFamily, PoissonStructure
from .utils import finite_or_none

_log = logging.getLogger(__name__)


class GFunction:
    """The equilibrium system on the orbit space.

    The unknowns are ``theta``; ``lam`` is the last variable of
    :attr:`components`. Equilibria solve the stacked system
    ``[g(theta, lam); R(theta); C theta - levels]`` where ``R`` are the
    relations and ``C`` the linear Casimirs pinned at ``levels``.

    Attributes
    ----------
    components: :class:`~orbitspace.poly.PolyMap`
        ``g_j(t, lam)``, ``l`` components in ``l + 1`` variables.
    relations: Tuple[:class:`~orbitspace.poly.Polynomial`, ...]
        Relations among the generators, in ``l`` variables.
    casimirs: Tuple[Tuple[:class:`~fractions.Fraction`, ...], ...]
        Coefficient vectors of linear Casimirs.
    levels: Optional[Tuple[:class:`float`, ...]]
        Pinned Casimir values; ``None`` until :meth:`pinned` is called.
    """

    __slots__ = ('components', 'relations', 'casimirs', 'levels', '_g', '_dg', '_r', '_dr', '_c')

    def __init__(
        self,
        components: PolyMap,
        *,
        relations: Sequence[Polynomial] = (),
        casimirs: Sequence[Sequence[Fraction]] = (),
        levels: Optional[Sequence[float]] = None,
    ) -> None:
        l = len(components)
        if components.ambient_dim != l + 1:
            raise OrbitSpaceException(f'g needs {l + 1} variables, received {components.ambient_dim}')
        self.components: PolyMap = components
        self.relations: Tuple[Polynomial, ...] = tuple(relations)
        self.casimirs: Tuple[Tuple[Fraction, ...], ...] = tuple(tuple(c) for c in casimirs)
        self.levels: Optional[Tuple[float, ...]] = None if levels is None else tuple(float(x) for x in levels)
        self._g = components.compile()
        self._dg = PolyMap([c.differentiate(k) for c in components for k in range(l + 1)], ambient_dim=l + 1).compile()
        relation_map = PolyMap(self.relations, ambient_dim=l)
        self._r = relation_map.compile()
        self._dr = PolyMap([r.differentiate(k) for r in self.relations for k in range(l)], ambient_dim=l).compile()
        self._c = np.array([[float(x) for x in c] for c in self.casimirs]).reshape(len(self.casimirs), l)

    @classmethod
    def from_system(
        cls, system: ReducedSystem, *, relations: Sequence[Polynomial] = (), casimirs: Sequence[Sequence[Fraction]] = ()
    ) -> GFunction:
        return cls(system.components, relations=relations, casimirs=casimirs)

    def __repr__(self) -> str:
        return (
            f'<{self.__class__.__name__} size={self.size} '
            f'relations={len(self.relations)} casimirs={len(self.casimirs)}>'
        )

    @property
    def size(self) -> int:
        return len(self.components)

    @property
    def rows(self) -> int:
        return self.size + len(self.relations) + (len(self.casimirs) if self.levels is not None else 0)

    def pinned(self, theta: Sequence[float]) -> GFunction:
        """A copy with the Casimir levels fixed at their values at ``theta``."""
        levels = self._c @ np.asarray(theta, dtype=float) if self.casimirs else ()
        result = GFunction.__new__(GFunction)
        for name in ('components', 'relations', 'casimirs', '_g', '_dg', '_r', '_dr', '_c'):
            setattr(result, name, getattr(self, name))
        result.levels = tuple(float(x) for x in levels)
        return result

    def _point(self, theta: Sequence[float], lam: float) -> np.ndarray:
        return np.append(np.asarray(theta, dtype=float), float(lam))

    def evaluate(self, theta: Sequence[float], lam: float) -> np.ndarray:
        """``g(theta, lam)`` alone."""
        return self._g(self._point(theta, lam))

    def residual(self, theta: Sequence[float], lam: float) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        parts = [self._g(self._point(theta, lam))]
        if self.relations:
            parts.append(self._r(theta))
        if self.casimirs and self.levels is not None:
            parts.append(self._c @ theta - np.asarray(self.levels))
        return np.concatenate(parts)

    def full_jacobian(self, theta: Sequence[float], lam: float) -> np.ndarray:
        """Jacobian of the stacked system with respect to ``(theta, lam)``."""
        theta = np.asarray(theta, dtype=float)
        l = self.size
        blocks = [self._dg(self._point(theta, lam)).reshape(l, l + 1)]
        if self.relations:
            dr = self._dr(theta).reshape(len(self.relations), l)
            blocks.append(np.hstack([dr, np.zeros((len(self.relations), 1))]))
        if self.casimirs and self.levels is not None:
            blocks.append(np.hstack([self._c, np.zeros((len(self.casimirs), 1))]))
        return np.vstack(blocks)

    def jacobian(self, theta: Sequence[float], lam: float) -> np.ndarray:
        return self.full_jacobian(theta, lam)[:, :-1]

    def restricted_jacobian(self, theta: Sequence[float], lam: float, tol: float = 1e-10) -> np.ndarray:
        """``d_theta g`` restricted to the tangent space of the constraint variety at ``theta``."""
        theta = np.asarray(theta, dtype=float)
        l = self.size
        dg = self._dg(self._point(theta, lam)).reshape(l, l + 1)[:, :-1]
        constraints = []
        if self.relations:
            constraints.append(self._dr(theta).reshape(len(self.relations), l))
        if self.casimirs:
            constraints.append(self._c)
        if not constraints:
            return dg
        tangent = linalg.numeric_null_space(np.vstack(constraints), tol)
        return dg @ tangent


def assemble_g(family: FieldFamily, basis: InvariantBasis, poisson: PoissonStructure) -> GFunction:
    """``g_j = sum_i dF/dt_i(t, lam) P_ji(t)`` with relations and linear Casimirs attached."""
    if family.kind is not FieldKind.hamiltonian or family.hamiltonian is None:
        raise OrbitSpaceException('assemble_g needs a Hamiltonian family')
    F = family.hamiltonian
    l = basis.size
    if F.ambient_dim != l + 1 or poisson.size != l:
        raise OrbitSpaceException('hamiltonian, basis and poisson matrix disagree on l')
    rows = []
    for j in range(l):
        total = Polynomial.zero(l + 1)
        for i in range(l):
            entry = poisson.matrix[j][i]
            if entry:
                total = total + F.differentiate(i) * entry.embed(l + 1)
        rows.append(total)
    casimirs = [c for c in poisson.casimirs()] if l else []
    return GFunction(PolyMap(rows, ambient_dim=l + 1), relations=basis.relations, casimirs=casimirs)


class Equilibrium:
    """A converged solution of the stacked system.

    Attributes
    ----------
    theta: :class:`numpy.ndarray`
        The orbit-space point.
    lam: :class:`float`
        The parameter value.
    residual: :class:`float`
        Norm of the stacked residual.
    iterations: :class:`int`
        Newton iterations used.
    history: List[:class:`float`]
        Residual norm before each iteration and after the last.
    """

    __slots__ = ('theta', 'lam', 'residual', 'iterations', 'history', 'condition_number')

    def __init__(
        self, *, theta: np.ndarray, lam: float, residual: float, iterations: int, history: List[float]
    ) -> None:
        self.theta: np.ndarray = theta
        self.lam: float = lam
        self.residual: float = residual
        self.iterations: int = iterations
        self.history: List[float] = history
        self.condition_number: Optional[float] = None

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} lam={self.lam} theta={self.theta.tolist()} residual={self.residual:.3e}>'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda': self.lam,
            'theta': self.theta.tolist(),
            'residual': self.residual,
            'iterations': self.iterations,
            'condition_number': finite_or_none(self.condition_number),
        }


def _gauss_newton(
    residual, jacobian, y: np.ndarray, *, tol: float, max_iter: int, what: str
) -> Tuple[np.ndarray, float, int, List[float]]:
    r = residual(y)
    norm = float(np.linalg.norm(r))
    start = norm
    history = [norm]
    for iteration in range(max_iter + 1):
        if norm <= tol:
            return y, norm, iteration, history
        if iteration == max_iter:
            break
        step = sla.lstsq(jacobian(y), -r, lapack_driver='gelsd')[0]
        y = y + step
        r = residual(y)
        norm = float(np.linalg.norm(r))
        history.append(norm)
        _log.debug('%s iteration %d: residual %.3e', what, iteration + 1, norm)
        if not math.isfinite(norm) or norm > 1e8 * (1.0 + start):
            raise ConvergenceFailure(iteration + 1, norm, 'diverged', what)
    raise ConvergenceFailure(max_iter, norm, 'max_iter', what)


def solve_equilibrium(
    g: GFunction, theta_guess: Sequence[float], lam: float, *, tol: float = 1e-10, max_iter: int = 50
) -> Equilibrium:
    """Gauss-Newton with least-squares steps on the stacked system at fixed ``lam``.

    Raises
    ------
    ConvergenceFailure
        ``'max_iter'`` or ``'diverged'``.
    """
    theta0 = np.asarray(theta_guess, dtype=float)
    if theta0.shape != (g.size,):
        raise OrbitSpaceException(f'guess has {theta0.size} entries, expected {g.size}')
    theta, norm, iterations, history = _gauss_newton(
        lambda y: g.residual(y, lam),
        lambda y: g.jacobian(y, lam),
        theta0,
        tol=tol,
        max_iter=max_iter,
        what='equilibrium',
    )
    return Equilibrium(theta=theta, lam=float(lam), residual=norm, iterations=iterations, history=history)


class NondegeneracyCheck:
    """Outcome of :func:`check_hvs_nondegeneracy`.

    Attributes
    ----------
    nondegenerate: :class:`bool`
        Whether the restricted Jacobian has full rank below the condition threshold.
    condition_number: :class:`float`
        Ratio of its largest to smallest singular value; ``inf`` when singular.
    smallest: :class:`float`
        Its smallest singular value.
    """

    __slots__ = ('nondegenerate', 'condition_number', 'smallest', 'largest')

    def __init__(self, *, nondegenerate: bool, condition_number: float, smallest: float, largest: float) -> None:
        self.nondegenerate: bool = nondegenerate
        self.condition_number: float = condition_number
        self.smallest: float = smallest
        self.largest: float = largest

    def __bool__(self) -> bool:
        return self.nondegenerate

    def __repr__(self) -> str:
        return (
            f'<{self.__class__.__name__} nondegenerate={self.nondegenerate} '
            f'condition_number={self.condition_number:.3e}>'
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'nondegenerate': self.nondegenerate,
            'condition_number': finite_or_none(self.condition_number),
            'smallest_singular_value': self.smallest,
        }


def _restricted_condition(g: GFunction, theta: np.ndarray, lam: float, threshold: float) -> NondegeneracyCheck:
    restricted = g.restricted_jacobian(theta, lam)
    if restricted.shape[1] == 0:
        return NondegeneracyCheck(nondegenerate=True, condition_number=1.0, smallest=float('inf'), largest=0.0)
    condition, largest, smallest = linalg.condition_number(restricted)
    nondegenerate = restricted.shape[0] >= restricted.shape[1] and condition < threshold and smallest > 0.0
    return NondegeneracyCheck(
        nondegenerate=nondegenerate, condition_number=condition, smallest=smallest, largest=largest
    )


def check_hvs_nondegeneracy(
    g: GFunction, theta0: Sequence[float], lam0: float, *, threshold: float = 1e8, tol: float = 1e-8
) -> NondegeneracyCheck:
    """Whether ``d_theta g`` on the tangent space of the constraint variety is invertible enough.

    Raises
    ------
    NotAnEquilibrium
        The stacked residual at ``(theta0, lam0)`` exceeds ``tol``.
    """
    theta = np.asarray(theta0, dtype=float)
    if g.casimirs and g.levels is None:
        g = g.pinned(theta)
    residual = float(np.linalg.norm(g.residual(theta, lam0)))
    if residual > tol:
        raise NotAnEquilibrium(residual)
    return _restricted_condition(g, theta, lam0, threshold)


class BranchPoint:
    """One accepted point of a branch, with its lift once computed.

    Attributes
    ----------
    lam: :class:`float`
        Parameter value.
    theta: :class:`numpy.ndarray`
        Orbit-space point.
    residual_reduced: :class:`float`
        Stacked residual norm.
    condition_number: :class:`float`
        Condition number of the restricted Jacobian.
    v_lift: Optional[:class:`numpy.ndarray`]
        A representative in ``V``.
    isotropy: Optional[:class:`~orbitspace.groups.IsotropyLabel`]
        Isotropy type of the lift.
    velocity: Optional[:class:`numpy.ndarray`]
        Coefficients of the velocity in the torus generators.
    residual_lift: Optional[:class:`float`]
        Largest of the Hilbert-map and velocity residuals.
    n_H: Optional[:class:`int`]
        Torus rank at the lift.
    flagged: :class:`bool`
        Whether lifting failed at this point.
    """

    __slots__ = (
        'lam',
        'theta',
        'residual_reduced',
        'condition_number',
        'v_lift',
        'isotropy',
        'velocity',
        'residual_lift',
        'n_H',
        'flagged',
    )

    def __init__(self, *, lam: float, theta: np.ndarray, residual_reduced: float, condition_number: float) -> None:
        self.lam: float = float(lam)
        self.theta: np.ndarray = np.asarray(theta, dtype=float)
        self.residual_reduced: float = float(residual_reduced)
        self.condition_number: float = float(condition_number)
        self.v_lift: Optional[np.ndarray] = None
        self.isotropy: Optional[IsotropyLabel] = None
        self.velocity: Optional[np.ndarray] = None
        self.residual_lift: Optional[float] = None
        self.n_H: Optional[int] = None
        self.flagged: bool = False

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} lam={self.lam:.6g} theta={self.theta.tolist()}>'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda': self.lam,
            'theta': self.theta.tolist(),
            'v_lift': None if self.v_lift is None else self.v_lift.tolist(),
            'isotropy': None if self.isotropy is None else str(self.isotropy),
            'velocity': None if self.velocity is None else self.velocity.tolist(),
            'residual_reduced': self.residual_reduced,
            'residual_lift': finite_or_none(self.residual_lift),
            'n_H': self.n_H,
            'condition_number': finite_or_none(self.condition_number),
            'flagged': self.flagged,
        }


class Branch:
    """A curve of reduced equilibria ordered along the parameter range.

    Attributes
    ----------
    points: List[:class:`BranchPoint`]
        Accepted points, from the ``from`` end of the range to the ``to`` end.
    termination: :class:`~orbitspace.enums.TerminationReason`
        Why the run toward ``to`` stopped.
    termination_start: Optional[:class:`~orbitspace.enums.TerminationReason`]
        Why the run toward ``from`` stopped, when the seed was inside the range.
    lambda_range: Tuple[:class:`float`, :class:`float`]
        The requested ``(from, to)``.
    seed: Tuple[List[:class:`float`], :class:`float`]
        The seed ``(theta, lam)``.
    metadata: Dict[:class:`str`, Any]
        Scenario name and solver settings.
    """

    __slots__ = ('points', 'termination', 'termination_start', 'lambda_range', 'seed', 'metadata')

    def __init__(
        self,
        *,
        points: List[BranchPoint],
        termination: TerminationReason,
        termination_start: Optional[TerminationReason] = None,
        lambda_range: Tuple[float, float],
        seed: Tuple[List[float], float],
        metadata: Optional[Dict[str, Any]] = None,
    ) -> None:
        self.points: List[BranchPoint] = points
        self.termination: TerminationReason = termination
        self.termination_start: Optional[TerminationReason] = termination_start
        self.lambda_range: Tuple[float, float] = lambda_range
        self.seed: Tuple[List[float], float] = seed
        self.metadata: Dict[str, Any] = metadata or {}

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} points={len(self.points)} termination={self.termination}>'

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[BranchPoint]:
        return iter(self.points)

    def __getitem__(self, index: int) -> BranchPoint:
        return self.points[index]

    def lambdas(self) -> np.ndarray:
        return np.array([p.lam for p in self.points])

    def thetas(self) -> np.ndarray:
        return np.array([p.theta for p in self.points])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'termination': self.termination.value,
            'termination_start': None if self.termination_start is None else self.termination_start.value,
            'lambda_range': list(self.lambda_range),
            'seed': {'theta': list(self.seed[0]), 'lambda': self.seed[1]},
            'metadata': self.metadata,
            'points': [p.to_dict() for p in self.points],
        }


def _tangent(g: GFunction, theta: np.ndarray, lam: float) -> np.ndarray:
    jac = g.full_jacobian(theta, lam)
    _, _, vh = sla.svd(jac)
    return vh[-1]


def _trace(
    g: GFunction,
    theta: np.ndarray,
    lam: float,
    target: float,
    *,
    step: float,
    min_step: float,
    max_steps: int,
    tol: float,
    max_iter: int,
    threshold: float,
    reference: NondegeneracyCheck,
) -> Tuple[List[BranchPoint], TerminationReason]:
    """Pseudo-arclength continuation from a seed toward ``lam = target``."""
    direction = 1.0 if target >= lam else -1.0
    y = np.append(theta, lam)
    tangent = _tangent(g, theta, lam)
    if tangent[-1] * direction < 0 or (tangent[-1] == 0.0 and direction < 0):
        tangent = -tangent
    h = step
    points: List[BranchPoint] = []
    previous_det = _det_sign(g, theta, lam)
    l = g.size

    for count in range(max_steps):
        predicted = y + h * tangent

        def augmented(z: np.ndarray) -> np.ndarray:
            return np.append(g.residual(z[:l], z[l]), tangent @ (z - predicted))

        def augmented_jacobian(z: np.ndarray) -> np.ndarray:
            return np.vstack([g.full_jacobian(z[:l], z[l]), tangent])

        try:
            z, _, iterations, _ = _gauss_newton(
                augmented, augmented_jacobian, predicted, tol=tol, max_iter=max_iter, what='corrector'
            )
        except ConvergenceFailure:
            h /= 2.0
            _log.debug('corrector failed; step halved to %.3e', h)
            if h < min_step:
                return points, TerminationReason.step_underflow
            continue

        if (z[l] - target) * direction > 0.0:
            # overshoot: land exactly on the range end
            guess = y[:l] + (z[:l] - y[:l]) * (target - y[l]) / (z[l] - y[l]) if z[l] != y[l] else z[:l]
            try:
                end = solve_equilibrium(g, guess, target, tol=tol, max_iter=max_iter)
            except ConvergenceFailure:
                h /= 2.0
                if h < min_step:
                    return points, TerminationReason.step_underflow
                continue
            check = _restricted_condition(g, end.theta, target, threshold)
            points.append(
                BranchPoint(
                    lam=target, theta=end.theta, residual_reduced=end.residual, condition_number=check.condition_number
                )
            )
            if not check.nondegenerate or check.smallest < 1e-3 * reference.smallest:
                _log.info('possible bifurcation at the range end lam=%.6g', target)
                return points, TerminationReason.possible_bifurcation
            return points, TerminationReason.range_end

        residual = float(np.linalg.norm(g.residual(z[:l], z[l])))
        check = _restricted_condition(g, z[:l], z[l], threshold)
        points.append(
            BranchPoint(
                lam=z[l], theta=z[:l].copy(), residual_reduced=residual, condition_number=check.condition_number
            )
        )
        det = _det_sign(g, z[:l], z[l])
        degenerate = (
            not check.nondegenerate
            or check.smallest < 1e-3 * reference.smallest
            or (det != 0 and previous_det != 0 and det != previous_det)
        )
        if degenerate:
            _log.info('possible bifurcation near lam=%.6g (condition %.3e)', z[l], check.condition_number)
            return points, TerminationReason.possible_bifurcation
        if z[l] == target:
            return points, TerminationReason.range_end

        new_tangent = _tangent(g, z[:l], z[l])
        if new_tangent @ tangent < 0:
            new_tangent = -new_tangent
        tangent = new_tangent
        y = z
        previous_det = det
        if iterations <= 3 and h < step:
            h = min(step, 2.0 * h)
    return points, TerminationReason.max_steps


def _det_sign(g: GFunction, theta: np.ndarray, lam: float) -> int:
    restricted = g.restricted_jacobian(theta, lam)
    if restricted.shape[0] != restricted.shape[1] or restricted.shape[0] == 0:
        return 0
    return int(np.sign(np.linalg.det(restricted)))


def continue_branch(
    g: GFunction,
    seed: Tuple[Sequence[float], float],
    lambda_range: Tuple[float, float],
    *,
    step: float = 1e-2,
    min_step: float = 1e-8,
    max_steps: int = 2000,
    tol: float = 1e-10,
    max_iter: int = 50,
    threshold: float = 1e8,
    metadata: Optional[Dict[str, Any]] = None,
) -> Branch:
    """Continues a branch of equilibria across ``lambda_range`` from a nondegenerate seed.

    A seed strictly inside the range is continued in both directions and the
    halves are merged, ordered from ``lambda_range[0]`` to ``lambda_range[1]``.

    Raises
    ------
    NotAnEquilibrium
        The seed residual exceeds ``1e-8``.
    InvalidSeed
        The seed is degenerate or the range is empty.
    """
    lam_from, lam_to = float(lambda_range[0]), float(lambda_range[1])
    if lam_from == lam_to:
        raise InvalidSeed('empty parameter range')
    if step <= 0 or min_step <= 0:
        raise InvalidSeed('step sizes must be positive')
    theta0 = np.asarray(seed[0], dtype=float)
    lam0 = float(seed[1])
    if g.casimirs and g.levels is None:
        g = g.pinned(theta0)
    residual = float(np.linalg.norm(g.residual(theta0, lam0)))
    if residual > 1e-8:
        raise NotAnEquilibrium(residual)
    try:
        polished = solve_equilibrium(g, theta0, lam0, tol=tol, max_iter=max_iter)
    except ConvergenceFailure as exc:
        raise InvalidSeed(f'seed does not converge ({exc.reason})') from exc
    reference = _restricted_condition(g, polished.theta, lam0, threshold)
    if not reference.nondegenerate:
        raise InvalidSeed(f'degenerate seed (condition number {reference.condition_number:.3e})')

    seed_point = BranchPoint(
        lam=lam0, theta=polished.theta, residual_reduced=polished.residual, condition_number=reference.condition_number
    )
    options = dict(step=step, min_step=min_step, max_steps=max_steps, tol=tol, max_iter=max_iter, threshold=threshold)
    low, high = min(lam_from, lam_to), max(lam_from, lam_to)
    if not low <= lam0 <= high:
        raise InvalidSeed(f'seed lambda {lam0} outside [{low}, {high}]')

    forward: List[BranchPoint] = []
    termination = TerminationReason.range_end
    if lam0 != lam_to:
        forward, termination = _trace(g, polished.theta, lam0, lam_to, reference=reference, **options)
    backward: List[BranchPoint] = []
    termination_start: Optional[TerminationReason] = None
    if lam0 != lam_from:
        backward, termination_start = _trace(g, polished.theta, lam0, lam_from, reference=reference, **options)
    points = list(reversed(backward)) + [seed_point] + forward
    _log.info(
        'branch of %d points; termination %s (start side %s)',
        len(points),
        termination.value,
        None if termination_start is None else termination_start.value,
    )
    return Branch(
        points=points,
        termination=termination,
        termination_start=termination_start,
        lambda_range=(lam_from, lam_to),
        seed=(polished.theta.tolist(), lam0),
        metadata=metadata,
    )


def presweep(
    g: GFunction,
    basis: InvariantBasis,
    lam: float,
    rng: np.random.Generator,
    *,
    guesses: int = 32,
    tol: float = 1e-10,
    max_iter: int = 50,
    threshold: float = 1e8,
    lift_retries: int = 8,
) -> List[Equilibrium]:
    """Finds seeds at ``lam`` from guesses ``pi(v)`` with random ``v``.

    Kept seeds are nontrivial, liftable and nondegenerate, deduplicated, and
    sorted by condition number.
    """
    found: List[Equilibrium] = []
    for _ in range(guesses):
        v = rng.standard_normal(basis.ambient_dim) * rng.uniform(0.1, 2.0)
        guess = np.asarray(hilbert_map(v, basis), dtype=float)
        system = g.pinned(guess) if g.casimirs else g
        try:
            equilibrium = solve_equilibrium(system, guess, lam, tol=tol, max_iter=max_iter)
        except ConvergenceFailure:
            continue
        theta = equilibrium.theta
        if float(np.linalg.norm(theta)) <= 1e-8:
            continue
        check = _restricted_condition(system, theta, lam, threshold)
        if not check.nondegenerate:
            continue
        try:
            lift_with_retries(theta, basis, rng, retries=lift_retries, tol=max(tol, 1e-10))
        except ConvergenceFailure:
            continue
        if any(np.linalg.norm(theta - other.theta) <= 1e-6 * (1.0 + np.linalg.norm(theta)) for other in found):
            continue
        equilibrium.condition_number = check.condition_number
        found.append(equilibrium)
    found.sort(key=lambda e: e.condition_number if e.condition_number is not None else math.inf)
    _log.info('presweep at lam=%.6g kept %d of %d guesses', lam, len(found), guesses)
    return found


__all__ = (
    'GFunction',
    'assemble_g',
    'Equilibrium',
    'solve_equilibrium',
    'NondegeneracyCheck',
    'check_hvs_nondegeneracy',
    'BranchPoint',
    'Branch',
    'continue_branch',
    'presweep',
)
