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
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .abc import ReducedSystem, VectorField
from .errors import BlowUp, DimensionMismatch, GridMismatch
from .groups import GroupRep
from .invariants import InvariantBasis
from .poly import Polynomial, PolyMap
from .reduction import FieldFamily

_log = logging.getLogger(__name__)


class CompiledField:
    """A polynomial family frozen at one parameter value.

    Satisfies :class:`~orbitspace.abc.VectorField`.

    Attributes
    ----------
    dim: :class:`int`
        State dimension; the map has ``dim + 1`` variables, ``lam`` last.
    lam: :class:`float`
        The frozen parameter.
    """

    __slots__ = ('dim', 'lam', '_compiled')

    def __init__(self, field: PolyMap, lam: float) -> None:
        if field.ambient_dim != len(field) + 1:
            raise DimensionMismatch(len(field) + 1, field.ambient_dim, 'field arity')
        self.dim: int = len(field)
        self.lam: float = float(lam)
        self._compiled = field.compile()

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} dim={self.dim} lam={self.lam}>'

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self._compiled(np.append(x, self.lam))

    @classmethod
    def full(cls, family: FieldFamily, lam: float) -> CompiledField:
        return cls(family.vector_field(), lam)

    @classmethod
    def reduced(cls, system: ReducedSystem, lam: float) -> CompiledField:
        return cls(system.components, lam)


class Trajectory:
    """States on a uniform time grid.

    Attributes
    ----------
    times: :class:`numpy.ndarray`
        Strictly increasing, uniformly spaced.
    states: :class:`numpy.ndarray`
        One row per time.
    metadata: Dict[:class:`str`, Any]
        ``dt``, ``method`` and whatever the caller adds.
    """

    __slots__ = ('times', 'states', 'metadata')

    def __init__(self, times: np.ndarray, states: np.ndarray, metadata: Optional[Dict[str, Any]] = None) -> None:
        self.times: np.ndarray = times
        self.states: np.ndarray = states
        self.metadata: Dict[str, Any] = metadata or {}

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} steps={len(self)} dim={self.dim}>'

    def __len__(self) -> int:
        return len(self.times)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def rows(self) -> List[List[float]]:
        return [[float(t), *map(float, state)] for t, state in zip(self.times, self.states)]


class SimulationReport:
    """Cross-checks of the full and reduced flows over several starts.

    Attributes
    ----------
    lam: :class:`float`
        The parameter value of every run.
    starts: List[List[:class:`float`]]
        The starting points in ``V``.
    commutation_errors: List[:class:`float`]
        One :func:`commutation_error` per start.
    energy_drift: Optional[:class:`float`]
        Largest drift of the full Hamiltonian (Hamiltonian families).
    relation_drift: Optional[:class:`float`]
        Largest drift of any relation along the reduced flows.
    equivariance_error: Optional[:class:`float`]
        :func:`equivariance_error` from the first start.
    full: Optional[:class:`Trajectory`]
        The full trajectory of the first start.
    reduced: Optional[:class:`Trajectory`]
        The reduced trajectory of the first start.
    """

    __slots__ = (
        'lam',
        'T',
        'dt',
        'starts',
        'commutation_errors',
        'energy_drift',
        'relation_drift',
        'equivariance_error',
        'full',
        'reduced',
    )

    def __init__(self, *, lam: float, T: float, dt: float) -> None:
        self.lam: float = lam
        self.T: float = T
        self.dt: float = dt
        self.starts: List[List[float]] = []
        self.commutation_errors: List[float] = []
        self.energy_drift: Optional[float] = None
        self.relation_drift: Optional[float] = None
        self.equivariance_error: Optional[float] = None
        self.full: Optional[Trajectory] = None
        self.reduced: Optional[Trajectory] = None

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} starts={len(self.starts)} max_error={self.max_commutation_error:.3e}>'

    @property
    def max_commutation_error(self) -> float:
        return max(self.commutation_errors, default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda': self.lam,
            'T': self.T,
            'dt': self.dt,
            'starts': self.starts,
            'commutation_errors': self.commutation_errors,
            'max_commutation_error': self.max_commutation_error,
            'energy_drift': self.energy_drift,
            'relation_drift': self.relation_drift,
            'equivariance_error': self.equivariance_error,
        }


def integrate(
    field: VectorField, x0: Sequence[float], T: float, dt: float, *, metadata: Optional[Dict[str, Any]] = None
) -> Trajectory:
    """Classical fourth-order Runge-Kutta with a fixed step.

    Raises
    ------
    ValueError
        ``T`` or ``dt`` is not positive.
    DimensionMismatch
        ``x0`` does not match ``field.dim``.
    BlowUp
        A state became non-finite.
    """
    if T <= 0 or dt <= 0:
        raise ValueError('T and dt must be positive')
    x = np.array(x0, dtype=float)
    if x.shape != (field.dim,):
        raise DimensionMismatch(field.dim, x.size)
    steps = max(1, int(round(T / dt)))
    times = dt * np.arange(steps + 1)
    states = np.empty((steps + 1, field.dim))
    states[0] = x
    for k in range(steps):
        k1 = field(x)
        k2 = field(x + 0.5 * dt * k1)
        k3 = field(x + 0.5 * dt * k2)
        k4 = field(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise BlowUp(float(times[k + 1]))
        states[k + 1] = x
    info = {'dt': dt, 'method': 'rk4'}
    info.update(metadata or {})
    return Trajectory(times, states, info)


def commutation_error(full: Trajectory, reduced: Trajectory, basis: InvariantBasis) -> float:
    """``max_t |pi(x(t)) - theta(t)|``.

    Raises
    ------
    GridMismatch
        The trajectories were sampled on different times.
    """
    if full.times.shape != reduced.times.shape or not np.array_equal(full.times, reduced.times):
        raise GridMismatch()
    projected = basis.as_map.compile()(full.states)
    return float(np.max(np.abs(projected - reduced.states), initial=0.0))


def conservation_drift(trajectory: Trajectory, quantity: Polynomial) -> float:
    """``max_t |q(x(t)) - q(x(0))|``.

    Raises
    ------
    DimensionMismatch
        ``quantity`` does not take ``trajectory.dim`` variables.
    """
    if quantity.ambient_dim != trajectory.dim:
        raise DimensionMismatch(trajectory.dim, quantity.ambient_dim, 'quantity arity')
    values = PolyMap([quantity], ambient_dim=quantity.ambient_dim).compile()(trajectory.states)[:, 0]
    return float(np.max(np.abs(values - values[0]), initial=0.0))


def simulate_pair(
    family: FieldFamily,
    system: ReducedSystem,
    basis: InvariantBasis,
    v0: Sequence[float],
    lam: float,
    T: float,
    dt: float,
) -> Tuple[Trajectory, Trajectory, float]:
    """Integrates the full field from ``v0`` and the reduced field from ``pi(v0)``."""
    start = np.asarray(v0, dtype=float)
    full = integrate(CompiledField.full(family, lam), start, T, dt, metadata={'level': 'full', 'lambda': lam})
    theta0 = basis.as_map.compile()(start)
    reduced = integrate(CompiledField.reduced(system, lam), theta0, T, dt, metadata={'level': 'reduced', 'lambda': lam})
    error = commutation_error(full, reduced, basis)
    _log.debug('commutation error %.3e from %s', error, start.tolist())
    return full, reduced, error


def equivariance_error(family: FieldFamily, G: GroupRep, v0: Sequence[float], lam: float, T: float, dt: float) -> float:
    """``max_g |Phi_T(g v0) - g Phi_T(v0)|`` over the finite elements."""
    field = CompiledField.full(family, lam)
    start = np.asarray(v0, dtype=float)
    reference = integrate(field, start, T, dt).final
    finite, _ = G.arrays()
    worst = 0.0
    for g in finite:
        moved = integrate(field, g @ start, T, dt).final
        worst = max(worst, float(np.linalg.norm(moved - g @ reference)))
    return worst


__all__ = (
    'CompiledField',
    'Trajectory',
    'SimulationReport',
    'integrate',
    'commutation_error',
    'conservation_drift',
    'simulate_pair',
    'equivariance_error',
)
