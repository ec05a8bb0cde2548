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
from typing import Dict, List, TYPE_CHECKING

if TYPE_CHECKING:
    from .types import Scenario as ScenarioPayload

_ROTATION = [[0, -1], [1, 0]]
_SYMPLECTIC = [[0, 1], [-1, 0]]

CATALOG: Dict[str, ScenarioPayload] = {
    'z2-pitchfork': {
        'name': 'z2-pitchfork',
        'description': 'Z2 acting on R by x -> -x; the pitchfork x\' = (lam - x^2) x.',
        'coordinates': ['x'],
        'group': {'generators': [[[-1]]]},
        'basis': {'mode': 'discover', 'max_degree': 4},
        'equivariants': [['1 * x']],
        'field': {'kind': 'general', 'coefficients': ['lam - t1']},
        'continuation': {'lambda0': 1.0, 'from': 1.0, 'to': 0.0, 'seed': [1.0]},
        'simulation': {'lambda': 1.0, 'T': 5.0, 'dt': 1e-3, 'starts': 20, 'radius': 1.0},
    },
    'so2-hopf': {
        'name': 'so2-hopf',
        'description': 'SO(2) rotating R^2; the Hopf normal form (lam - |v|^2) v + J v.',
        'coordinates': ['x', 'y'],
        'group': {'torus': [_ROTATION]},
        'basis': {'mode': 'discover', 'max_degree': 4},
        'equivariants': [['1 * x', '1 * y'], ['-1 * y', '1 * x']],
        'field': {'kind': 'general', 'coefficients': ['lam - t1', '1']},
        'structures': {'complex_structure': _ROTATION},
        'continuation': {'lambda0': 1.0, 'from': 1.0, 'to': 0.0, 'seed': [1.0]},
        'simulation': {'lambda': 1.0, 'T': 5.0, 'dt': 1e-3, 'starts': 20, 'radius': 1.0},
    },
    's1-resonance': {
        'name': 's1-resonance',
        'description': 'S1 acting diagonally on C^2 with canonical pairs (q1, p1), (q2, p2).',
        'coordinates': ['q1', 'p1', 'q2', 'p2'],
        'group': {
            'torus': [
                [
                    [0, 1, 0, 0],
                    [-1, 0, 0, 0],
                    [0, 0, 0, 1],
                    [0, 0, -1, 0],
                ]
            ]
        },
        'basis': {
            'mode': 'explicit',
            'generators': [
                '1/2 * q1^2 + 1/2 * p1^2',
                '1/2 * q2^2 + 1/2 * p2^2',
                '1 * q1*q2 + 1 * p1*p2',
                '1 * q1*p2 - 1 * p1*q2',
            ],
            'relations': ['-4 * t1*t2 + 1 * t3^2 + 1 * t4^2'],
        },
        'field': {'kind': 'hamiltonian', 'hamiltonian': '1 * t1 + 1 * t2 + 1 * t3*lam + 1 * t1^2'},
        'continuation': {'lambda0': 0.5, 'from': 0.3, 'to': 0.7},
        'simulation': {'lambda': 0.5, 'T': 5.0, 'dt': 1e-3, 'starts': 20, 'radius': 1.0},
    },
    'trivial-sympl': {
        'name': 'trivial-sympl',
        'description': 'The trivial group on R^2; the harmonic oscillator (q^2 + p^2)/2.',
        'coordinates': ['q', 'p'],
        'group': {},
        'basis': {'mode': 'explicit', 'generators': ['1 * q', '1 * p']},
        'field': {'kind': 'hamiltonian', 'hamiltonian': '1/2 * t1^2 + 1/2 * t2^2'},
        'simulation': {'lambda': 0.0, 'T': 5.0, 'dt': 1e-3, 'starts': 20, 'radius': 1.0},
    },
    'd3-plane': {
        'name': 'd3-plane',
        'description': 'D3 acting on R^2 in coordinates (x, s) with invariant metric x^2 + 3 s^2.',
        'coordinates': ['x', 's'],
        'group': {
            'generators': [
                [['-1/2', '-3/2'], ['1/2', '-1/2']],
                [[1, 0], [0, -1]],
            ],
            'metric': [[1, 0], [0, 3]],
        },
        'basis': {'mode': 'discover', 'max_degree': 6},
        'equivariants': [['1 * x', '1 * s'], ['1 * x^2 - 3 * s^2', '-2 * x*s']],
        'field': {'kind': 'general', 'coefficients': ['lam - t1', '1']},
        'simulation': {'lambda': 0.5, 'T': 5.0, 'dt': 1e-3, 'starts': 20, 'radius': 1.0},
    },
    'so2-steady': {
        'name': 'so2-steady',
        'description': 'SO(2) on R^2 with the Hamiltonian lam (q^2 + p^2); linearization 2 lam J.',
        'coordinates': ['q', 'p'],
        'group': {'torus': [_SYMPLECTIC]},
        'basis': {'mode': 'explicit', 'generators': ['1 * q^2 + 1 * p^2']},
        'field': {'kind': 'hamiltonian', 'hamiltonian': '1 * t1*lam'},
        'simulation': {'lambda': 0.5, 'T': 5.0, 'dt': 1e-3, 'starts': 20, 'radius': 1.0},
    },
}


def catalog_names() -> List[str]:
    return sorted(CATALOG)


def catalog_entry(name: str) -> ScenarioPayload:
    """A deep copy of a built-in scenario payload.

    Raises
    ------
    KeyError
        No such entry.
    """
    return copy.deepcopy(CATALOG[name])


__all__ = (
    'CATALOG',
    'catalog_names',
    'catalog_entry',
)
