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

from typing import Dict, List, Literal, Optional, TypedDict, Union

from typing_extensions import NotRequired

# Rationals travel as JSON numbers or strings such as "3/2".
Number = Union[int, float, str]
MatrixPayload = List[List[Number]]


class Group(TypedDict):
    # [optional] Finite generators; the finite part is their closure
    generators: NotRequired[List[MatrixPayload]]
    # [optional] Commuting infinitesimal torus generators
    torus: NotRequired[List[MatrixPayload]]
    # [optional] Invariant Gram matrix, identity when absent
    metric: NotRequired[MatrixPayload]
    # [optional] Closure cap
    max_order: NotRequired[int]


class Basis(TypedDict):
    mode: Literal['discover', 'explicit']
    # [optional] Degree cap of the discovery
    max_degree: NotRequired[int]
    # [optional] Generators in the coordinate names (explicit mode)
    generators: NotRequired[List[str]]
    # [optional] Relations in t1..tl (explicit mode); discovered when absent
    relations: NotRequired[List[str]]


class Field(TypedDict):
    kind: Literal['general', 'hamiltonian']
    # [optional] f_i(t, lam), one per equivariant generator
    coefficients: NotRequired[List[str]]
    # [optional] The field itself in (coordinates, lam); rewritten into coefficients
    vector_field: NotRequired[List[str]]
    # [optional] F(t, lam)
    hamiltonian: NotRequired[str]
    # [optional] The Hamiltonian in (coordinates, lam); rewritten into t
    hamiltonian_v: NotRequired[str]
    # [optional] Index pairs (q, p); consecutive pairs when absent
    pairing: NotRequired[List[List[int]]]


class Hopf(TypedDict):
    # The four blocks A_1..A_4
    blocks: List[MatrixPayload]
    # [optional] The complex structure J
    J: NotRequired[MatrixPayload]


class Structures(TypedDict):
    # [optional] J for Hopf classification
    complex_structure: NotRequired[MatrixPayload]
    # [optional] Blocks for Hamiltonian Hopf classification
    hopf: NotRequired[Hopf]


class Continuation(TypedDict):
    lambda0: float
    # 'from' is a keyword; the payload is read with .get
    to: float
    # [optional] Initial arclength step
    step: NotRequired[float]
    # [optional] Seed theta; found by presweep when absent
    seed: NotRequired[List[float]]


class Simulation(TypedDict):
    # 'lambda' (the parameter value of the runs) is a keyword; the payload is read with .get
    # [optional]
    T: NotRequired[float]
    # [optional]
    dt: NotRequired[float]
    # [optional] Number of random starting points
    starts: NotRequired[int]
    # [optional] Scale of the random starting points
    radius: NotRequired[float]


class Settings(TypedDict, total=False):
    tol: float
    max_iter: int
    step: float
    min_step: float
    max_steps: int
    condition_threshold: float
    isotropy_tol: float
    lift_tol: float
    lift_retries: int
    presweep_guesses: int
    invariant_degree: int
    equivariant_degree: int
    relation_degree: Optional[int]
    membership_tol: float
    membership_samples: int
    lambda_grid: Optional[List[float]]


class Scenario(TypedDict):
    name: str
    # [optional]
    description: NotRequired[str]
    coordinates: List[str]
    group: Group
    basis: Basis
    # [optional] Equivariant generators, one list of component texts each; discovered when absent
    equivariants: NotRequired[List[List[str]]]
    field: Field
    # [optional]
    structures: NotRequired[Structures]
    # [optional]
    continuation: NotRequired[Continuation]
    # [optional]
    settings: NotRequired[Settings]
    # [optional]
    simulation: NotRequired[Simulation]


class ReducedSystem(TypedDict):
    kind: Literal['general', 'hamiltonian']
    components: List[str]
    # [optional] <F_i, grad theta_j> tables (general)
    tables: NotRequired[List[List[str]]]
    # [optional] f_i (general)
    coefficients: NotRequired[List[str]]
    # [optional] F (hamiltonian)
    hamiltonian: NotRequired[str]
    # [optional] P (hamiltonian)
    poisson: NotRequired[List[List[str]]]


class ReducePayload(TypedDict):
    scenario: str
    coordinates: List[str]
    invariants: List[str]
    relations: List[str]
    equivariants: List[List[str]]
    reduced: ReducedSystem
    # [optional] Coefficients of a field given upstairs
    schwarz_coefficients: NotRequired[List[str]]
    # [optional] Exact Jacobi defects modulo the relations
    jacobi_defects: NotRequired[List[Dict[str, Union[List[int], str]]]]
    # [optional] Linear Casimirs
    casimirs: NotRequired[List[List[str]]]


class BranchPointPayload(TypedDict):
    # Keys mirror the CSV columns
    theta: List[float]
    v_lift: Optional[List[float]]
    isotropy: Optional[str]
    velocity: Optional[List[float]]
    residual_reduced: float
    residual_lift: Optional[float]
    n_H: Optional[int]
    condition_number: Optional[float]
    flagged: bool


__all__ = (
    'Number',
    'MatrixPayload',
    'Group',
    'Basis',
    'Field',
    'Hopf',
    'Structures',
    'Continuation',
    'Simulation',
    'Settings',
    'Scenario',
    'ReducedSystem',
    'ReducePayload',
    'BranchPointPayload',
)
