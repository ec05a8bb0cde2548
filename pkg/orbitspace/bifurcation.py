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
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg as sla
from scipy import optimize

from . import linalg
from .continuation import Branch
from .enums import FieldKind, NondegeneracyClass, Verdict
from .errors import ConvergenceFailure, DegeneratePairing, DimensionMismatch, NoClassification, ZeroFixedSpace
from .groups import (
    GroupRep,
    IsotropyLabel,
    Subgroup,
    fixed_subspace,
    is_subconjugate,
    isotropy,
    normalizer,
    same_orbit_type,
    torus_rank_nH,
)
from .invariants import InvariantBasis, lift_with_retries
from .poly import Pairing, Polynomial, PolyMap, canonical_pairing, poisson_tensor
from .reduction import FieldFamily, PoissonStructure
from .utils import MISSING, finite_or_none

_log = logging.getLogger(__name__)

CLASS_TOLERANCE = 1e-8
CODIM_RADII = (1.0, 0.5, 0.25, 0.125, 0.0625)

_COEFFICIENT_NAMES: Dict[NondegeneracyClass, Tuple[str, ...]] = {
    NondegeneracyClass.stationary: ('sigma',),
    NondegeneracyClass.hopf: ('sigma', 'rho'),
    NondegeneracyClass.ham_steady_state: ('sigma',),
    NondegeneracyClass.ham_hopf: ('sigma', 'rho', 'tau', 'psi'),
}


def default_lambda_grid(h: float = 1e-2) -> Tuple[float, ...]:
    return (-2 * h, -h, 0.0, h, 2 * h)


def _linearization(family: FieldFamily) -> PolyMap:
    """``dX_a/dv_b`` at ``v = 0`` as polynomials in ``lam`` (row major)."""
    field = family.vector_field()
    n = family.ambient_dim
    zero_v = PolyMap(
        [Polynomial.zero(1) for _ in range(n)] + [Polynomial.variable(1, 0)],
        ambient_dim=1,
    )
    entries = [component.differentiate(b).compose(zero_v) for component in field for b in range(n)]
    return PolyMap(entries, ambient_dim=1)


def linearization_at(family: FieldFamily, lam: float) -> np.ndarray:
    n = family.ambient_dim
    return _linearization(family).compile()(np.array([float(lam)])).reshape(n, n)


def _derivatives(grid: np.ndarray, values: np.ndarray) -> Tuple[float, float]:
    """Value and slope at ``lam = 0``, by central difference when the grid allows it."""
    zero = np.flatnonzero(grid == 0.0)
    if zero.size:
        i = int(zero[0])
        if 0 < i < len(grid) - 1 and np.isclose(grid[i + 1], -grid[i - 1]):
            h = grid[i + 1]
            return float(values[i]), float((values[i + 1] - values[i - 1]) / (2 * h))
    degree = min(2, len(grid) - 1)
    fit = np.polyfit(grid, values, degree)
    return float(np.polyval(fit, 0.0)), float(np.polyval(np.polyder(fit), 0.0))


class NondegeneracyReport:
    """Classification of the linearization ``DX_lam(0)`` along a parameter grid.

    Attributes
    ----------
    cls: :class:`~orbitspace.enums.NondegeneracyClass`
        The matched class; ``NondegeneracyClass.none`` when nothing fits.
    grid: Tuple[:class:`float`, ...]
        The parameter values sampled.
    curves: Dict[:class:`str`, List[:class:`float`]]
        Fitted coefficient curves (``sigma`` and, per class, ``rho``, ``tau``, ``psi``).
    fit_residual: Optional[:class:`float`]
        Largest relative fit residual of the matched class.
    residuals: Dict[:class:`str`, :class:`float`]
        Fit residual of every candidate class that was tried.
    sigma0: Optional[:class:`float`]
        ``sigma(0)``.
    sigma_prime0: Optional[:class:`float`]
        ``sigma'(0)``.
    values_at_zero: Dict[:class:`str`, :class:`float`]
        Every fitted curve evaluated at ``lam = 0``.
    transversal: :class:`bool`
        ``|sigma(0)| <= 1e-8`` and ``|sigma'(0)| >= 1e-6``.
    """

    __slots__ = (
        'cls',
        'grid',
        'curves',
        'fit_residual',
        'residuals',
        'sigma0',
        'sigma_prime0',
        'values_at_zero',
        'transversal',
    )

    def __init__(
        self,
        *,
        cls: NondegeneracyClass,
        grid: Sequence[float],
        curves: Dict[str, List[float]],
        fit_residual: Optional[float],
        residuals: Dict[str, float],
        sigma0: Optional[float],
        sigma_prime0: Optional[float],
        values_at_zero: Dict[str, float],
    ) -> None:
        self.cls: NondegeneracyClass = cls
        self.grid: Tuple[float, ...] = tuple(grid)
        self.curves: Dict[str, List[float]] = curves
        self.fit_residual: Optional[float] = fit_residual
        self.residuals: Dict[str, float] = residuals
        self.sigma0: Optional[float] = sigma0
        self.sigma_prime0: Optional[float] = sigma_prime0
        self.values_at_zero: Dict[str, float] = values_at_zero
        self.transversal: bool = (
            sigma0 is not None and sigma_prime0 is not None and abs(sigma0) <= 1e-8 and abs(sigma_prime0) >= 1e-6
        )

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} cls={self.cls} transversal={self.transversal}>'

    @property
    def classified(self) -> bool:
        return self.cls is not NondegeneracyClass.none

    def to_dict(self) -> Dict[str, Any]:
        return {
            'class': self.cls.value,
            'grid': list(self.grid),
            'curves': self.curves,
            'fit_residual': finite_or_none(self.fit_residual),
            'residuals': self.residuals,
            'sigma0': self.sigma0,
            'sigma_prime0': self.sigma_prime0,
            'values_at_zero': self.values_at_zero,
            'transversal': self.transversal,
        }


def _candidates(
    family: FieldFamily,
    complex_structure: Optional[Sequence[Sequence[Any]]],
    hopf_blocks: Optional[Sequence[Sequence[Sequence[Any]]]],
) -> List[Tuple[NondegeneracyClass, List[np.ndarray]]]:
    n = family.ambient_dim
    identity = np.eye(n)
    if family.kind is FieldKind.hamiltonian:
        J = linalg.to_array(complex_structure) if complex_structure is not None else linalg.to_array(
            poisson_tensor(n, family.pairing)
        )
        result = [(NondegeneracyClass.ham_steady_state, [J])]
        if hopf_blocks:
            result.append((NondegeneracyClass.ham_hopf, [linalg.to_array(block) for block in hopf_blocks]))
        return result
    result = [(NondegeneracyClass.stationary, [identity])]
    if complex_structure is not None:
        result.append((NondegeneracyClass.hopf, [identity, linalg.to_array(complex_structure)]))
    return result


def classify_linearization(
    family: FieldFamily,
    *,
    complex_structure: Optional[Sequence[Sequence[Any]]] = None,
    hopf_blocks: Optional[Sequence[Sequence[Sequence[Any]]]] = None,
    lambda_grid: Optional[Sequence[float]] = None,
    tol: float = CLASS_TOLERANCE,
) -> NondegeneracyReport:
    """Fits ``DX_lam(0)`` against the spans of each nondegeneracy class.

    General families are tried against ``{I}`` then ``{I, J}``; Hamiltonian
    families against ``{J}`` then the four blocks ``A_1..A_4``. ``J`` defaults
    to the Poisson tensor of the pairing for Hamiltonian families. The first
    class whose relative residual stays below ``tol`` on the whole grid wins.
    """
    grid = np.asarray(lambda_grid if lambda_grid is not None else default_lambda_grid(), dtype=float)
    linear = _linearization(family).compile()
    n = family.ambient_dim
    samples = [linear(np.array([lam])).reshape(n, n) for lam in grid]
    residuals: Dict[str, float] = {}
    for cls, span in _candidates(family, complex_structure, hopf_blocks):
        design = np.stack([block.ravel() for block in span], axis=1)
        coefficients = []
        worst = 0.0
        for L in samples:
            c = sla.lstsq(design, L.ravel(), lapack_driver='gelsd')[0]
            misfit = float(np.linalg.norm(design @ c - L.ravel())) / max(1.0, float(np.linalg.norm(L)))
            worst = max(worst, misfit)
            coefficients.append(c)
        residuals[cls.value] = worst
        _log.debug('class %s: fit residual %.3e', cls.value, worst)
        if worst > tol:
            continue
        table = np.array(coefficients)
        names = _COEFFICIENT_NAMES[cls]
        curves = {name: table[:, k].tolist() for k, name in enumerate(names)}
        values_at_zero = {}
        sigma0 = sigma_prime0 = None
        for k, name in enumerate(names):
            value, slope = _derivatives(grid, table[:, k])
            values_at_zero[name] = value
            if name == 'sigma':
                sigma0, sigma_prime0 = value, slope
        return NondegeneracyReport(
            cls=cls,
            grid=grid.tolist(),
            curves=curves,
            fit_residual=worst,
            residuals=residuals,
            sigma0=sigma0,
            sigma_prime0=sigma_prime0,
            values_at_zero=values_at_zero,
        )
    _log.warning('no nondegeneracy class fits the linearization')
    return NondegeneracyReport(
        cls=NondegeneracyClass.none,
        grid=grid.tolist(),
        curves={},
        fit_residual=None,
        residuals=residuals,
        sigma0=None,
        sigma_prime0=None,
        values_at_zero={},
    )


def leading_coefficient(family: FieldFamily) -> Polynomial:
    """``f_1(t, lam)``, or ``dF/dt_1`` for a Hamiltonian family."""
    if family.kind is FieldKind.hamiltonian:
        assert family.hamiltonian is not None
        return family.hamiltonian.differentiate(0)
    if not family.coefficients:
        raise NoClassification()
    return family.coefficients[0]


def coefficient_vector(family: FieldFamily) -> List[Fraction]:
    """``(f_i(0, 0))``, or ``(dF/dt_i(0, 0))`` for a Hamiltonian family."""
    if family.kind is FieldKind.hamiltonian:
        assert family.hamiltonian is not None
        return [family.hamiltonian.differentiate(i).constant_term for i in range(family.basis.size)]
    return [f.constant_term for f in family.coefficients]


def check_transversality(family: FieldFamily, *, classification: Optional[NondegeneracyReport] = None) -> bool:
    """Exactly tests ``f_1(0, 0) = 0`` and ``d/dlam f_1(0, 0) != 0``.

    Raises
    ------
    NoClassification
        ``classification`` matched no class.
    """
    if classification is not None and not classification.classified:
        raise NoClassification()
    f = leading_coefficient(family)
    lam = f.ambient_dim - 1
    return f.constant_term == 0 and f.differentiate(lam).constant_term != 0


class CodimReport:
    """Evidence that ``A_(H)`` lies in a coordinate hyperplane ``{t_i1 = 0}``.

    Attributes
    ----------
    found: :class:`bool`
        Whether a witness was found. ``False`` is inconclusive, not a refutation.
    indices: Optional[Tuple[:class:`int`, :class:`int`]]
        ``(i0, i1)``, one based.
    witness: Optional[List[:class:`float`]]
        The point ``x0`` in ``V``.
    max_residual: Optional[:class:`float`]
        The largest bracket ratio at the smallest radius.
    ratios: List[:class:`float`]
        The largest ratio at each radius.
    conclusion: Optional[:class:`str`]
        The inclusion in words.
    """

    __slots__ = ('found', 'indices', 'witness', 'max_residual', 'ratios', 'conclusion')

    def __init__(
        self,
        *,
        found: bool,
        indices: Optional[Tuple[int, int]] = None,
        witness: Optional[List[float]] = None,
        max_residual: Optional[float] = None,
        ratios: Sequence[float] = (),
    ) -> None:
        self.found: bool = found
        self.indices: Optional[Tuple[int, int]] = indices
        self.witness: Optional[List[float]] = witness
        self.max_residual: Optional[float] = max_residual
        self.ratios: List[float] = list(ratios)
        self.conclusion: Optional[str] = None
        if found and indices is not None:
            self.conclusion = f'A_(H) ⊆ {{t{indices[1]}=0}}, codim ≥ 1 for every (H) ≠ (G)'

    def __bool__(self) -> bool:
        return self.found

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} found={self.found} indices={self.indices}>'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'found': self.found,
            'indices': None if self.indices is None else list(self.indices),
            'witness': self.witness,
            'max_residual': self.max_residual,
            'ratios': self.ratios,
            'conclusion': self.conclusion,
        }


def _codim_candidates(n: int, rng: np.random.Generator, random_count: int) -> List[np.ndarray]:
    eye = np.eye(n)
    points = [eye[i] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            points.append(eye[i] + eye[j])
            points.append(eye[i] - eye[j])
    points.extend(rng.standard_normal(n) for _ in range(random_count))
    return points


def _ratios_vanish(ratios: Sequence[float], tol: float) -> bool:
    # below tol at the smallest radius and at least halved since the largest
    last = ratios[-1]
    return last == 0.0 or (last <= tol and last <= ratios[0] / 2)


def codim_criterion(
    basis: InvariantBasis,
    poisson: PoissonStructure,
    rng: np.random.Generator,
    *,
    scale: float = 1e-6,
    radii: Sequence[float] = CODIM_RADII,
    directions: int = 8,
    random_count: int = 16,
    tol: float = 1e-6,
    bracket_tol: float = 1e-12,
) -> CodimReport:
    """Searches a point ``x0`` where ``{t_i0, t_i}`` vanishes for every ``i`` except one index ``i1``.

    Near such a point the relation ``sum_i c_i {t_i0, t_i} = 0`` forces
    ``c_i1 = 0``. Each candidate is accepted when every ratio
    ``|{t_i0, t_i}(x)| / |{t_i0, t_i1}(x)|`` at ``x = x0 + r u`` stays below
    ``tol`` at the smallest radius ``r``, for random unit ``u``, and has at
    least halved from the largest radius. Ratios that are exactly zero pass.
    """
    l = basis.size
    n = basis.ambient_dim
    theta = basis.as_map.compile()
    rows = [i for i in range(l) if not all(entry.is_zero() for entry in poisson.matrix[i])]
    if not rows:
        _log.info('codim search: every bracket vanishes identically')
        return CodimReport(found=False)

    candidates = _codim_candidates(n, rng, random_count)
    unit_directions = rng.standard_normal((directions, n))
    unit_directions /= np.linalg.norm(unit_directions, axis=1, keepdims=True)

    for i0 in rows:
        row = PolyMap(poisson.matrix[i0], ambient_dim=l).compile()

        def brackets(x: np.ndarray) -> np.ndarray:
            return row(theta(x))

        for x0 in candidates:
            values = np.abs(brackets(x0))
            nonzero = np.flatnonzero(values > bracket_tol * max(1.0, float(np.max(values))))
            if nonzero.size == 0:
                continue
            if nonzero.size > 1:
                i1 = int(np.argmax(values))
                others = [i for i in range(l) if i != i1]

                def worst_ratio(x: np.ndarray) -> float:
                    b = np.abs(brackets(x))
                    return float(np.max(b[others]) / b[i1]) if b[i1] else np.inf

                result = optimize.minimize(
                    worst_ratio, x0, method='Nelder-Mead', options={'xatol': 1e-12, 'fatol': 1e-14}
                )
                x0 = result.x
                values = np.abs(brackets(x0))
                nonzero = np.flatnonzero(values > bracket_tol * max(1.0, float(np.max(values))))
                if nonzero.size != 1:
                    continue
            i1 = int(nonzero[0])
            others = [i for i in range(l) if i != i1]
            ratios = []
            for radius in radii:
                worst = 0.0
                for u in unit_directions:
                    b = np.abs(brackets(x0 + radius * scale * u))
                    if b[i1] == 0.0:
                        worst = np.inf
                        break
                    if others:
                        worst = max(worst, float(np.max(b[others]) / b[i1]))
                ratios.append(worst)
            if _ratios_vanish(ratios, tol):
                _log.info('codim witness: (i0, i1) = (%d, %d)', i0 + 1, i1 + 1)
                return CodimReport(
                    found=True,
                    indices=(i0 + 1, i1 + 1),
                    witness=[float(x) for x in x0],
                    max_residual=ratios[-1],
                    ratios=ratios,
                )
    _log.info('codim search found no witness')
    return CodimReport(found=False)


def lift_branch(
    branch: Branch,
    basis: InvariantBasis,
    family: FieldFamily,
    G: GroupRep,
    rng: np.random.Generator,
    *,
    tol: float = 1e-10,
    retries: int = 8,
    isotropy_tol: float = 1e-9,
    origin_tol: Optional[float] = None,
) -> Branch:
    """Lifts every branch point to ``V`` and records isotropy, velocity and ``n_H``.

    Each lift is warm started from the previous one. Lifts shorter than
    ``origin_tol``, by default ``sqrt(tol)``, are taken as the origin. The velocity solves
    ``X(v) = sum_a c_a xi_a v`` in the least-squares sense; the lift residual
    is the larger of the Hilbert-map misfit and that equation's residual.
    Points whose lift fails are flagged and skipped.
    """
    field = family.vector_field().compile()
    theta = basis.as_map.compile()
    _, torus = G.arrays()
    if origin_tol is None:
        origin_tol = math.sqrt(tol)
    previous: Any = MISSING
    for point in branch.points:
        try:
            v = lift_with_retries(point.theta, basis, rng, guess=previous, retries=retries, tol=tol)
        except ConvergenceFailure as exc:
            point.flagged = True
            _log.warning('lift failed at lam=%.6g: %s', point.lam, exc)
            continue
        previous = v
        X = field(np.append(v, point.lam))
        if torus.shape[0]:
            generators = np.stack([xi @ v for xi in torus], axis=1)
            velocity = sla.lstsq(generators, X, lapack_driver='gelsd')[0]
            velocity_residual = float(np.linalg.norm(generators @ velocity - X))
        else:
            velocity = np.zeros(0)
            velocity_residual = float(np.linalg.norm(X))
        point.v_lift = v
        point.velocity = velocity
        point.residual_lift = max(float(np.linalg.norm(theta(v) - point.theta)), velocity_residual)
        point.isotropy = isotropy(v, G, isotropy_tol, atol=origin_tol).label
        point.n_H = torus_rank_nH(v, G, isotropy_tol, atol=origin_tol)
    return branch


def isotropy_monotonicity_violations(branch: Branch, G: GroupRep, *, tol: float = 1e-9) -> List[int]:
    """Indices of lifted points on the ``lam > lam0`` side whose isotropy is not subconjugate to the seed's."""
    seed_lam = branch.seed[1]
    seed_points = [p for p in branch.points if p.lam == seed_lam and p.v_lift is not None]
    if not seed_points:
        return []
    seed_group = isotropy(seed_points[0].v_lift, G, tol)
    violations = []
    for index, point in enumerate(branch.points):
        if point.v_lift is None or point.lam <= seed_lam:
            continue
        if not is_subconjugate(isotropy(point.v_lift, G, tol), seed_group):
            violations.append(index)
    return violations


def check_isotropy_monotonicity(branch: Branch, G: GroupRep, *, tol: float = 1e-9) -> bool:
    return not isotropy_monotonicity_violations(branch, G, tol=tol)


class Diagnostic:
    """A verdict of :func:`branch_existence_diagnostic` with the evidence behind it.

    Attributes
    ----------
    verdict: :class:`~orbitspace.enums.Verdict`
        The outcome.
    label: :class:`~orbitspace.groups.IsotropyLabel`
        The isotropy type asked about.
    detail: :class:`str`
        A sentence describing which evidence decided the verdict.
    evidence: Dict[:class:`str`, Any]
        Classification, transversality, codim and membership findings.
    """

    __slots__ = ('verdict', 'label', 'detail', 'evidence')

    def __init__(self, *, verdict: Verdict, label: IsotropyLabel, detail: str, evidence: Dict[str, Any]) -> None:
        self.verdict: Verdict = verdict
        self.label: IsotropyLabel = label
        self.detail: str = detail
        self.evidence: Dict[str, Any] = evidence

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} verdict={self.verdict} label={self.label}>'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'verdict': self.verdict.value,
            'isotropy': str(self.label),
            'detail': self.detail,
            'evidence': self.evidence,
        }


def _coefficient_columns(family: FieldFamily, v: np.ndarray) -> np.ndarray:
    """Columns ``F_i(v)``, or ``X_{theta_i}(v)`` for a Hamiltonian family."""
    n = family.ambient_dim
    if family.kind is FieldKind.hamiltonian:
        J = linalg.to_array(poisson_tensor(n, family.pairing))
        gradients = np.array([table.compile()(v) for table in family.basis.gradient_table]).reshape(-1, n)
        return (J @ gradients.T).reshape(n, -1)
    assert family.equivariants is not None
    return np.stack([F.compile()(v) for F in family.equivariants.generators], axis=1).reshape(n, -1)


def _t_set(family: FieldFamily, G: GroupRep, v: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the coefficient vectors ``t`` making ``sum_i t_i F_i(v)`` tangent to the orbit."""
    columns = _coefficient_columns(family, v)
    raw = np.linalg.norm(columns, axis=0)
    _, torus = G.arrays()
    if torus.shape[0]:
        orbit = np.stack([xi @ v for xi in torus], axis=1)
        q = linalg.numeric_null_space(orbit.T, tol)
        columns = q @ (q.T @ columns)
    norms = np.linalg.norm(columns, axis=0)
    # columns left only by rounding after the orbit projection count as zero
    live = norms > tol * raw
    columns = np.where(live, columns, 0.0)
    scales = np.where(live, norms, 1.0)
    kernel = linalg.numeric_null_space(columns / scales, tol) / scales[:, None]
    if kernel.shape[1] == 0:
        return kernel
    q, _ = np.linalg.qr(kernel)
    return q[:, : kernel.shape[1]]


def branch_existence_diagnostic(
    family: FieldFamily,
    G: GroupRep,
    H: Subgroup,
    rng: np.random.Generator,
    *,
    classification: NondegeneracyReport,
    codim: Optional[CodimReport] = None,
    transversal: Optional[bool] = None,
    membership_tol: float = 1e-6,
    membership_samples: int = 10000,
    isotropy_tol: float = 1e-9,
) -> Diagnostic:
    """Matches the computed evidence against the hypotheses of the branching results.

    In order: a codim witness excluding ``gamma(0)`` gives non-membership; a
    missing class or a non-transversal family is inconclusive; ``gamma(0)`` in
    a sampled coefficient set of codimension exactly one predicts existence;
    sets of codimension zero are inconclusive;
    every sampled set of codimension two or more predicts non-existence.
    Coefficient sets come from points of type ``(H)`` at radii from ``1`` to ``1e-4``.
    """
    label = H.label
    gamma = np.array([float(x) for x in coefficient_vector(family)])
    evidence: Dict[str, Any] = {
        'class': classification.cls.value,
        'gamma0': gamma.tolist(),
        'codim_found': None if codim is None else codim.found,
    }

    def verdict(kind: Verdict, detail: str) -> Diagnostic:
        if kind is Verdict.inconclusive:
            _log.warning('diagnostic for %s inconclusive: %s', label, detail)
        return Diagnostic(verdict=kind, label=label, detail=detail, evidence=evidence)

    if codim is not None and codim.found and codim.indices is not None and not H.is_whole():
        i1 = codim.indices[1]
        evidence['codim_conclusion'] = codim.conclusion
        if i1 - 1 < gamma.size and abs(gamma[i1 - 1]) > membership_tol:
            return verdict(
                Verdict.non_membership,
                f'gamma(0) has t{i1} = {gamma[i1 - 1]:.6g} while A_(H) ⊆ {{t{i1}=0}}: '
                f'no branch with isotropy {label} predicted through this seed',
            )
    if not classification.classified:
        return verdict(Verdict.inconclusive, 'no nondegeneracy class fits the linearization')
    if transversal is None:
        transversal = check_transversality(family, classification=classification)
    evidence['transversal'] = transversal
    if not transversal:
        return verdict(Verdict.inconclusive, 'the family is not transversal at lam = 0')

    space = fixed_subspace(H)
    if space.dim == 0:
        return verdict(Verdict.inconclusive, f'no points of type {label}: the fixed space is zero')
    frame = space.orthonormal()
    radii = np.logspace(0.0, -4.0, 20)
    codims: List[int] = []
    best_distance = np.inf
    size = gamma.size
    gamma_scale = max(1.0, float(np.linalg.norm(gamma)))
    used = 0
    for sample in range(membership_samples):
        v = frame @ rng.standard_normal(space.dim)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            continue
        v *= radii[sample % radii.size] / norm
        if not same_orbit_type(isotropy(v, G, isotropy_tol), H):
            continue
        used += 1
        kernel = _t_set(family, G, v, 1e-8)
        codims.append(size - kernel.shape[1])
        distance = float(np.linalg.norm(gamma - kernel @ (kernel.T @ gamma))) / gamma_scale
        if codims[-1] == 1 and distance < best_distance:
            best_distance = distance
        if best_distance <= membership_tol:
            break
    evidence.update(
        samples=used,
        codim_lower=min(codims) if codims else None,
        codim_upper=max(codims) if codims else None,
        membership_distance=finite_or_none(best_distance),
    )
    if not codims:
        return verdict(Verdict.inconclusive, f'no sampled point has isotropy type {label}')
    if max(codims) == 0:
        return verdict(
            Verdict.inconclusive,
            f'codim 0 evidence: every coefficient vector is tangent to the orbit at points of type {label}',
        )
    if best_distance <= membership_tol:
        return verdict(
            Verdict.existence,
            'codim A_(H)=1 evidence, transversal, gamma(0) in A_(H) witnessed numerically',
        )
    if min(codims) >= 2:
        return verdict(Verdict.non_existence, 'codim ≥ 2 evidence for every sampled coefficient set')
    return verdict(Verdict.inconclusive, 'gamma(0) is not in any sampled coefficient set')


class FixedSpaceRestriction:
    """A family restricted to ``V^K`` with the residual symmetry ``N(K)/K``.

    Attributes
    ----------
    subgroup: :class:`~orbitspace.groups.Subgroup`
        The subgroup ``K``.
    embedding: List[List[:class:`~fractions.Fraction`]]
        ``n x k`` matrix whose columns span ``V^K``; new coordinates ``w`` map to ``E w``.
    group: :class:`~orbitspace.groups.GroupRep`
        The restricted group on ``k`` coordinates.
    kind: :class:`~orbitspace.enums.FieldKind`
        Kind of the restricted family.
    vector_field: Optional[:class:`~orbitspace.poly.PolyMap`]
        The restricted field in ``(w, lam)`` (general families).
    hamiltonian: Optional[:class:`~orbitspace.poly.Polynomial`]
        The restricted Hamiltonian in ``(w, lam)`` (Hamiltonian families).
    pairing: Optional[Tuple[Tuple[:class:`int`, :class:`int`], ...]]
        Canonical pairs of the new coordinates.
    unchanged: :class:`bool`
        Whether ``K`` was trivial, so nothing was restricted.
    """

    __slots__ = ('subgroup', 'embedding', 'group', 'kind', 'vector_field', 'hamiltonian', 'pairing', 'unchanged')

    def __init__(
        self,
        *,
        subgroup: Subgroup,
        embedding: List[List[Fraction]],
        group: GroupRep,
        kind: FieldKind,
        vector_field: Optional[PolyMap] = None,
        hamiltonian: Optional[Polynomial] = None,
        pairing: Optional[Pairing] = None,
        unchanged: bool = False,
    ) -> None:
        self.subgroup: Subgroup = subgroup
        self.embedding: List[List[Fraction]] = embedding
        self.group: GroupRep = group
        self.kind: FieldKind = kind
        self.vector_field: Optional[PolyMap] = vector_field
        self.hamiltonian: Optional[Polynomial] = hamiltonian
        self.pairing: Optional[Pairing] = pairing
        self.unchanged: bool = unchanged

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} dim={self.dim} kind={self.kind} unchanged={self.unchanged}>'

    @property
    def dim(self) -> int:
        return self.group.dim


def _symplectic_basis(
    vectors: Sequence[Sequence[Fraction]], form: Sequence[Sequence[Fraction]]
) -> List[List[Fraction]]:
    """Pairs ``(e_1, f_1, e_2, f_2, ...)`` spanning the same space with ``omega(e_a, f_b) = delta_ab``.

    Raises
    ------
    DegeneratePairing
        The form restricted to the span is degenerate.
    """

    def omega(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
        return sum((a[i] * form[i][j] * b[j] for i in range(len(a)) for j in range(len(b)) if form[i][j]), Fraction(0))

    remaining = [list(v) for v in vectors]
    result: List[List[Fraction]] = []
    while remaining:
        e = remaining.pop(0)
        partner = next((k for k, f in enumerate(remaining) if omega(e, f)), None)
        if partner is None:
            raise DegeneratePairing()
        f = remaining.pop(partner)
        f = [x / omega(e, f) for x in f]
        result.extend((e, f))
        remaining = [
            [u_i - omega(u, f) * e_i + omega(u, e) * f_i for u_i, e_i, f_i in zip(u, e, f)] for u in remaining
        ]
        remaining = [u for u in remaining if any(u)]
    return result


def _project(embedding: List[List[Fraction]], metric: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """The left inverse ``(E^T M E)^-1 E^T M`` of the embedding."""
    Et = linalg.transpose(embedding)
    EtM = linalg.matmul(Et, metric)
    return linalg.matmul(linalg.inverse(linalg.matmul(EtM, embedding)), EtM)


def restrict_to_fixed_space(family: FieldFamily, G: GroupRep, K: Subgroup) -> FixedSpaceRestriction:
    """Restricts ``family`` to ``V^K`` with the residual action of ``N(K)/K``.

    Finite normalizer elements and torus generators act on ``V^K`` through the
    left inverse of the embedding; duplicates collapse, so ``K`` acts
    trivially. For Hamiltonian families the basis of ``V^K`` is made
    symplectic so the restricted pairing is canonical.

    Raises
    ------
    ZeroFixedSpace
        ``V^K = {0}``.
    DegeneratePairing
        The symplectic form restricted to ``V^K`` is degenerate.
    """
    if K.parent is not G:
        raise DimensionMismatch(G.dim, K.parent.dim, 'subgroup parent')
    n = G.dim
    if K.is_trivial():
        return FixedSpaceRestriction(
            subgroup=K,
            embedding=linalg.identity(n),
            group=G,
            kind=family.kind,
            vector_field=family.vector_field() if family.kind is FieldKind.general else None,
            hamiltonian=family.full_hamiltonian() if family.kind is FieldKind.hamiltonian else None,
            pairing=family.pairing,
            unchanged=True,
        )
    space = fixed_subspace(K)
    if space.dim == 0:
        raise ZeroFixedSpace()

    vectors: List[List[Fraction]] = [list(b) for b in space.basis]
    if family.kind is FieldKind.hamiltonian:
        if space.dim % 2:
            raise DegeneratePairing()
        vectors = _symplectic_basis(vectors, poisson_tensor(n, family.pairing))
    embedding = linalg.transpose(vectors)
    k = len(vectors)
    metric = linalg.matmul(linalg.transpose(embedding), linalg.matmul(G.metric, embedding))
    left = _project(embedding, G.metric)

    N = normalizer(K)
    elements = [
        linalg.matmul(left, linalg.matmul(G.finite_elements[g], embedding)) for g in sorted(N.finite_member_indices)
    ]
    torus: List[List[List[Fraction]]] = []
    spanned: List[List[Fraction]] = []
    for xi in G.torus_generators:
        restricted = linalg.matmul(left, linalg.matmul(xi, embedding))
        flat = [x for row in restricted for x in row]
        if linalg.rank(spanned + [flat], k * k) > len(spanned):
            spanned.append(flat)
            torus.append(restricted)
    group = GroupRep(k, finite_elements=elements, torus_generators=torus, metric=metric)

    substitution_rows = [list(row) + [Fraction(0)] for row in embedding] + [[Fraction(0)] * k + [Fraction(1)]]
    substitution = PolyMap.linear(substitution_rows, k + 1)
    _log.info('restricted to a fixed space of dimension %d; residual group order %d', k, group.order)
    if family.kind is FieldKind.hamiltonian:
        return FixedSpaceRestriction(
            subgroup=K,
            embedding=embedding,
            group=group,
            kind=family.kind,
            hamiltonian=family.full_hamiltonian().compose(substitution),
            pairing=canonical_pairing(k),
        )
    field = family.vector_field().compose(substitution).transform(left)
    return FixedSpaceRestriction(subgroup=K, embedding=embedding, group=group, kind=family.kind, vector_field=field)


__all__ = (
    'CLASS_TOLERANCE',
    'CODIM_RADII',
    'default_lambda_grid',
    'linearization_at',
    'NondegeneracyReport',
    'classify_linearization',
    'leading_coefficient',
    'coefficient_vector',
    'check_transversality',
    'CodimReport',
    'codim_criterion',
    'lift_branch',
    'isotropy_monotonicity_violations',
    'check_isotropy_monotonicity',
    'Diagnostic',
    'branch_existence_diagnostic',
    'FixedSpaceRestriction',
    'restrict_to_fixed_space',
)
