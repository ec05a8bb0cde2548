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
from typing import Any, Dict, List, Optional, Sequence, TYPE_CHECKING, Union

import numpy as np

from . import linalg
from .bifurcation import (
    CodimReport,
    Diagnostic,
    NondegeneracyReport,
    branch_existence_diagnostic,
    check_transversality,
    classify_linearization,
    codim_criterion,
    isotropy_monotonicity_violations,
    leading_coefficient,
    lift_branch,
    restrict_to_fixed_space,
)
from .catalog import CATALOG, catalog_names
from .continuation import Branch, continue_branch, presweep, solve_equilibrium
from .enums import FieldKind
from .errors import ConvergenceFailure, InvalidSeed, NoClassification, NotInvariant, ValidationError
from .groups import NH_NOTE, IsotropyLabel, Subgroup, isotropy
from .invariants import lift_with_retries, normal_span, orbit_constancy
from .reduction import check_tangency
from .scenario import PARAMETER, Scenario, SolverSettings, load_scenario
from .simulate import SimulationReport, conservation_drift, equivariance_error, simulate_pair
from .state import SessionState
from .utils import MISSING, finite_or_none, format_fraction, matrix_to_strings

if TYPE_CHECKING:
    from .types import ReducePayload, Scenario as ScenarioPayload

_log = logging.getLogger(__name__)

# sample times of the short commutation run inside ``check``
_CHECK_T = 1.0


class Session:
    r"""A scenario with its settings and seed; the programmatic twin of the command line.

    Every command is a method. Results are report objects with a ``to_dict``
    method, or plain payload dictionaries.

    .. container:: operations

        .. describe:: repr(x)

            Shows the scenario name and the seed.

    Parameters
    ----------
    scenario: Union[:class:`~orbitspace.scenario.Scenario`, :class:`str`, Dict[:class:`str`, Any]]
        A validated scenario, a catalog name, a JSON path or a payload.
    seed: :class:`int`
        Seed of the random generators.
    tol: :class:`float`
        Overrides the solver tolerance of the scenario.
    max_degree: :class:`int`
        Overrides the discovery degree caps.
    """

    __slots__ = ('_state',)

    def __init__(
        self,
        scenario: Union[Scenario, str, Dict[str, Any]],
        *,
        seed: int = 0,
        tol: float = MISSING,
        max_degree: int = MISSING,
    ) -> None:
        if not isinstance(scenario, Scenario):
            scenario = load_scenario(scenario)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise TypeError(f'expected seed to be an int, received {seed.__class__.__name__} instead')
        settings = scenario.settings
        if tol is not MISSING:
            settings = settings.replace(tol=tol)
        self._state: SessionState = SessionState(
            scenario=scenario,
            settings=settings,
            seed=seed,
            max_degree=None if max_degree is MISSING else max_degree,
        )

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} scenario={self.scenario.name!r} seed={self.seed}>'

    @property
    def state(self) -> SessionState:
        return self._state

    @property
    def scenario(self) -> Scenario:
        return self._state.scenario

    @property
    def settings(self) -> SolverSettings:
        return self._state.settings

    @property
    def seed(self) -> int:
        return self._state.seed

    @staticmethod
    def catalog() -> List[Dict[str, str]]:
        """Names and descriptions of the built-in scenarios."""
        return [{'name': name, 'description': CATALOG[name].get('description', '')} for name in catalog_names()]

    # reduction

    def reduce(self) -> ReducePayload:
        """The invariant basis, the equivariants and the reduced system.

        Hamiltonian scenarios also report the Jacobi defects and Casimirs of
        the Poisson matrix.
        """
        state = self._state
        scenario = state.scenario
        basis = state.basis
        names = state.theta_names
        _log.info('reducing %r', scenario.name)
        payload: ReducePayload = {
            'scenario': scenario.name,
            'coordinates': list(scenario.coordinates),
            'invariants': [theta.to_text(scenario.coordinates) for theta in basis.generators],
            'relations': [relation.to_text(names) for relation in basis.relations],
            'equivariants': [],
            'reduced': state.reduced.to_dict(names),  # type: ignore
        }
        if state.family.kind is FieldKind.general:
            payload['equivariants'] = state.equivariants.to_dict(scenario.coordinates)
            schwarz = state.schwarz_coefficients
            if schwarz is not None:
                payload['schwarz_coefficients'] = [c.to_text(state.reduced_names()) for c in schwarz]
        else:
            poisson = state.poisson
            payload['jacobi_defects'] = [
                {'indices': [i + 1, j + 1, k + 1], 'defect': defect.to_text(names)}
                for (i, j, k), defect in poisson.jacobi_defects()
            ]
            payload['casimirs'] = matrix_to_strings(poisson.casimirs()) if state.g.casimirs else []
        return payload

    # equilibria and continuation

    def _lambda0(self) -> float:
        continuation = self.scenario.continuation
        return float(continuation.get('lambda0', continuation.get('from', self.scenario.simulation['lambda'])))

    def equilibria(self, lam: Optional[float] = None) -> Dict[str, Any]:
        """Seeds found by the presweep at ``lam``, with a lift and its isotropy type each."""
        state = self._state
        settings = state.settings
        lam = self._lambda0() if lam is None else float(lam)
        rng = state.generator()
        found = presweep(
            state.g,
            state.basis,
            lam,
            rng,
            guesses=settings.presweep_guesses,
            tol=settings.tol,
            max_iter=settings.max_iter,
            threshold=settings.condition_threshold,
            lift_retries=settings.lift_retries,
        )
        records = []
        for equilibrium in found:
            record = equilibrium.to_dict()
            try:
                v = lift_with_retries(
                    equilibrium.theta, state.basis, rng, retries=settings.lift_retries, tol=settings.lift_tol
                )
            except ConvergenceFailure:
                _log.warning('no lift for the equilibrium at theta=%s', equilibrium.theta.tolist())
                record.update(v_lift=None, isotropy=None)
            else:
                record['v_lift'] = v.tolist()
                H = isotropy(v, state.group, settings.isotropy_tol, atol=math.sqrt(settings.lift_tol))
                record['isotropy'] = str(H.label)
            records.append(record)
        return {'scenario': self.scenario.name, 'lambda': lam, 'equilibria': records}

    def _seed(self, lam: float) -> np.ndarray:
        state = self._state
        settings = state.settings
        given = self.scenario.continuation.get('seed')
        if given is None:
            found = presweep(
                state.g,
                state.basis,
                lam,
                state.generator(),
                guesses=settings.presweep_guesses,
                tol=settings.tol,
                max_iter=settings.max_iter,
                threshold=settings.condition_threshold,
                lift_retries=settings.lift_retries,
            )
            if not found:
                raise InvalidSeed(f'the presweep found no nondegenerate equilibrium at lam={lam}')
            return found[0].theta
        guess = np.asarray(given, dtype=float)
        if guess.shape != (state.basis.size,):
            raise ValidationError([('continuation.seed', f'expected {state.basis.size} values')])
        g = state.g.pinned(guess) if state.g.casimirs else state.g
        try:
            return solve_equilibrium(g, guess, lam, tol=settings.tol, max_iter=settings.max_iter).theta
        except ConvergenceFailure as exc:
            raise InvalidSeed(f'the given seed does not converge at lam={lam} ({exc.reason})') from exc

    def continue_branch(
        self, *, start: Optional[float] = None, stop: Optional[float] = None, step: Optional[float] = None
    ) -> Branch:
        """Continues and lifts a branch across ``[start, stop]``.

        The seed is the scenario's seed, or the best presweep equilibrium, at
        ``lambda0`` when it lies in the range and at ``start`` otherwise.
        """
        state = self._state
        settings = state.settings
        scenario = self.scenario
        lam_from, lam_to = scenario.parameter_range(start=start, stop=stop)
        lam0 = self._lambda0()
        if not min(lam_from, lam_to) <= lam0 <= max(lam_from, lam_to):
            lam0 = lam_from
        if step is None:
            step = scenario.continuation.get('step', settings.step)
        theta0 = self._seed(lam0)
        _log.info('continuing %r from lam=%.6g over [%.6g, %.6g]', scenario.name, lam0, lam_from, lam_to)
        branch = continue_branch(
            state.g,
            (theta0, lam0),
            (lam_from, lam_to),
            step=step,
            min_step=settings.min_step,
            max_steps=settings.max_steps,
            tol=settings.tol,
            max_iter=settings.max_iter,
            threshold=settings.condition_threshold,
            metadata={'scenario': scenario.name, 'seed': self.seed, 'settings': settings.to_dict()},
        )
        lift_branch(
            branch,
            state.basis,
            state.family,
            state.group,
            state.generator(),
            tol=settings.lift_tol,
            retries=settings.lift_retries,
            isotropy_tol=settings.isotropy_tol,
        )
        violations = isotropy_monotonicity_violations(branch, state.group, tol=settings.isotropy_tol)
        if violations:
            _log.warning('isotropy is not monotone at branch points %s', violations)
        branch.metadata['isotropy_violations'] = violations
        branch.metadata['n_H'] = NH_NOTE
        return branch

    # classification and theorem diagnostics

    def classify(self) -> NondegeneracyReport:
        state = self._state
        scenario = self.scenario
        return classify_linearization(
            state.family,
            complex_structure=scenario.complex_structure,
            hopf_blocks=scenario.hopf_blocks,
            lambda_grid=state.settings.lambda_grid,
        )

    def transversality(self) -> Dict[str, Any]:
        """The exact transversality test next to the classifier's estimates.

        Raises
        ------
        NoClassification
            The linearization matched no class.
        """
        report = self.classify()
        family = self._state.family
        verdict = check_transversality(family, classification=report)
        f1 = leading_coefficient(family)
        lam = f1.ambient_dim - 1
        return {
            'scenario': self.scenario.name,
            'class': report.cls.value,
            'leading_coefficient': f1.to_text(self._state.reduced_names()),
            'value_at_zero': format_fraction(f1.constant_term),
            'derivative_at_zero': format_fraction(f1.differentiate(lam).constant_term),
            'sigma0': report.sigma0,
            'sigma_prime0': report.sigma_prime0,
            'transversal': verdict,
        }

    def codim(self) -> CodimReport:
        state = self._state
        return codim_criterion(state.basis, state.poisson, state.generator())

    def _subgroup(self, label: str) -> Subgroup:
        G = self._state.group
        try:
            parsed = IsotropyLabel.from_text(label)
        except ValueError as exc:
            raise ValidationError([('label', str(exc))]) from None
        if parsed.torus_dim > G.torus_rank:
            raise ValidationError([('label', f'torus part {parsed.torus_dim} exceeds the torus rank {G.torus_rank}')])
        return Subgroup(G, parsed.finite_key, linalg.identity(G.torus_rank)[: parsed.torus_dim])

    def _presweep_subgroups(self) -> List[Subgroup]:
        state = self._state
        settings = state.settings
        rng = state.generator()
        found = presweep(
            state.g,
            state.basis,
            self._lambda0(),
            rng,
            guesses=settings.presweep_guesses,
            tol=settings.tol,
            max_iter=settings.max_iter,
            threshold=settings.condition_threshold,
            lift_retries=settings.lift_retries,
        )
        subgroups: Dict[IsotropyLabel, Subgroup] = {}
        for equilibrium in found:
            try:
                v = lift_with_retries(
                    equilibrium.theta, state.basis, rng, retries=settings.lift_retries, tol=settings.lift_tol
                )
            except ConvergenceFailure:
                continue
            H = isotropy(v, state.group, settings.isotropy_tol)
            subgroups.setdefault(H.label, H)
        if not subgroups:
            trivial = Subgroup.trivial(state.group)
            subgroups[trivial.label] = trivial
        return list(subgroups.values())

    def diagnose(self, label: Optional[str] = None) -> List[Diagnostic]:
        """Branch existence diagnostics for one isotropy label, or for every label met by a presweep."""
        state = self._state
        settings = state.settings
        classification = self.classify()
        try:
            transversal: Optional[bool] = check_transversality(state.family, classification=classification)
        except NoClassification:
            transversal = None
        codim = self.codim() if state.family.kind is FieldKind.hamiltonian else None
        subgroups = [self._subgroup(label)] if label is not None else self._presweep_subgroups()
        return [
            branch_existence_diagnostic(
                state.family,
                state.group,
                H,
                state.generator(),
                classification=classification,
                codim=codim,
                transversal=transversal,
                membership_tol=settings.membership_tol,
                membership_samples=settings.membership_samples,
                isotropy_tol=settings.isotropy_tol,
            )
            for H in subgroups
        ]

    def restrict(self, members: Sequence[int]) -> ScenarioPayload:
        """The scenario restricted to the fixed space of the subgroup with these finite members."""
        state = self._state
        scenario = self.scenario
        K = Subgroup(state.group, members)
        restriction = restrict_to_fixed_space(state.family, state.group, K)
        if restriction.unchanged:
            return scenario.to_dict()
        coordinates = [f'w{i + 1}' for i in range(restriction.dim)]
        names = [*coordinates, PARAMETER]
        degree = state.max_degree or scenario.basis_degree or state.settings.invariant_degree
        payload: Dict[str, Any] = {
            'name': f'{scenario.name}/fix-{".".join(map(str, sorted(K.finite_member_indices)))}',
            'description': f'{scenario.name} restricted to the fixed space of {K.label}',
            'coordinates': coordinates,
            'group': restriction.group.to_dict(),
            'basis': {'mode': 'discover', 'max_degree': degree},
            'settings': state.settings.to_dict(),
        }
        if restriction.kind is FieldKind.hamiltonian:
            assert restriction.hamiltonian is not None
            payload['field'] = {
                'kind': 'hamiltonian',
                'hamiltonian_v': restriction.hamiltonian.to_text(names),
                'pairing': [[q, p] for q, p in restriction.pairing or ()],
            }
        else:
            assert restriction.vector_field is not None
            payload['field'] = {'kind': 'general', 'vector_field': restriction.vector_field.to_text(names)}
        simulation = dict(scenario.simulation)
        payload['simulation'] = simulation
        return payload  # type: ignore

    # simulation and self checks

    def simulate(self, *, starts: Optional[int] = None) -> SimulationReport:
        """Integrates the full and reduced flows from random starts and compares them."""
        state = self._state
        options = self.scenario.simulation
        lam, T, dt = float(options['lambda']), float(options['T']), float(options['dt'])
        count = options['starts'] if starts is None else starts
        rng = state.generator()
        basis = state.basis
        family = state.family
        n = basis.ambient_dim
        report = SimulationReport(lam=lam, T=T, dt=dt)
        energy = family.full_hamiltonian().substitute(n, lam) if family.kind is FieldKind.hamiltonian else None
        drifts: List[float] = []
        relation_drifts: List[float] = []
        for k in range(count):
            v0 = options['radius'] * rng.uniform(-1.0, 1.0, n)
            full, reduced, error = simulate_pair(family, state.reduced, basis, v0, lam, T, dt)
            report.starts.append(v0.tolist())
            report.commutation_errors.append(error)
            if energy is not None:
                drifts.append(conservation_drift(full, energy))
            relation_drifts.extend(conservation_drift(reduced, relation) for relation in basis.relations)
            if k == 0:
                report.full, report.reduced = full, reduced
                report.equivariance_error = equivariance_error(family, state.group, v0, lam, T, dt)
        report.energy_drift = max(drifts) if drifts else None
        report.relation_drift = max(relation_drifts) if relation_drifts else None
        _log.info('simulated %d starts; largest commutation error %.3e', count, report.max_commutation_error)
        return report

    def check(self) -> Dict[str, Any]:
        """Self consistency of the reduction; ``ok`` is the conjunction of every check."""
        state = self._state
        basis = state.basis
        G = state.group
        rng = state.generator()
        checks: List[Dict[str, Any]] = []

        def record(name: str, ok: bool, detail: Optional[Dict[str, Any]] = None) -> None:
            if not ok:
                _log.warning('check %r failed: %s', name, detail)
            checks.append({'name': name, 'ok': bool(ok), 'detail': detail or {}})

        try:
            basis.validate(G)
            record('basis', True)
        except NotInvariant as exc:
            record('basis', False, {'error': str(exc)})

        tangency = check_tangency(state.reduced, basis, rng=rng, tol=max(state.settings.tol, 1e-10))
        record('tangency', bool(tangency), tangency.to_dict())

        if state.family.kind is FieldKind.hamiltonian:
            poisson = state.poisson
            record('poisson_antisymmetric', poisson.is_antisymmetric())
            defects = poisson.jacobi_defects()
            record('reduced_jacobi', not defects, {'defects': len(defects)})
            record('g_matches_reduced_field', state.g.components == state.reduced.components)

        v = rng.standard_normal(basis.ambient_dim)
        span = normal_span(basis, G, v)
        record('normal_span', bool(span), span.to_dict())
        constancy = orbit_constancy(basis, G, v)
        record('orbit_constancy', constancy <= 1e-8, {'max_change': finite_or_none(constancy)})

        lam = float(self.scenario.simulation['lambda'])
        v0 = 0.5 * v / float(np.linalg.norm(v))
        _, _, error = simulate_pair(state.family, state.reduced, basis, v0, lam, _CHECK_T, 1e-3)
        record('commutation', error <= 1e-6, {'error': error})

        ok = all(c['ok'] for c in checks)
        _log.info('%d checks on %r, ok=%s', len(checks), self.scenario.name, ok)
        return {'scenario': self.scenario.name, 'ok': ok, 'checks': checks}


__all__ = ('Session',)
