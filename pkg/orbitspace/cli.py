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

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, TextIO

from .enums import Command, try_enum
from .errors import OrbitSpaceException, ScenarioError, ValidationError
from .output import branch_csv, dumps, trajectory_csv, write_json, write_text
from .session import Session
from .utils import setup_logging

_log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2

# file names written under --out, per command
OUTPUT_NAMES: Dict[Command, str] = {
    Command.reduce: 'reduced.json',
    Command.equilibria: 'equilibria.json',
    Command.continue_: 'branch.json',
    Command.classify: 'classification.json',
    Command.transversality: 'transversality.json',
    Command.codim: 'codim.json',
    Command.simulate: 'simulation.json',
    Command.check: 'check.json',
    Command.diagnose: 'diagnostics.json',
    Command.restrict: 'restricted.json',
    Command.list_: 'catalog.json',
}


def _emit(payload: Any, out: Optional[Path], command: Command, stdout: TextIO) -> None:
    if out is None:
        stdout.write(dumps(payload))
    else:
        write_json(out / OUTPUT_NAMES[command], payload)


def run_command(
    command: str,
    scenario: Optional[str] = None,
    *,
    out: Optional[str] = None,
    seed: int = 0,
    tol: Optional[float] = None,
    max_degree: Optional[int] = None,
    start: Optional[float] = None,
    stop: Optional[float] = None,
    step: Optional[float] = None,
    lam: Optional[float] = None,
    label: Optional[str] = None,
    members: Optional[Sequence[int]] = None,
    starts: Optional[int] = None,
    stdout: TextIO = sys.stdout,
    stderr: TextIO = sys.stderr,
) -> int:
    """Runs one command and writes its artifacts.

    Returns
    -------
    :class:`int`
        ``0`` on success, ``1`` on a computation error or a failed check,
        ``2`` on a validation or parse error.
    """
    kind = try_enum(Command, command)
    if command not in Command:
        stderr.write(f'unknown command {command!r}\n')
        return EXIT_INVALID
    directory = Path(out) if out is not None else None

    if kind is Command.list_:
        _emit(Session.catalog(), directory, kind, stdout)
        return EXIT_OK
    if scenario is None:
        stderr.write('a scenario (catalog name or JSON path) is required\n')
        return EXIT_INVALID

    try:
        overrides: Dict[str, Any] = {}
        if tol is not None:
            overrides['tol'] = tol
        if max_degree is not None:
            overrides['max_degree'] = max_degree
        session = Session(scenario, seed=seed, **overrides)
        _log.info('running %s on %r with seed %d', kind.value, session.scenario.name, seed)
        code = _dispatch(
            session,
            kind,
            directory,
            stdout,
            start=start,
            stop=stop,
            step=step,
            lam=lam,
            label=label,
            members=members,
            starts=starts,
        )
    except ValidationError as exc:
        stderr.write(f'{exc}\n')
        stderr.write(dumps({'errors': exc.to_dict()}))
        return EXIT_INVALID
    except ScenarioError as exc:
        stderr.write(f'{exc}\n')
        return EXIT_INVALID
    except OrbitSpaceException as exc:
        _log.error('%s failed: %s', kind.value, exc)
        stderr.write(f'{exc.__class__.__name__}: {exc}\n')
        return EXIT_FAILURE
    return code


def _dispatch(
    session: Session,
    kind: Command,
    directory: Optional[Path],
    stdout: TextIO,
    *,
    start: Optional[float],
    stop: Optional[float],
    step: Optional[float],
    lam: Optional[float],
    label: Optional[str],
    members: Optional[Sequence[int]],
    starts: Optional[int],
) -> int:
    if kind is Command.reduce:
        _emit(session.reduce(), directory, kind, stdout)
    elif kind is Command.equilibria:
        _emit(session.equilibria(lam), directory, kind, stdout)
    elif kind is Command.continue_:
        branch = session.continue_branch(start=start, stop=stop, step=step)
        _emit(branch, directory, kind, stdout)
        if directory is not None:
            state = session.state
            text = branch_csv(
                branch, size=state.basis.size, dim=state.basis.ambient_dim, torus_rank=state.group.torus_rank
            )
            write_text(directory / 'branch.csv', text)
    elif kind is Command.classify:
        _emit(session.classify(), directory, kind, stdout)
    elif kind is Command.transversality:
        _emit(session.transversality(), directory, kind, stdout)
    elif kind is Command.codim:
        _emit(session.codim(), directory, kind, stdout)
    elif kind is Command.simulate:
        report = session.simulate(starts=starts)
        _emit(report, directory, kind, stdout)
        if directory is not None and report.full is not None and report.reduced is not None:
            write_text(directory / 'trajectory_full.csv', trajectory_csv(report.full, 'x'))
            write_text(directory / 'trajectory_reduced.csv', trajectory_csv(report.reduced, 't'))
    elif kind is Command.check:
        result = session.check()
        _emit(result, directory, kind, stdout)
        if not result['ok']:
            return EXIT_FAILURE
    elif kind is Command.diagnose:
        _emit(session.diagnose(label), directory, kind, stdout)
    elif kind is Command.restrict:
        if not members:
            raise ValidationError([('members', 'expected at least one finite element index')])
        _emit(session.restrict(members), directory, kind, stdout)
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('scenario_name', nargs='?', metavar='SCENARIO', help='Catalog name or scenario JSON path.')
    common.add_argument(
        '--scenario', dest='scenario_flag', metavar='PATH|NAME', help='Catalog name or scenario JSON path.'
    )
    common.add_argument('--out', metavar='DIR', help='Directory for the JSON and CSV artifacts; stdout when omitted.')
    common.add_argument('--seed', type=int, default=0, help='Seed of every randomized search.')
    common.add_argument('--tol', type=float, help='Solver tolerance.')
    common.add_argument('--max-degree', type=int, help='Degree cap of invariant and equivariant discovery.')
    common.add_argument('-v', '--verbose', action='store_true', help='Log at debug level.')

    parser = argparse.ArgumentParser(
        prog='orbitspace', description='Orbit-space reduction of symmetric bifurcation problems.'
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    helps = {
        Command.reduce: 'Invariants, equivariants and the reduced system.',
        Command.equilibria: 'Nondegenerate reduced equilibria found by a presweep.',
        Command.continue_: 'Continue and lift a branch of relative equilibria.',
        Command.classify: 'Nondegeneracy class of the linearization at the origin.',
        Command.transversality: 'Exact transversality test.',
        Command.codim: 'Codimension criterion on the Poisson matrix.',
        Command.simulate: 'Full and reduced flows and their commutation.',
        Command.check: 'Self consistency of the reduction.',
        Command.diagnose: 'Branch existence diagnostics per isotropy type.',
        Command.restrict: 'Scenario restricted to a fixed space.',
        Command.list_: 'List the built-in scenarios.',
    }
    sub: Dict[Command, argparse.ArgumentParser] = {
        command: subparsers.add_parser(command.value, parents=[common], help=text) for command, text in helps.items()
    }
    continuation = sub[Command.continue_]
    continuation.add_argument('--from', dest='start', type=float, help='Start of the parameter range.')
    continuation.add_argument('--to', dest='stop', type=float, help='End of the parameter range.')
    continuation.add_argument('--step', type=float, help='Initial arclength step.')
    sub[Command.equilibria].add_argument('--lambda', dest='lam', type=float, help='Parameter value of the presweep.')
    sub[Command.diagnose].add_argument(
        '--label', help='Isotropy label such as 0.3/t0; every presweep label when omitted.'
    )
    sub[Command.restrict].add_argument(
        '--members', type=int, nargs='+', help='Finite element indices generating the subgroup.'
    )
    sub[Command.simulate].add_argument('--starts', type=int, help='Number of random starts.')
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    setup_logging(level=logging.DEBUG if args.verbose else logging.INFO)
    return run_command(
        args.command,
        args.scenario_flag or args.scenario_name,
        out=args.out,
        seed=args.seed,
        tol=args.tol,
        max_degree=args.max_degree,
        start=getattr(args, 'start', None),
        stop=getattr(args, 'stop', None),
        step=getattr(args, 'step', None),
        lam=getattr(args, 'lam', None),
        label=getattr(args, 'label', None),
        members=getattr(args, 'members', None),
        starts=getattr(args, 'starts', None),
    )


__all__ = (
    'EXIT_OK',
    'EXIT_FAILURE',
    'EXIT_INVALID',
    'OUTPUT_NAMES',
    'run_command',
    'main',
)
