from __future__ import annotations

import io
import json

import pytest

from orbitspace.catalog import catalog_entry, catalog_names
from orbitspace.cli import EXIT_FAILURE, EXIT_INVALID, EXIT_OK, main, run_command


def run(command: str, scenario=None, **kwargs):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run_command(command, scenario, stdout=stdout, stderr=stderr, **kwargs)
    return code, stdout.getvalue(), stderr.getvalue()


def test_list():
    code, out, _ = run('list')
    assert code == EXIT_OK
    assert [entry['name'] for entry in json.loads(out)] == catalog_names()


def test_reduce_writes_json():
    code, out, _ = run('reduce', 'z2-pitchfork')
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload['reduced']['tables'] == [['2 * t1']]


def test_unknown_command_and_missing_scenario():
    assert run('explode', 'z2-pitchfork')[0] == EXIT_INVALID
    assert run('reduce')[0] == EXIT_INVALID


def test_invalid_scenario_file(tmp_path):
    path = tmp_path / 'bad.json'
    payload = catalog_entry('z2-pitchfork')
    payload['settings'] = {'tol': 'tiny'}
    path.write_text(json.dumps(payload), encoding='utf-8')
    code, _, err = run('reduce', str(path))
    assert code == EXIT_INVALID
    assert 'settings.tol' in err


def test_malformed_json_file(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('[1, 2', encoding='utf-8')
    assert run('reduce', str(path))[0] == EXIT_INVALID


def test_computation_errors_exit_with_one():
    code, _, err = run('continue', 'z2-pitchfork', start=1.0, stop=1.0)
    assert code == EXIT_FAILURE
    assert 'InvalidSeed' in err


def test_restrict_needs_members():
    assert run('restrict', 'd3-plane')[0] == EXIT_INVALID


def test_same_seed_gives_identical_output():
    first = run('equilibria', 's1-resonance', seed=3)[1]
    second = run('equilibria', 's1-resonance', seed=3)[1]
    assert first == second


def test_continue_writes_json_and_csv(tmp_path):
    code, out, _ = run('continue', 'z2-pitchfork', out=str(tmp_path), step=0.05)
    assert code == EXIT_OK
    assert out == ''
    branch = json.loads((tmp_path / 'branch.json').read_text(encoding='utf-8'))
    assert branch['termination'] == 'possible bifurcation'
    lines = (tmp_path / 'branch.csv').read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'λ,θ_1,v_1,isotropy,residual_reduced,residual_lift,n_H'
    assert len(lines) == len(branch['points']) + 1


def test_simulate_writes_trajectories(tmp_path):
    code, _, _ = run('simulate', 'z2-pitchfork', out=str(tmp_path), starts=1)
    assert code == EXIT_OK
    for name in ('simulation.json', 'trajectory_full.csv', 'trajectory_reduced.csv'):
        assert (tmp_path / name).is_file()
    assert (tmp_path / 'trajectory_full.csv').read_text(encoding='utf-8').startswith('t,x_1\n')


@pytest.mark.slow
def test_check_through_main(tmp_path):
    assert main(['check', 'z2-pitchfork', '--out', str(tmp_path)]) == EXIT_OK
    result = json.loads((tmp_path / 'check.json').read_text(encoding='utf-8'))
    assert result['ok'] is True


def test_main_accepts_the_scenario_flag(tmp_path):
    assert main(['reduce', '--scenario', 'so2-hopf', '--out', str(tmp_path)]) == EXIT_OK
    assert (tmp_path / 'reduced.json').is_file()
