from __future__ import annotations

import json

import pytest

from orbitspace import (
    FieldKind,
    ParseError,
    Scenario,
    SolverSettings,
    ValidationError,
    catalog_entry,
    catalog_names,
    load_scenario,
)


def z2_payload(**changes):
    payload = catalog_entry('z2-pitchfork')
    payload.update(changes)
    return payload


@pytest.mark.parametrize('name', catalog_names())
def test_catalog_entries_validate(name: str):
    scenario = load_scenario(name)
    assert scenario.name == name
    assert scenario.kind in (FieldKind.general, FieldKind.hamiltonian)
    assert Scenario.from_dict(scenario.to_dict()).name == name


def test_catalog_entries_are_copies():
    entry = catalog_entry('z2-pitchfork')
    entry['name'] = 'changed'
    assert catalog_entry('z2-pitchfork')['name'] == 'z2-pitchfork'


def test_every_problem_is_reported_with_its_path():
    payload = z2_payload(
        settings={'tol': -1, 'bogus': 1},
        simulation={'dt': 0},
        continuation={'step': 'small'},
    )
    with pytest.raises(ValidationError) as info:
        load_scenario(payload)
    paths = {path for path, _ in info.value.errors}
    assert {'settings.tol', 'settings.bogus', 'simulation.dt', 'continuation.step'} <= paths
    assert all('path' in entry and 'message' in entry for entry in info.value.to_dict())


def test_group_problems():
    with pytest.raises(ValidationError) as info:
        load_scenario(z2_payload(group={'generators': [[[2]]]}))
    assert info.value.errors[0][0] == 'group.generators[0]'
    with pytest.raises(ValidationError):
        load_scenario(z2_payload(group={'generators': [[[1, 0], [0, 1]]]}))


def test_coordinates_are_checked():
    with pytest.raises(ValidationError):
        load_scenario(z2_payload(coordinates=[]))
    with pytest.raises(ValidationError):
        load_scenario(z2_payload(coordinates=['lam']))


def test_field_problems():
    with pytest.raises(ValidationError) as info:
        load_scenario(z2_payload(field={'kind': 'gradient'}))
    assert info.value.errors[0][0] == 'field.kind'
    with pytest.raises(ValidationError):
        load_scenario(z2_payload(field={'kind': 'general', 'coefficients': ['lam', '1']}))
    with pytest.raises(ValidationError):
        load_scenario(z2_payload(equivariants=[['1 * x^2']]))


def test_malformed_polynomials_carry_their_path():
    with pytest.raises(ParseError) as info:
        load_scenario(z2_payload(field={'kind': 'general', 'coefficients': ['lam - ']}))
    assert info.value.path == 'field.coefficients[0]'


def test_load_from_a_file(tmp_path):
    path = tmp_path / 'pitchfork.json'
    path.write_text(json.dumps(z2_payload(name='from-file')), encoding='utf-8')
    assert load_scenario(path).name == 'from-file'
    assert load_scenario(str(path)).name == 'from-file'


def test_broken_json_is_a_parse_error(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"name": ', encoding='utf-8')
    with pytest.raises(ParseError) as info:
        load_scenario(path)
    assert info.value.path == str(path)


def test_unknown_source():
    with pytest.raises(ValidationError):
        load_scenario('no-such-scenario')


def test_settings():
    settings = SolverSettings()
    changed = settings.replace(tol=1e-8, step=None)
    assert changed.tol == 1e-8
    assert changed.step == settings.step
    assert changed != settings
    assert SolverSettings.from_dict(settings.to_dict()) == settings
    with pytest.raises(ValidationError):
        SolverSettings.from_dict({'max_iter': 1.5})


def test_parameter_range_prefers_explicit_values():
    scenario = load_scenario('z2-pitchfork')
    assert scenario.parameter_range() == (1.0, 0.0)
    assert scenario.parameter_range(start=2.0) == (2.0, 0.0)
    assert scenario.parameter_range(stop=-1.0) == (1.0, -1.0)
