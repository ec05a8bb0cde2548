from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest

from orbitspace import Trajectory
from orbitspace.output import branch_header, dumps, jsonable, trajectory_csv, write_json
from orbitspace.utils import MISSING, as_fraction, finite_or_none, format_float, format_fraction


def test_branch_header_for_a_torus():
    assert branch_header(2, 2, 1) == [
        'λ',
        'θ_1',
        'θ_2',
        'v_1',
        'v_2',
        'isotropy',
        'velocity_1',
        'residual_reduced',
        'residual_lift',
        'n_H',
    ]


def test_jsonable():
    payload = {
        1: np.array([1.5, np.inf]),
        'f': Fraction(-3, 4),
        'b': np.bool_(True),
        'n': np.int64(7),
        't': (None, 'x'),
    }
    assert jsonable(payload) == {'1': [1.5, None], 'f': '-3/4', 'b': True, 'n': 7, 't': [None, 'x']}


def test_dumps_is_sorted_and_newline_terminated():
    text = dumps({'b': 1, 'a': float('nan')})
    assert text.endswith('\n')
    assert json.loads(text) == {'a': None, 'b': 1}
    assert text.index('"a"') < text.index('"b"')


def test_write_json_creates_directories(tmp_path):
    path = write_json(tmp_path / 'nested' / 'out.json', {'value': 0.1})
    assert json.loads(path.read_text(encoding='utf-8')) == {'value': 0.1}


def test_trajectory_csv():
    trajectory = Trajectory(np.array([0.0, 0.5]), np.array([[1.0, 2.0], [0.1, np.nan]]))
    lines = trajectory_csv(trajectory, 't').splitlines()
    assert lines == ['t,t_1,t_2', '0,1,2', '0.5,0.10000000000000001,']


def test_float_formatting():
    assert format_float(0.1) == '0.10000000000000001'
    assert format_float(2.0) == '2'
    assert finite_or_none(float('inf')) is None
    assert finite_or_none(None) is None
    assert finite_or_none(3) == 3.0


def test_fractions():
    assert as_fraction('3/4') == Fraction(3, 4)
    assert as_fraction(' -0.5 ') == Fraction(-1, 2)
    assert as_fraction(0.25) == Fraction(1, 4)
    assert as_fraction(2) == 2
    assert format_fraction(Fraction(6, 3)) == '2'
    assert format_fraction(Fraction(-1, 3)) == '-1/3'


@pytest.mark.parametrize('value', [True, float('nan'), float('inf'), '1/0', 'x', None, [1]])
def test_as_fraction_rejects(value):
    with pytest.raises(ValueError):
        as_fraction(value)


def test_missing_sentinel():
    assert not MISSING
    assert MISSING != MISSING
    assert repr(MISSING) == '...'
