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

import csv
import io
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional, Sequence, Union

import numpy as np

from .continuation import Branch
from .simulate import Trajectory
from .utils import _to_json, finite_or_none, format_float, format_fraction

_log = logging.getLogger(__name__)

PathLike = Union[str, Path]


def jsonable(obj: Any) -> Any:
    """Plain JSON values: arrays become lists, fractions strings, non-finite floats ``None``."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, (float, np.floating)):
        return finite_or_none(float(obj))
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, 'to_dict'):
        return jsonable(obj.to_dict())
    return str(obj)


def dumps(payload: Any) -> str:
    return _to_json(jsonable(payload))


def write_json(path: PathLike, payload: Any) -> Path:
    return write_text(path, dumps(payload))


def _cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, (float, np.floating)):
        return format_float(value) if np.isfinite(value) else ''
    return str(value)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def branch_header(size: int, dim: int, torus_rank: int) -> List[str]:
    return [
        'λ',
        *(f'θ_{i + 1}' for i in range(size)),
        *(f'v_{i + 1}' for i in range(dim)),
        'isotropy',
        *(f'velocity_{i + 1}' for i in range(torus_rank)),
        'residual_reduced',
        'residual_lift',
        'n_H',
    ]


def branch_csv(branch: Branch, *, size: int, dim: int, torus_rank: int) -> str:
    """One row per branch point; cells of a point whose lift failed are empty."""
    rows = []
    for point in branch:
        lift: List[Optional[float]] = list(point.v_lift) if point.v_lift is not None else [None] * dim
        velocity: List[Optional[float]] = (
            list(point.velocity) if point.velocity is not None else [None] * torus_rank
        )
        rows.append(
            [
                point.lam,
                *point.theta,
                *lift,
                None if point.isotropy is None else str(point.isotropy),
                *velocity,
                point.residual_reduced,
                point.residual_lift,
                point.n_H,
            ]
        )
    return _csv_text(branch_header(size, dim, torus_rank), rows)


def trajectory_csv(trajectory: Trajectory, prefix: str) -> str:
    header = ['t', *(f'{prefix}_{i + 1}' for i in range(trajectory.dim))]
    return _csv_text(header, trajectory.rows())


def write_text(path: PathLike, text: str) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open('w', encoding='utf-8', newline='') as fp:
        fp.write(text)
    _log.debug('wrote %s', target)
    return target


__all__ = (
    'jsonable',
    'dumps',
    'write_json',
    'branch_header',
    'branch_csv',
    'trajectory_csv',
    'write_text',
)
