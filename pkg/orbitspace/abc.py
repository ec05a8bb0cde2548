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

from abc import ABC, abstractmethod
from typing import Any, Dict, Protocol, Sequence, TYPE_CHECKING, runtime_checkable

import numpy as np

from .errors import DimensionMismatch

if TYPE_CHECKING:
    from .poly import PolyMap


@runtime_checkable
class VectorField(Protocol):
    """A protocol for anything the integrator can step.

    Attributes
    -----------
    dim: :class:`int`
        Dimension of the state vectors.
    """

    dim: int

    def __call__(self, x: np.ndarray) -> np.ndarray: ...


class ReducedSystem(ABC):
    """Dynamics on the orbit space, ``theta' = components(theta, lam)``.

    Subclasses expose their symbolic right-hand side as a
    :class:`~orbitspace.poly.PolyMap` in ``l + 1`` variables, the parameter
    ``lam`` last.
    """

    __slots__ = ()

    @property
    @abstractmethod
    def components(self) -> PolyMap: ...

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]: ...

    @property
    def size(self) -> int:
        """:class:`int`: The number ``l`` of orbit-space coordinates."""
        return len(self.components)

    def evaluate(self, theta: Sequence[float], lam: float) -> np.ndarray:
        """Floating evaluation at ``(theta, lam)``.

        Raises
        ------
        DimensionMismatch
            ``theta`` does not have ``l`` entries.
        """
        if len(theta) != self.size:
            raise DimensionMismatch(self.size, len(theta))
        point = np.append(np.asarray(theta, dtype=float), float(lam))
        return self.components.compile()(point)


__all__ = (
    'VectorField',
    'ReducedSystem',
)
