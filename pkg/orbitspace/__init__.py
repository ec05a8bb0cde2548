"""
Orbit-space reduction toolkit
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Symmetric vector fields reduced to the orbit space, with bifurcation
diagnostics on top.

:copyright: (c) 2024-present MCausc78
:license: MIT, see LICENSE for more details.

"""

__title__ = 'orbitspace'
__author__ = 'MCausc78'
__license__ = 'MIT'
__copyright__ = 'Copyright 2024-present MCausc78'
__version__ = '0.1.0a'

__path__ = __import__('pkgutil').extend_path(__path__, __name__)

import logging
from typing import NamedTuple, Literal

from . import (
    abc as abc,
    linalg as linalg,
    utils as utils,
)
from .bifurcation import *
from .catalog import *
from .continuation import *
from .enums import *
from .errors import *
from .groups import *
from .invariants import *
from .mixins import *
from .poly import *
from .reduction import *
from .scenario import *
from .session import *
from .simulate import *
from .state import *


class VersionInfo(NamedTuple):
    major: int
    minor: int
    micro: int
    releaselevel: Literal['alpha', 'beta', 'candidate', 'final']
    serial: int


version_info: VersionInfo = VersionInfo(major=0, minor=1, micro=0, releaselevel='alpha', serial=0)

logging.getLogger(__name__).addHandler(logging.NullHandler())

del logging, NamedTuple, Literal, VersionInfo
