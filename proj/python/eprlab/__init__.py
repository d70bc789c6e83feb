"""Numerical laboratory for position/momentum-entangled particle pairs."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
