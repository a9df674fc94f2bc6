"""Exact and certified computations for spectral self-similar measures."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
