"""Data-driven discovery of the source term of a 1-D subdiffusion equation.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from subdiff._core import *  # noqa: F401,F403
from subdiff._core import __version__  # noqa: F401
