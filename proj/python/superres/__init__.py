"""Monte Carlo simulation of super-resolved parity and zero-photon phase measurements."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
