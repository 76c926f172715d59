"""Entanglement potentials of single-photon states."""

from ._eplab import *  # noqa: F401,F403
from ._eplab import __doc__  # noqa: F401
