"""Two-way relay network coding toolkit.

Rate regions for the multi-way relay network with correlated sources,
LDPC code construction (PEG, multi-edge), Slepian-Wolf syndrome coding,
sum-product decoding (separate and joint), multi-edge density evolution,
and the finite-length Monte Carlo pipeline.
"""

from relaynet._core import *  # noqa: F401,F403
from relaynet._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
