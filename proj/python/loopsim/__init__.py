"""Loop-based optical processor simulator: Fock-basis states, sequential
measurement-induced squeezing gates, homodyne tomography, and control
scheduling. Thin wrapper around the compiled _loopsim extension."""

from ._loopsim import *  # noqa: F401,F403
from ._loopsim import __doc__ as _core_doc  # noqa: F401
