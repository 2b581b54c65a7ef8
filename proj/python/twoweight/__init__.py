"""Two-weight Hilbert transform diagnostics.

Thin wrapper over the compiled extension module.
"""

from ._twoweight import *  # noqa: F401,F403
from ._twoweight import __doc__  # noqa: F401
