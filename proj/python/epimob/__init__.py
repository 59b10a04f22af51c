"""Regional epidemic analytics toolkit.

Thin re-export of the compiled extension; see the project README for the
CLI that drives the same operations end to end.
"""

from ._epimob import *  # noqa: F401,F403
from ._epimob import __version__  # noqa: F401
