"""Volume products, polar bodies, discrete Legendre transforms and functional
Santalo stability checks. Reports are plain dicts with the CLI's JSON keys."""

from ._santalo import *  # noqa: F401,F403
from ._santalo import __version__  # noqa: F401
