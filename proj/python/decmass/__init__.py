from ._decmass import *  # noqa: F401,F403
from ._decmass import __version__  # noqa: F401
