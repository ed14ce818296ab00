from ._eclbm import *  # noqa: F401,F403
from ._eclbm import __doc__  # noqa: F401
