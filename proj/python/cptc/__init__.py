from ._cptc import *  # noqa: F401,F403
from ._cptc import __doc__  # noqa: F401
