from ._core import *  # noqa: F401,F403
from ._core import NumericalError, StableParams, QuadratureConfig

__all__ = [name for name in dir() if not name.startswith("_")]
