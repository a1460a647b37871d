"""Numerical verification of warped-product immersion inequalities."""

from ._warpcheck import *  # noqa: F401,F403
from ._warpcheck import __version__, WarpcheckError  # noqa: F401
