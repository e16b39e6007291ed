"""Shaping codecs for SLC/MLC flash and their error-propagation analysis."""

from ._shapecode import *  # noqa: F401,F403
from ._shapecode import __version__  # noqa: F401
