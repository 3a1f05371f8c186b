"""Spectral sum rules for inhomogeneous strings and membranes."""

from ._sumrules import *  # noqa: F401,F403
from ._sumrules import __doc__  # noqa: F401

__version__ = "0.1.0"
