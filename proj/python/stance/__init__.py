"""Stance detection from tweet text and social-network features."""

from ._core import *  # noqa: F401,F403
from ._core import (
    ArgumentError,
    DataError,
    StanceError,
    StanceLabel,
    __doc__,
)

__all__ = [name for name in dir() if not name.startswith("_")]
