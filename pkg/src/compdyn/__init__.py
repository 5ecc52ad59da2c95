"""Transitivity and mixing certificates for composition operators on atomic
measure spaces."""

from .dynamics import EXIT, AtomMap
from .measure import AtomicSpace, MeasurableSet, SimpleFunction

__all__ = ["EXIT", "AtomMap", "AtomicSpace", "MeasurableSet", "SimpleFunction"]
__version__ = "0.1.0"
