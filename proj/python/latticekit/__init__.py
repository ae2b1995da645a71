"""Certified computations on concrete vector lattices.

Elements are plain lists (floats, or complex numbers for complex lattices).
"""

from ._latticekit import *  # noqa: F401,F403
from ._latticekit import FactorizationError, LatticeError, MultilinearMap, experiment_ids

__all__ = [name for name in dir() if not name.startswith("_")]
