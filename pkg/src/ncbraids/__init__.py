"""Noncrossing partition lattices, dual braid monoid counting, and exact cumulant transforms."""

from .errors import CapExceededError, ConvergenceError, InvalidPartitionError
from .nc_lattice import (
    NcPartition,
    BlockProfile,
    KREWERAS_SQUARE_SHIFT,
    block_profile,
    bottom,
    catalan,
    enumerate_nc,
    is_noncrossing,
    join,
    kreweras,
    leq,
    meet,
    mobius_oracle,
    mobius_to_zero,
    rotate,
    top,
)

__version__ = "0.1.0"
