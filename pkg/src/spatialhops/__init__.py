"""Multi-hop spatial reasoning stories with a symbolic answer oracle."""

from .directions import Direction, direction_of, invert, normalize, offset_of
from .solver import Answer, Contradiction, InsufficientInfo, solve
from .walks import Fact, Skeleton

__version__ = "0.1.0"
