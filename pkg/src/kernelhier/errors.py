"""Exception hierarchy.

Every error raised on a bad input or a violated structural expectation derives
from :class:`HierarchyError`, so the CLI can map them to a single exit code.
"""


class HierarchyError(Exception):
    pass


class OutOfRange(HierarchyError, ValueError):
    pass


class LengthMismatch(HierarchyError, ValueError):
    pass


class SizeMismatch(HierarchyError, ValueError):
    pass


class PositionOutOfRange(HierarchyError, IndexError):
    pass


class LevelOutOfRange(HierarchyError, ValueError):
    pass


class DimensionMismatch(HierarchyError, ValueError):
    pass


class NotCompatible(HierarchyError):
    pass


class ExplosionGuard(HierarchyError):
    def __init__(self, cap):
        super().__init__(f"semigroup exceeds the size cap of {cap} elements")
        self.cap = cap


class NotInKernel(HierarchyError):
    pass


class SandwichEscape(HierarchyError):
    pass


class EmptyCell(HierarchyError):
    pass


class SingularSystem(HierarchyError):
    pass


class NotProductForm(HierarchyError):
    pass


class NotSubstochastic(HierarchyError, ValueError):
    pass


class NearSingular(HierarchyError):
    pass


class NotIrreducible(HierarchyError):
    pass


class NotAperiodic(HierarchyError):
    pass


class NotConstant(HierarchyError):
    pass


class NoLoopAtVertexOne(HierarchyError):
    pass


class MultipleLoops(HierarchyError):
    pass


class HasLoop(HierarchyError):
    pass


class NotRankNMinusOne(HierarchyError):
    pass


class RankMismatch(HierarchyError):
    pass
