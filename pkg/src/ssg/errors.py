"""Exception hierarchy shared by the ssg modules."""


class SSGError(Exception):
    """Base class for every error raised by this package."""


class PresentationError(SSGError, ValueError):
    """An input presentation failed validation."""


class DslSyntaxError(PresentationError):
    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class NotAPermutation(PresentationError):
    def __init__(self, state, images):
        self.state = state
        self.images = tuple(images)
        super().__init__(f"state {state!r} does not permute the alphabet: images {list(self.images)}")


class DanglingRestriction(PresentationError):
    def __init__(self, state, target):
        self.state = state
        self.target = target
        super().__init__(f"state {state!r} restricts to undeclared state {target!r}")


class NoIdentity(PresentationError):
    pass


class DuplicateBisimilarStates(PresentationError):
    def __init__(self, first, second):
        self.first = first
        self.second = second
        super().__init__(f"states {first!r} and {second!r} define the same transformation")


class NotContractedWithinBound(SSGError):
    def __init__(self, depth_bound, frontier, capped=False):
        self.depth_bound = depth_bound
        self.frontier = frontier
        self.capped = capped
        if capped:
            msg = f"nucleus closure stopped at the product-automaton size cap ({frontier} elements so far)"
        else:
            msg = f"nucleus closure did not stabilize within {depth_bound} rounds ({frontier} elements so far)"
        super().__init__(msg)


class CapacityExceeded(SSGError):
    def __init__(self, size, capacity):
        self.size = size
        self.capacity = capacity
        super().__init__(f"subset digraph needs {size} vertices, capacity is {capacity}")


class NotClosed(SSGError):
    pass


class InternalInconsistency(SSGError):
    """A structural fact that must hold for a genuine nucleus did not."""


class NotPrime(SSGError, ValueError):
    pass


class MorphismViolation(InternalInconsistency):
    pass
