"""Exception types shared by all modules."""


class LeafRelError(Exception):
    """Base class for every error raised by leafrel."""


class UnknownLabel(LeafRelError, KeyError):
    def __init__(self, label):
        super().__init__(label)
        self.label = label

    def __str__(self):
        return f"unknown label {self.label!r}"


class TooSmall(LeafRelError, ValueError):
    pass


class BoundExceeded(LeafRelError, ValueError):
    pass


class NotPrefixFree(LeafRelError, ValueError):
    pass


class NotBinaryBranching(LeafRelError, ValueError):
    pass


class NewickSyntaxError(LeafRelError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NonBinary(LeafRelError, ValueError):
    pass


class DuplicateLabel(LeafRelError, ValueError):
    pass


class InvalidStructure(LeafRelError, ValueError):
    pass


class NoSplit(InvalidStructure):
    pass


class Inconsistent(LeafRelError):
    """No rooted binary tree satisfies the given constraints."""


class NotAmalgamable(LeafRelError, ValueError):
    pass


class InconsistentType(LeafRelError, ValueError):
    pass


class NotInjective(LeafRelError, ValueError):
    pass


class NotQPreserving(LeafRelError, ValueError):
    pass


class PreconditionFailed(LeafRelError, ValueError):
    pass


class ConstructionFailed(LeafRelError):
    pass


class MalformedInstance(LeafRelError, ValueError):
    pass


class BadParameters(LeafRelError, ValueError):
    pass
