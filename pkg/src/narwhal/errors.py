"""Exception hierarchy shared across the engine."""


class NarwhalError(Exception):
    """Base class for user-facing engine errors."""


class CyclicSubsorts(NarwhalError):
    pass


class DuplicateOpConflict(NarwhalError):
    pass


class BadAxiomAttribute(NarwhalError):
    pass


class SortError(NarwhalError):
    pass


class NoLeastSort(SortError):
    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class SortViolation(NarwhalError):
    pass


class SyntaxError_(NarwhalError):
    """Surface-syntax error with source coordinates."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)
        self.line = line
        self.col = col


class AmbiguousParse(NarwhalError):
    def __init__(self, message, alternatives=()):
        super().__init__(message)
        self.alternatives = tuple(alternatives)


class UnknownSortOrOp(NarwhalError):
    pass


class UnsupportedFeature(NarwhalError):
    pass


class UnsupportedAxCombination(NarwhalError):
    pass


class ReductionBudgetExceeded(NarwhalError):
    pass


class NameClash(NarwhalError):
    pass


class SessionError(NarwhalError):
    pass


class UnknownNode(SessionError):
    pass


class UnknownEdge(SessionError):
    pass


class AlreadyExpanded(SessionError):
    pass


class DepthOutOfRange(SessionError):
    pass
