"""Exception types shared across the package."""


class BiasedGraphError(Exception):
    """Base class for all package-specific errors."""


class UnknownEdgeError(BiasedGraphError):
    """An edge id that does not exist in the graph."""


class ResourceLimitError(BiasedGraphError):
    """A configured enumeration or search cap was exceeded."""


class InvalidWalkError(BiasedGraphError):
    """A step sequence that is not a closed walk of the host graph."""


class InvalidEmbeddingError(BiasedGraphError):
    """A rotation system that does not describe a plane graph."""


class HostMismatchError(BiasedGraphError):
    """An object was used against a graph it does not belong to."""


class DisconnectedGraphError(BiasedGraphError):
    """An operation that requires a connected graph."""


class NotSpanningTreeError(BiasedGraphError):
    """An edge set that is not a spanning tree of the host graph."""


class UnbalancedLoopContractionError(BiasedGraphError):
    """Contraction of an unbalanced loop is undefined here."""


class InvalidConstructionError(BiasedGraphError):
    """A coloured plane graph violating the construction properties."""


class UnsupportedParametersError(BiasedGraphError):
    """Parameters outside the range a generator supports."""


class ReroutingError(BiasedGraphError):
    """Base class for rerouting certificate defects."""


class SubwalkNotPresentError(ReroutingError):
    """The replaced range does not name a subwalk of the current walk."""


class SubwalkNotPathError(ReroutingError):
    """The replaced subwalk is not a path inside the rerouting cycle."""


class ArcMismatchError(ReroutingError):
    """The stored replacement is not the complementary arc of the cycle."""


class NoShellingFoundError(BiasedGraphError):
    """Backtracking exhausted every face removal order."""


class ParseError(BiasedGraphError):
    """A malformed line in one of the text formats."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
