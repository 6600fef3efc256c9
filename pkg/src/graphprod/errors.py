class GraphProdError(Exception):
    pass


class DomainError(GraphProdError, ValueError):
    """An input lies outside the domain of the operation."""


class ResourceError(GraphProdError):
    """A configured enumeration budget was exceeded."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class OracleDisagreement(GraphProdError, AssertionError):
    """A fast algorithm and its exhaustive guard returned different answers."""
