"""Exception types raised across the package."""


class GraphIwasawaError(Exception):
    """Base class for all errors raised by graph_iwasawa."""


class NotConnected(GraphIwasawaError):
    def __init__(self, message="graph is not connected", components=None):
        super().__init__(message)
        self.components = components


class NotACover(GraphIwasawaError):
    pass


class TooLarge(GraphIwasawaError):
    """Raised when exhaustive enumeration would exceed the configured edge cap."""


class CapExceeded(GraphIwasawaError):
    """Raised when a matrix would exceed the configured dimension cap."""


class InfiniteGroup(GraphIwasawaError):
    pass


class InsufficientLevels(GraphIwasawaError):
    pass


class Disconnected(GraphIwasawaError):
    """Raised when a tower specification yields a disconnected level."""
