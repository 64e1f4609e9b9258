"""Exception types raised across the package."""


class GraphError(ValueError):
    """Malformed graph input or a graph that violates a precondition."""


class SimulationError(RuntimeError):
    """The message-passing runtime was misused or failed to quiesce."""


class ProtocolError(RuntimeError):
    """A node detected state that the protocol should never produce."""
