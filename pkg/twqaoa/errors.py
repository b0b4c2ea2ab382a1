"""
Exception hierarchy for the twisted-QAOA toolkit.

Every error raised on purpose by the library derives from TwistError so the
CLI can map domain failures to exit code 1 with a single except clause.
"""


class TwistError(Exception):
    """Base exception for all twisted-QAOA errors."""
    pass


class GraphError(TwistError):
    """Invalid graph input (self-loops, duplicate edges, bad vertex indices, bad files)."""
    pass


class NotCubicError(GraphError):
    """A 3-regular graph was required."""
    pass


class TriangleError(GraphError):
    """A triangle-free graph was required."""
    pass


class NoMatchError(GraphError):
    """Environment not isomorphic to any catalog entry."""
    pass


class CutError(TwistError):
    """Cut does not fit the graph or cannot be parsed."""
    pass


class PostprocessError(TwistError):
    """Post-processing invariant violated (signals a logic error)."""
    pass


class SimulationError(TwistError):
    """Statevector or tree simulation cannot be carried out."""
    pass


class TreeError(SimulationError):
    """Tree evaluation called on a non-tree or with misplaced supports."""
    pass


class CertificationError(TwistError):
    """Certification cannot be attempted (missing angles, unsupported level)."""
    pass


class OptimizationError(TwistError):
    """Angle optimization failed."""
    pass
