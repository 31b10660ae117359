"""Exception hierarchy shared across the package.

Everything derives from :class:`GraphsetError` so callers can catch the
package as a whole; the CLI maps subtrees onto exit codes (config /
ingestion / numeric).
"""


class GraphsetError(Exception):
    """Base class for all errors raised by graphset."""


class ParameterError(GraphsetError, ValueError):
    """A caller-supplied parameter is out of range or inconsistent."""


class ConfigError(GraphsetError, ValueError):
    """A run configuration failed validation."""


class IngestError(GraphsetError):
    """A dataset could not be loaded."""


class ParseError(IngestError):
    """A data file contained a malformed line."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class FormatError(IngestError):
    """A dataset violated its format contract (beyond a single bad line)."""


class EmptyGraphError(GraphsetError):
    """An operation that needs at least one node received an empty graph."""


class DegenerateGraphError(GraphsetError):
    """A feature is undefined on this graph (e.g. no edges)."""


class GenerationError(GraphsetError):
    """The synthetic generator was given infeasible parameters."""


class ShapeError(GraphsetError, ValueError):
    """Array shapes or row orders do not line up."""


class ConvergenceError(GraphsetError):
    """An iterative numeric routine failed to converge."""


class SolverError(GraphsetError):
    """The transport solver failed on an instance."""


class PipelineError(GraphsetError):
    """A multi-stage computation received inconsistent intermediate data."""
