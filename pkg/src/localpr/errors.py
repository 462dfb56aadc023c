"""Exception hierarchy shared by every module in the package."""


class LocalPRError(Exception):
    """Base class for all errors raised by localpr."""


class GraphParseError(LocalPRError):
    """A line of an edge list could not be parsed."""

    def __init__(self, lineno, line, reason="expected '<u> <v>'"):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class GraphBoundsError(LocalPRError):
    """A node id exceeds the declared node count."""


class GraphValidationError(LocalPRError):
    """The graph violates a structural requirement (e.g. dangling nodes)."""

    def __init__(self, message, nodes=()):
        self.nodes = list(nodes)
        super().__init__(message)


class QueryError(LocalPRError):
    """An oracle query was issued with an out-of-range node or edge index."""


class ParameterError(LocalPRError, ValueError):
    """An algorithm received an invalid parameter."""


class GenerationError(LocalPRError, ValueError):
    """Hard-instance parameters violate a construction constraint."""

    def __init__(self, constraint, detail=""):
        self.constraint = constraint
        msg = f"constraint violated: {constraint}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
