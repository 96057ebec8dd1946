"""Exception hierarchy shared by the library and the CLI."""


class BirthBurstError(Exception):
    """Base class for all errors raised by birthburst."""


class GraphError(BirthBurstError, ValueError):
    """Invalid mutation of an evolving graph."""


class EstimationError(BirthBurstError, ValueError):
    """An estimator or fit has too little (or degenerate) input."""


class ParseError(BirthBurstError, ValueError):
    """Malformed edge-list input.

    Carries the 1-based line number and the offending line.
    """

    def __init__(self, message, line_no=None, content=None):
        self.line_no = line_no
        self.content = content
        if line_no is not None:
            message = f"line {line_no}: {message}: {content!r}"
        super().__init__(message)
