"""Exceptions raised by the machine scientist."""


class ScientistError(Exception):
    """Base class for every error raised by this package."""


class UsageError(ScientistError):
    """Bad command-line usage."""


class SeriesError(ScientistError):
    """A time series failed validation.

    `index` is the offending sample index (0 for x0) and `line` the 1-based
    line of the source file, when known.
    """
    def __init__(self, message, index=None, line=None):
        super(SeriesError, self).__init__(message)
        self.index = index
        self.line = line


class ParseError(ScientistError):
    """An s-expression could not be parsed."""
    def __init__(self, message, position, expected):
        super(ParseError, self).__init__(
            "{} at position {} (expected {})".format(message, position, expected)
        )
        self.position = position
        self.expected = expected


class ConfigError(ScientistError):
    """A config file or value is invalid."""
    def __init__(self, message, line=None):
        if line is not None:
            message = "line {}: {}".format(line, message)
        super(ConfigError, self).__init__(message)
        self.line = line


class BundleError(ScientistError):
    """A theory bundle file is missing or corrupt."""
    def __init__(self, message, filename):
        super(BundleError, self).__init__("{}: {}".format(filename, message))
        self.filename = filename


class EnumerationCapError(ScientistError):
    """Too many choice nodes to enumerate every strategy."""
    def __init__(self, choices, cap):
        super(EnumerationCapError, self).__init__(
            "{} choice nodes exceed the enumeration cap of {}; "
            "use monte_carlo mode instead".format(choices, cap)
        )
        self.choices = choices
        self.cap = cap


class UnknownGateError(ScientistError, KeyError):
    """A gate name outside H, X, Y, Z, S, D, T, I."""


class UnresolvedTerminalError(ScientistError):
    """A tree references a terminal the bindings do not define."""
    def __init__(self, name):
        super(UnresolvedTerminalError, self).__init__(
            "unresolved terminal {!r}".format(name)
        )
        self.name = name
