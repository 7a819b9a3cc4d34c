"""Exception hierarchy shared by the library and the CLI."""


class GpsTrackError(Exception):
    """Base class for all errors raised by gpstrack."""


class ValidationError(GpsTrackError, ValueError):
    """A value violates a documented invariant."""


class ParseError(ValidationError):
    """A scenario file could not be parsed.

    ``field`` names the offending dotted key when known, ``line`` the 1-based
    line number when the underlying parser reports one.
    """

    def __init__(self, message, *, field=None, line=None, path=None):
        self.field = field
        self.line = line
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = ": ".join([", ".join(where)]) + ": " if where else ""
        super().__init__(prefix + message)


class UnreachableError(GpsTrackError, ValueError):
    """The requested pose lies outside the arm's workspace."""

    def __init__(self, message, *, index=None, pose=None):
        self.index = index
        self.pose = pose
        super().__init__(message)


class DegenerateError(GpsTrackError, ValueError):
    """Inverse kinematics is undefined (wrist center on the base with l1 == l2)."""


class LengthMismatchError(ValidationError):
    pass
