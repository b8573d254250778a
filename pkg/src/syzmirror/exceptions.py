"""Exception types raised across the package."""


class SYZError(Exception):
    """Base class for all package errors."""


class ParseError(SYZError, ValueError):
    """Malformed polynomial or input text.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DimensionMismatch(SYZError, ValueError):
    pass


class MissingLiftingError(SYZError, ValueError):
    pass


class NonSimplicialCell(SYZError, ValueError):
    def __init__(self, cell):
        self.cell = cell
        super().__init__(f"cell is not a simplex: {list(cell)}")


class NonSmoothCone(SYZError, ValueError):
    pass


class EqualModulusRoots(SYZError, ValueError):
    pass


class OffHypersurface(SYZError, ValueError):
    pass


class ZeroCoordinate(SYZError, ValueError):
    pass


class SingularFiberPoint(SYZError, ValueError):
    """The fibration differential drops rank at the requested point."""


class UnresolvedComponents(SYZError, RuntimeError):
    pass


class NonAdjacentLabels(SYZError, ValueError):
    pass


class ChartMismatch(SYZError, ValueError):
    pass


class NonClosedLoop(SYZError, ValueError):
    pass


class DegeneratePathError(SYZError, ValueError):
    """A path touches a cut or a segment tangentially, or hits an endpoint."""


class SectionValidationError(SYZError, ValueError):
    def __init__(self, message, location=None):
        self.location = location
        super().__init__(message if location is None else f"{message} at {location}")


class InternalInconsistency(SYZError, RuntimeError):
    pass
