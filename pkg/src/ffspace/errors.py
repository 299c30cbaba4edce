"""Exception hierarchy shared by all ffspace modules."""


class FFSpaceError(Exception):
    """Base class for every error raised by this package."""


class UnsupportedOrderError(FFSpaceError):
    """A derivative of higher order than the jet layer supports was requested."""


class DomainError(FFSpaceError):
    """Evaluation was attempted outside the admissible domain."""


class SingularDirectionError(DomainError):
    """Tangent vector too close to the axis direction (q -> 0), where
    tensor-level objects diverge like 1/q."""


class SectorError(DomainError):
    """Operation restricted to a tangent-cone sector received a vector
    from a different sector."""


class IsotropicBoundaryError(DomainError):
    """Indefinite-signature metric function evaluated on (or too close to)
    an isotropic cone where it degenerates."""


class FormulaDomainError(DomainError):
    """An inverse-trigonometric argument fell outside its legal range by
    more than rounding slack."""


class DefinitionError(FFSpaceError):
    """A space definition violates one of its structural invariants
    (signature, unit axis norm, charge range, ...)."""


class ParseError(FFSpaceError):
    """Expression source text could not be parsed.  Carries a byte offset."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvaluationError(FFSpaceError):
    """A parsed expression hit a runtime domain violation (division by
    zero, log of a non-positive value, ...)."""


class PreconditionError(FFSpaceError):
    """An operation's precondition does not hold for the given space or
    point (e.g. non-constant charge where constancy is required)."""


class RouteUnavailableError(PreconditionError):
    """A closed-form evaluation route exists only under conditions the
    given space does not satisfy."""


class InconsistencyError(FFSpaceError):
    """Two supposedly equivalent verdicts or routes disagree; indicates an
    implementation bug rather than a property of the input."""


class ConvergenceError(FFSpaceError):
    """An iterative procedure failed to reach its residual target."""
