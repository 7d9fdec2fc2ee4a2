"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class MisuseError(ValueError):
    """An operation was called on data it is not meant for (e.g. wrong fixed point)."""


class SingularPointError(ValueError):
    """A requested evaluation hits a zero of the factor being divided out."""


class IntegrationError(RuntimeError):
    """The ODE integrator could not advance without leaving the invariant set."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class InversionError(RuntimeError):
    """Newton inversion of a conformal map stagnated."""


class SlitAmbiguityError(ValueError):
    """A point on the two-sided slit was passed without a side flag."""


class InconsistencyError(RuntimeError):
    """A cross-check between two independently computed quantities failed."""


class ClassificationInstabilityError(InconsistencyError):
    """Boundary-point classification changed between probe times, which the
    fixed-point persistence of semigroup elements forbids."""


class ModelSpecError(ValueError):
    """A model-spec document failed to parse; carries a JSON-pointer path."""

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        super().__init__(f"{pointer}: {message}")
