"""Exception hierarchy shared by all fibsurf modules."""


class FibsurfError(Exception):
    """Base class for all errors raised by this package."""


class LatticeError(FibsurfError):
    """Structurally broken lattice data (duplicate ids, asymmetry, ...)."""


class UnknownClassError(LatticeError):
    """A divisor references a class id that is not in the lattice."""


class NonIntegralGenusError(LatticeError):
    """Adjunction produced a non-integer genus: inconsistent pairing data."""


class NegativeGenusError(LatticeError):
    """Adjunction produced a negative genus: inconsistent pairing data."""


class ParityViolationError(LatticeError):
    """A Riemann-Roch style quantity failed its integrality constraint."""


class InvalidModelError(FibsurfError):
    """An operation that requires a valid fibration model got an invalid one."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid model: " + "; ".join(self.violations))


class DisconnectedFiberError(FibsurfError):
    """A fiber's dual graph is disconnected."""


class GenusTooSmallError(FibsurfError):
    """The fiber genus is below the hypothesis of the requested predicate."""


class InconsistentInputError(FibsurfError):
    """Supplied data contradicts itself (e.g. eigenvalue floor vs multiplicities)."""


class ZeroPairingHorizontalError(FibsurfError):
    """A horizontal class pairs to zero (or negatively) with the foliation canonical."""


class CoverDegreeError(FibsurfError):
    """N is not an admissible cyclic base change degree for the model."""


class SweepError(FibsurfError):
    """Polynomial sweep input cannot determine the coefficients."""


class InfeasibleSpecError(FibsurfError):
    """The random model spec admits no integral solution within the retry budget."""


class SchemaError(FibsurfError):
    """A structured document violates the file schema. Carries field context."""

    def __init__(self, field, message):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class DescriptorError(FibsurfError):
    """A pencil descriptor is internally inconsistent."""
