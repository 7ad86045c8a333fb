"""Exception hierarchy shared by all modules."""


class DgdeformError(Exception):
    """Base class for all library errors."""


class WindowTooNarrow(DgdeformError):
    """A cohomology answer would depend on data outside the degree window."""


class UnknownGenerator(DgdeformError):
    pass


class DegreeCapExceeded(DgdeformError):
    """An operation produced polynomial degree beyond the algebra cap."""


class DegreeMismatch(DgdeformError):
    pass


class IdentityViolation(DgdeformError):
    """A Cartan-calculus identity failed; carries the offending witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class AxiomViolation(DgdeformError):
    """A DGLA axiom failed on a witness tuple."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAMorphism(DgdeformError):
    pass


class NotInjective(DgdeformError):
    pass


class HypothesisFails(DgdeformError):
    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class NotMC(DgdeformError):
    pass


class ResidualNonzero(DgdeformError):
    pass


class NotCartan(DgdeformError):
    pass


class ConditionViolation(DgdeformError):
    """A two-term morphism equation failed; carries equation index and witness."""

    def __init__(self, message, equation=None, witness=None):
        super().__init__(message)
        self.equation = equation
        self.witness = witness


class EllNotInN(DgdeformError):
    pass


class ZeroDivisorDenominator(DgdeformError):
    pass


class NotRegularSequence(DgdeformError):
    pass


class RadicalWitnessMissing(DgdeformError):
    pass


class NotQuasiIso(DgdeformError):
    pass


class NotClosed(DgdeformError):
    pass


class NotSemifree(DgdeformError):
    pass


class CompatibilityViolation(DgdeformError):
    """A Thom-Whitney compatibility equation failed at some level/face."""

    def __init__(self, message, level=None, face=None):
        super().__init__(message)
        self.level = level
        self.face = face


class CofaceIncompatibility(DgdeformError):
    pass


class EqualizerFails(DgdeformError):
    pass


class CocycleViolation(DgdeformError):
    pass


class InclusionFails(DgdeformError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DiagramMismatch(DgdeformError):
    pass


class NonzeroImage(DgdeformError):
    """A pushed obstruction came out nonzero; contradicts unobstructedness."""


class ScenarioError(DgdeformError):
    """Scenario file is malformed or internally inconsistent."""
