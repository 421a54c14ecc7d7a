"""Exception hierarchy shared by all modules."""


class LandauerLabError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(LandauerLabError):
    """Operand dimensions are incompatible or exceed the configured maximum."""


class ShapeError(LandauerLabError):
    """A matrix does not have the required structure (e.g. not Hermitian)."""


class ConfigError(LandauerLabError):
    """A coupling / run configuration violates a precondition."""


class StateError(LandauerLabError):
    """A state parameterization is outside its validity range."""


class TruncationError(LandauerLabError):
    """The Fock-space truncation policy is violated."""


class NumericalError(LandauerLabError):
    """A numerical guarantee (convergence, discriminant sign, ...) failed."""


class PerturbationBreakdownError(LandauerLabError):
    """The assembled perturbative state is unphysical beyond tolerance."""


class ScenarioError(LandauerLabError):
    """A scenario document failed to parse or validate.

    ``errors`` collects every field-level problem found so a bad document is
    reported in one pass.
    """

    def __init__(self, message: str, errors: list[str] | None = None):
        self.errors = list(errors or [])
        if self.errors:
            message = message + "\n  - " + "\n  - ".join(self.errors)
        super().__init__(message)
