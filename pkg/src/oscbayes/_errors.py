"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid parameters or structural constants."""


class DomainError(ValueError):
    """An evaluation point lies outside the support of a density."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge within its budget.

    ``diagnostics`` carries whatever partial state the routine had
    (panel counts, error estimates, last iterate) so callers can report it.
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class DegeneratePosteriorError(NumericalError):
    """Every quadrature node has zero likelihood."""


class TailMassError(NumericalError):
    """Prior mass beyond ``theta_max`` is not negligible relative to the evidence."""
