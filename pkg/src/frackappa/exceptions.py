"""Exception types shared across the solver stack."""


class ConfigurationError(ValueError):
    """A run configuration or grid/potential combination is invalid.

    Carries a list of individual messages so callers can report every
    violation at once.
    """

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class CalibrationError(RuntimeError):
    """Offset calibration failed to converge; carries the last residual."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class NumericError(RuntimeError):
    """A numerical routine (eigensolver, polynomial fit) failed or is
    untrustworthy at the requested settings."""
