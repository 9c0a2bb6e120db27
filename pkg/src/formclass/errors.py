"""Exception types shared across the package."""


class FormclassError(Exception):
    pass


class InvalidDiscriminantError(FormclassError, ValueError):
    pass


class DegenerateLatticeError(FormclassError, ValueError):
    pass


class GroupSpecError(FormclassError, ValueError):
    pass


class NoWitnessError(FormclassError, ValueError):
    pass


class OracleBoundError(FormclassError, RuntimeError):
    """Raised when a closure-based oracle did not close at the requested norm bound."""


class TheoremViolation(FormclassError, AssertionError):
    """An identity that must hold for every input failed; indicates a bug."""
