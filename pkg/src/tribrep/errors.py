"""Exception hierarchy shared by every stage of the pipeline."""


class VerificationError(Exception):
    """A stage could not establish the inequality or identity it was asked for."""


class PrecisionError(VerificationError):
    """Working precision was too small to decide a certified comparison."""


class ReductionError(VerificationError):
    """No convergent within the expansion depth satisfies the reduction condition."""


class OutOfDomainError(ValueError):
    """An argument lies outside the range where a closed form is valid."""
