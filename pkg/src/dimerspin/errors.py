"""Package exception types."""


class DimerspinError(Exception):
    """Base class for errors raised by this package."""


class NumericalInvariantError(DimerspinError):
    """A numerical sanity check failed (asymmetric matrix, negative
    probability beyond tolerance, non-unit trace, ...).

    These indicate a bug or an ill-conditioned input rather than a user
    mistake, so the command-line driver reports them with a distinct
    exit code.
    """
