"""Exception hierarchy shared by the verification packages."""


class QncError(Exception):
    """Base class for all verification errors."""


class ResourceLimitError(QncError):
    """A symbolic product grew past the configured monomial budget."""


class WordError(QncError):
    """A letter word or W_q word could not be parsed or evaluated."""


class NumericalError(QncError):
    """A numeric invariant that must hold exactly was violated."""


class CertificationError(QncError):
    """A certified numeric value could not be certified.

    Raised when the tail ratio test fails, when the error bound exceeds the
    configured threshold, or when rounding to an integer is ambiguous.
    """


class PairingMismatchError(QncError):
    """A certified pairing matrix disagrees with the closed form."""


class UsageError(QncError):
    """Invalid run configuration supplied by the user."""
