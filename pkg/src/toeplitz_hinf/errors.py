"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """An argument is malformed or outside its admissible set."""


class DomainError(ValueError):
    """A parameter lies outside the region where a formula is defined."""


class UnstableSystemError(ValueError):
    """The system has a pole on or outside the unit circle."""


class ResourceError(RuntimeError):
    """A dense computation was requested above the configured size limit."""


class BoundTooWeakError(RuntimeError):
    """No admissible length satisfies the requested accuracy.

    The best report found before giving up is kept on ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
