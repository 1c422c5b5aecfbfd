"""Exception hierarchy.

``DomainError`` covers bad input (CLI exit code 1); ``IdentityViolation``
means an algebraic identity that must hold by construction failed (exit
code 2).
"""


class JetStrataError(Exception):
    pass


class DomainError(JetStrataError, ValueError):
    pass


class DimensionMismatch(DomainError):
    pass


class ChartDomainError(DomainError):
    """The lower-right block of Z*JZ is singular, so Z lies outside U."""


class InconsistentSystem(DomainError):
    pass


class ConfigurationTooLarge(DomainError):
    pass


class IdentityViolation(JetStrataError, RuntimeError):
    pass
