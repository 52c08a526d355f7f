"""Exception hierarchy shared by every module of the package."""
from __future__ import annotations


class AdecError(Exception):
    """Base class for all errors raised by :mod:`adec`."""


class NotHermitian(AdecError):
    pass


class NoConvergence(AdecError):
    pass


class RankDeficient(AdecError):
    pass


class InvalidBlock(AdecError):
    """Block size does not fit the frame length (rho > m or rho does not divide m)."""


class BadBaseVector(AdecError):
    pass


class ZeroEigenvalue(AdecError):
    pass


class DegenerateBase(AdecError):
    """The base vector has (numerically) no component along some eigenvector."""


class HypothesisViolated(AdecError):
    """A precondition of the adapted-decimation error theorem does not hold.

    The ``clause`` attribute names the violated condition.
    """

    def __init__(self, clause: str, detail: str = "") -> None:
        self.clause = clause
        self.detail = detail
        msg = clause if not detail else f"{clause}: {detail}"
        super().__init__(msg)


class UnsupportedOrder(AdecError):
    pass


class OverloadedInput(AdecError):
    pass


class Overflow(AdecError):
    pass


class Malformed(AdecError):
    pass


class RangeViolation(AdecError):
    pass


class InsufficientPoints(AdecError):
    pass


class ConfigError(AdecError):
    pass
