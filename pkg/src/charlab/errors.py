"""Shared exception types. Every precondition failure maps to one of these."""


class CharlabError(Exception):
    """Base class for all errors raised by this package."""


class NonPrime(CharlabError):
    def __init__(self, p):
        super().__init__(f"{p} is not prime")
        self.p = p


class SizeCap(CharlabError):
    def __init__(self, size, cap):
        super().__init__(f"size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class NonDivisor(CharlabError):
    def __init__(self, m, n):
        super().__init__(f"{m} does not divide {n}")
        self.m = m
        self.n = n


class LevelMismatch(CharlabError):
    pass


class ModelMismatch(CharlabError):
    pass


class NotProduct(CharlabError):
    pass


class NotClosed(CharlabError):
    """The supplied point set is not closed under the group law."""


class NotStable(CharlabError):
    """Frobenius stability precondition failed."""


class EmptyFamily(CharlabError):
    pass


class UnknownWeight(CharlabError):
    pass


class CoverageGap(CharlabError):
    """A character fell into no stratum bucket."""


class ConfigError(CharlabError):
    pass
