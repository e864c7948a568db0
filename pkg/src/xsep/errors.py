"""Exception types raised across the package."""


class XSepError(ValueError):
    """Base class for all errors raised by xsep."""


class NegativeDiagonal(XSepError):
    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"diagonal entry {index} is negative ({value!r})")


class NotHermitian(XSepError):
    pass


class NotAState(XSepError):
    """The X-shaped matrix is not positive semidefinite."""


class PhaseUndefined(XSepError):
    """Some anti-diagonal entry vanishes, so its phase is undefined."""


class NotCommonMagnitude(XSepError):
    pass


class ConditionsFail(XSepError):
    """Rank-four separability relations do not hold."""


class PreconditionFail(XSepError):
    pass


class NotSeparable(XSepError):
    pass


class NotApplicable(XSepError):
    pass


class WrongRank(XSepError):
    pass


class InvalidProfile(XSepError):
    pass


class ParseError(XSepError):
    pass


class NotDecomposable(XSepError):
    pass
