"""Exception hierarchy shared by every module in the package."""


class SpinChainError(Exception):
    """Base class for all errors raised by spinmirror."""


class InvalidSpec(SpinChainError, ValueError):
    pass


class UnsupportedNormalization(SpinChainError, ValueError):
    pass


class NotMirrorSymmetric(SpinChainError, ValueError):
    pass


class InvalidSite(SpinChainError, IndexError):
    pass


class InvalidAmplitude(SpinChainError, ValueError):
    pass


class DegenerateInput(SpinChainError, ValueError):
    pass


class NumericalFailure(SpinChainError, ArithmeticError):
    pass


class InternalInconsistency(SpinChainError, AssertionError):
    pass
