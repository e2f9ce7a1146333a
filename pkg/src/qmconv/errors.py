"""Exception hierarchy shared by all modules."""


class QmError(ValueError):
    """Base class for every error raised by qmconv."""


class ZeroQuaternion(QmError):
    pass


class AntipodalSingularity(QmError):
    pass


class NotUnit(QmError):
    pass


class NotRotation(QmError):
    pass


class NotHomomorphic(QmError):
    pass


class InvalidStep(QmError):
    pass


class DetectionError(QmError):
    """Raised when probe samples do not single out one convention."""


class Indeterminate(DetectionError):
    pass


class Inconsistent(DetectionError):
    pass


class NotAQuaternionAlgebra(DetectionError):
    pass


class NotARotationMap(DetectionError):
    pass


class AntihomomorphicHeader(QmError):
    pass


class DslError(QmError):
    """Errors from the expression language. Carries an optional position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class DslSyntaxError(DslError):
    pass


class DslTypeError(DslError):
    pass


class MixedMultiplication(DslError):
    pass


class MissingBinding(DslError):
    pass


class TypeMismatch(DslError):
    pass
