"""Exception types shared across the package."""


class KernelsmithError(Exception):
    """Base class for all errors raised by this package."""


class SchemaMismatch(KernelsmithError):
    pass


class ParseError(KernelsmithError):
    def __init__(self, row: int, col: int, message: str):
        super().__init__(f"row {row}, column {col}: {message}")
        self.row = row
        self.col = col


class MissingClassValue(KernelsmithError):
    pass


class ClassTooSmall(KernelsmithError):
    pass


class AllMissingColumn(KernelsmithError):
    pass


class WidthMismatch(KernelsmithError):
    pass


class DimMismatch(KernelsmithError):
    pass


class AllKernelsPruned(KernelsmithError):
    pass


class ClassWithoutKernel(KernelsmithError):
    pass


class RejectionExhausted(KernelsmithError):
    def __init__(self, kernel_index: int, message: str = ""):
        detail = message or (
            f"kernel {kernel_index}: could not draw enough in-range rows; "
            "its center and width make [0,1]-feasible samples too rare"
        )
        super().__init__(detail)
        self.kernel_index = kernel_index


class DegenerateSample(KernelsmithError):
    pass


class NotADistribution(KernelsmithError):
    pass


class EmptySample(KernelsmithError):
    pass


class LengthMismatch(KernelsmithError):
    pass


class BadK(KernelsmithError):
    pass


class TooFewInstances(KernelsmithError):
    pass


class NoMatchingInstances(KernelsmithError):
    pass


class SingleClass(KernelsmithError):
    pass
