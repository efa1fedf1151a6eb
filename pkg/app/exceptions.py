"""Error hierarchy. Every error carries a human-readable detail and the exit
code the command surface reports for it."""

from typing import Any, Optional

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_NOT_A_FRAME = 3
EXIT_NO_REPRESENTATION = 4
EXIT_CRITERION_FAILED = 5


class FrameKitError(Exception):
    exit_code: int = EXIT_PARSE

    def __init__(self, detail: str, exit_code: Optional[int] = None, **witness: Any):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code
        self.witness = witness

    def to_report(self) -> dict:
        return {"error": type(self).__name__, "detail": self.detail, **self.witness}


class InvalidMatrix(FrameKitError):
    pass


class MatrixFileError(FrameKitError):
    pass


class NotSquare(FrameKitError):
    pass


class NotHermitian(FrameKitError):
    pass


class DimensionMismatch(FrameKitError):
    pass


class IndexOutOfRange(FrameKitError):
    pass


class TooFewVectors(FrameKitError):
    pass


class PreconditionFailed(FrameKitError):
    pass


class TightFrameExcluded(FrameKitError):
    pass


class NotInvertible(FrameKitError):
    def __init__(self, detail: str, sigma_min: float):
        super().__init__(detail, sigma_min=sigma_min)
        self.sigma_min = sigma_min


class NotAFrame(FrameKitError):
    exit_code = EXIT_NOT_A_FRAME

    def __init__(self, detail: str, lambda_min: float):
        super().__init__(detail, lambda_min=lambda_min)
        self.lambda_min = lambda_min


class BaseNotAFrame(NotAFrame):
    pass
