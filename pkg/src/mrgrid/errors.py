"""Shared exception types."""


class CapExceededError(RuntimeError):
    """An exhaustive operation would exceed its configured resource cap.

    Raised instead of silently truncating, so that every completed run is a
    sound exhaustive result.
    """


class NotCorrectableError(ValueError):
    """The erased pattern is not correctable by the given code.

    Attributes:
        deficiency: number of missing pivots, |E| - rank(H restricted to E).
    """

    def __init__(self, message: str, deficiency: int):
        super().__init__(message)
        self.deficiency = deficiency


class InconsistentWordError(ValueError):
    """Known symbols of a partial word are not the restriction of any codeword."""
