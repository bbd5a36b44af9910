class SemiringError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(SemiringError, ValueError):
    """Malformed semiring tables, files, or scripts."""


class ParseError(FormatError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.msg = msg
        self.pos = pos


class UnknownNameError(SemiringError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class CapacityError(SemiringError):
    """A configured size limit would be exceeded."""


class PreconditionError(SemiringError, ValueError):
    pass


class AssignmentError(SemiringError, ValueError):
    pass


class ReconstructionError(SemiringError):
    pass


class StepMismatchError(SemiringError):
    def __init__(self, msg: str, missing=None):
        super().__init__(msg)
        self.missing = missing
