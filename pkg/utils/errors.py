"""
Exception hierarchy and command-line exit codes
"""


class E2HomLabError(Exception):
    """Base class for all workbench errors"""
    exit_code = 1


class RingSpecError(E2HomLabError):
    """Malformed or invalid ring specification"""
    exit_code = 2

    def __init__(self, message: str, offset: int = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class CapExceededError(E2HomLabError):
    """A configured size cap would be exceeded"""
    exit_code = 3

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what} size {size} exceeds cap {cap}")


class CheckFailure(E2HomLabError):
    """An internal verification did not hold"""
    exit_code = 4

    def __init__(self, criterion: str, detail: str = ''):
        self.criterion = criterion
        self.detail = detail
        super().__init__(f"{criterion}: {detail}" if detail else criterion)


class DomainError(E2HomLabError):
    """Operation invoked outside the domain where it is defined"""
    exit_code = 4


class LinAlgError(E2HomLabError):
    """Integer linear algebra self-check failed"""
    exit_code = 4
