"""
Exception hierarchy shared by every package module.

The CLI maps these onto exit codes: input problems and caps exit 2,
consistency failures exit 1.
"""


class GreedoidError(Exception):
    """Base class for all library errors"""


class InputError(GreedoidError, ValueError):
    """Malformed or inconsistent input data"""


class NotFeasibleError(InputError):
    """A set that must be feasible is not"""


class PreconditionError(InputError):
    """An operation was called outside its precondition"""


class AxiomError(InputError):
    """The input fails a required axiom class"""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class CapExceededError(GreedoidError):
    """A desk-scale enumeration cap was hit"""

    def __init__(self, what: str, value: int, cap: int, setting: str):
        super().__init__(
            f"{what} is {value}, above the cap of {cap} "
            f"(raise GREEDOID_{setting.upper()} to allow it)"
        )
        self.value = value
        self.cap = cap
        self.setting = setting


class ConsistencyError(GreedoidError, RuntimeError):
    """A theorem-guaranteed check failed; the input or the library is broken"""
