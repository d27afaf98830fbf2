"""Exception types shared across the package."""


class DicksonError(Exception):
    pass


class BudgetExhausted(DicksonError):
    """Raised when an engine call exceeds its evaluation budget.

    Carries the configured limit so callers can report how far the
    computation got before it was stopped.
    """

    def __init__(self, limit, used=None):
        self.limit = limit
        self.used = limit if used is None else used
        super().__init__(f"evaluation budget of {limit} exhausted")


class ParseError(DicksonError):
    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = frozenset(expected)
        detail = f"{message} at position {position}"
        if self.expected:
            detail += " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(detail)


class NotNatural(DicksonError):
    """A sequence or function produced something other than a natural number."""


class RunTooShort(DicksonError):
    pass


class HorizonTooLarge(DicksonError):
    def __init__(self, horizon, l, candidates, cap):
        self.horizon = horizon
        self.l = l
        self.candidates = candidates
        self.cap = cap
        super().__init__(
            f"C({horizon + 1}, {l}) = {candidates} candidate sets exceeds work cap {cap}"
        )


class InternalError(DicksonError):
    """A proof step failed to deliver what it guarantees; indicates a bug."""
