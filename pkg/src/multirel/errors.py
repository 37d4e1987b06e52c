class UsageError(ValueError):
    """Arguments violate an operation's precondition."""


class ResourceError(RuntimeError):
    """An enumeration or search would exceed its configured bound."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class StructureError(ValueError):
    """A value fails structural validation; ``problems`` lists every violation."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(str(p) for p in self.problems) or "invalid structure")
