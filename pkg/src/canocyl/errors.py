"""Exception hierarchy shared by every module.

The CLI maps each class to an exit status: input problems exit 1, exhausted
search budgets exit 2, broken invariants exit 3.
"""


class CanocylError(Exception):
    exit_code = 1


class InputError(CanocylError, ValueError):
    """Malformed input: unknown vertex, bad file line, violated precondition."""

    exit_code = 1


class StructuralError(InputError):
    """The graph does not have the structure an operation needs (e.g. connectivity)."""


class BudgetError(CanocylError):
    """A bounded search ran out of budget.

    ``partial`` carries whatever was certified before the budget ran out
    (a lower bound, a subset of members, ...).
    """

    exit_code = 2

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InvariantError(CanocylError):
    exit_code = 3

    def __init__(self, message, obj=None):
        super().__init__(message)
        self.obj = obj


class Budget:
    """Monotone step counter; raises :class:`BudgetError` once ``limit`` is passed."""

    __slots__ = ("limit", "used", "what")

    def __init__(self, limit, what="search"):
        if limit <= 0:
            raise InputError(f"budget must be positive, got {limit}")
        self.limit = int(limit)
        self.used = 0
        self.what = what

    def tick(self, n=1, partial=None):
        self.used += n
        if self.used > self.limit:
            raise BudgetError(
                f"{self.what}: budget of {self.limit} steps exceeded", partial=partial
            )
