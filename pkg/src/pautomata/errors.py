"""Exception hierarchy and resource limits shared across the package."""

from __future__ import annotations

import time
from dataclasses import dataclass


class PautomataError(Exception):
    """Base class for every error raised by this package."""


class ExpressionError(PautomataError):
    """Syntax error in an expression; carries the offending position."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"parse error at position {position}: {message}"
        super().__init__(message)


class DocumentError(PautomataError):
    """Malformed automaton document (schema, scoping, or value errors)."""


class ForeignVariableError(PautomataError):
    """An expression mentions variables outside the allowed set."""

    def __init__(self, variables, allowed):
        self.variables = tuple(sorted(variables))
        names = ", ".join(self.variables)
        super().__init__(
            f"foreign variable(s) {names}; allowed: {', '.join(allowed)}"
        )


class PreconditionError(PautomataError):
    """An operation was called on inputs violating its contract."""


class NonSpecialRuleError(PreconditionError):
    """A decider requires a special product rule but got a non-special one."""


class MismatchError(PreconditionError):
    """Two automata that must share rule and alphabet do not."""


class LetterCollisionError(PreconditionError):
    """A letter that must be fresh already occurs in the alphabet."""


class MissingVariableError(PreconditionError):
    """An evaluation or substitution lacks an image for a variable."""

    def __init__(self, variable: str, where: str = "assignment"):
        self.variable = variable
        super().__init__(f"variable '{variable}' has no value in {where}")


class LimitError(PautomataError):
    """A configured resource limit was exceeded; the run carries no verdict."""

    def __init__(self, limit: str, message: str):
        self.limit = limit
        super().__init__(f"{limit} limit exceeded: {message}")


@dataclass(frozen=True)
class Limits:
    """Explicit resource caps; exceeding any of them raises LimitError.

    The caps fail loudly instead of truncating: a run that hits a limit
    produces no verdict at all.  `deadline` is an absolute time.monotonic()
    value, normally derived from a timeout in seconds.
    """

    max_degree: int = 64
    max_ideal_levels: int = 32
    max_term_nodes: int = 1_000_000
    max_pairs: int = 200_000
    deadline: float | None = None

    @classmethod
    def with_timeout(cls, seconds: float | None, **kwargs) -> "Limits":
        deadline = None if seconds is None else time.monotonic() + seconds
        return cls(deadline=deadline, **kwargs)

    def check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise LimitError("timeout", "wall-clock budget exhausted")

    def check_degree(self, degree: int) -> None:
        if degree > self.max_degree:
            raise LimitError(
                "degree", f"polynomial degree {degree} > {self.max_degree}"
            )

    def check_term_size(self, size: int) -> None:
        if size > self.max_term_nodes:
            raise LimitError(
                "term-nodes", f"term has {size} nodes > {self.max_term_nodes}"
            )


DEFAULT_LIMITS = Limits()
