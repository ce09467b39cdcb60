"""Exception types shared across the package.

The CLI maps these onto exit codes: PreconditionError -> 2, SolverError -> 3,
OSError (and friends) -> 4.
"""


class PreconditionError(ValueError):
    """An input violates a documented precondition (e.g. q does not divide N)."""


class SolverError(RuntimeError):
    """The LP solver failed: infeasible, unbounded, or a self-check tripped."""


class InternalError(AssertionError):
    """A should-not-happen invariant failed (numerical self-check)."""
