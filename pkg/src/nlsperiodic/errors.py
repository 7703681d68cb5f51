"""Shared exception types."""


class PreconditionError(ValueError):
    """A documented admissibility condition of a solver or analysis is violated.

    The message names the condition (e.g. the growth bound, a sign
    restriction on the coupling, or a coercivity threshold) so the CLI can
    surface it verbatim.
    """


class NonConvergenceError(RuntimeError):
    """An iteration failed to reach its tolerance within the allowed budget."""
