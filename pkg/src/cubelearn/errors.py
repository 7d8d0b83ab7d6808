"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so learners and oracles
should raise the most specific class that applies.
"""


class CubeLearnError(Exception):
    """Base class for errors raised by this package."""


class ProtocolError(CubeLearnError):
    """An oracle or teacher violated its contract (bad counterexample,
    exhausted or invalid script, malformed model, ...)."""


class SolverError(CubeLearnError):
    """An external solver process failed to start, crashed, or answered
    with something the wire protocol does not allow."""


class BudgetExceeded(CubeLearnError):
    """An iteration or probe budget ran out before the run finished."""


class UnboundedDirection(BudgetExceeded):
    """A search kept finding members arbitrarily far along one axis.

    Raised by corner searches that are only sound on bounded sets; it
    usually means the target has an infinite bound and the caller should
    use an algorithm that supports infinite cubes.
    """


class LearnTimeout(CubeLearnError):
    """A wall-clock deadline expired mid-run."""


class FormulaError(CubeLearnError, ValueError):
    """Input text (formula or cube-union JSON) could not be parsed."""
