"""Exception types shared across the package.

The CLI maps these onto its exit-code contract, and the HTTP service maps
them onto status codes; everything else just raises them.
"""


class HyperwalkError(Exception):
    """Base class for all domain errors raised by this package."""


class ParameterError(HyperwalkError, ValueError):
    """A parameter is outside its documented domain (n, d, p, trials, ...)."""


class EnumerationCapError(ParameterError):
    """C(n, d) exceeds the configured maximum for full enumeration."""


class ConnectivityNotAchievedError(HyperwalkError):
    """Rejection sampling conditioned on connectivity exhausted its budget."""

    def __init__(self, params, attempts: int):
        self.params = params
        self.attempts = attempts
        super().__init__(
            f"no connected sample after {attempts} attempts "
            f"(n={params.n}, d={params.d}, p={params.p}); p is likely too small "
            f"to condition on connectivity at this size"
        )


class DisconnectedInstanceError(HyperwalkError):
    """An operation that requires a connected instance received one that is not."""


class ZeroDegreeError(DisconnectedInstanceError):
    """Some vertex lies in no hyperedge, so the walk is undefined there."""


class SingularSystemError(DisconnectedInstanceError):
    """A hitting-time linear system is singular (disconnected input)."""


class DegenerateGapError(DisconnectedInstanceError):
    """The spectral gap is numerically zero; the hitting-time formula diverges."""


class EigensolverError(HyperwalkError):
    """The symmetric eigensolver failed to converge."""


class DeterministicCheckError(HyperwalkError):
    """An identity that holds exactly in theory failed its numerical check.

    These are never expected on valid inputs; a raise indicates a bug.
    """


class AllTrialsTruncatedError(HyperwalkError):
    """Every Monte Carlo trial hit the step cap, so no estimate exists."""
