"""Exception hierarchy shared across the package."""


class SCMarginalError(Exception):
    """Base class for all package errors."""


class DegenerateCause(SCMarginalError, ValueError):
    """A cause marginal P(cause=1) is 0 or 1."""


class LambdaOutOfRange(SCMarginalError, ValueError):
    pass


class ThetaOutOfRange(SCMarginalError, ValueError):
    pass


class StatisticallyInconsistent(SCMarginalError):
    """The two observed marginals imply different P(Z)."""


class CounterfactuallyInfeasible(SCMarginalError):
    """No joint model is consistent with both marginal families."""


class EmptyPolytope(SCMarginalError):
    pass


class UnboundedPolytope(SCMarginalError):
    pass


class UnidentifiableQuery(SCMarginalError, ValueError):
    """Query cannot be answered by any of the (partial) models."""
