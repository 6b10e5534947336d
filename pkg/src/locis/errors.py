"""Exception types shared across the package."""


class LocisError(Exception):
    """Base class for package-specific errors."""


class SingletonDependenceError(LocisError):
    """An edge is dependent on its own at some endpoint, so no algorithm
    guarantee applies; construct the instance with drop_dependent_singletons
    to strip such edges instead."""


class OracleContractError(LocisError):
    """A local oracle violated feasibility, the approximation guarantee, or
    monotonicity on the queries it was asked."""


class CapExceededError(LocisError):
    """An exact computation was requested beyond its configured size cap."""


class FormatError(LocisError):
    """A file or descriptor string could not be parsed."""


class InvariantError(LocisError):
    """An algorithm finished in a state that breaks one of its output
    invariants (infeasible solution, overlapping parts, or a residual set
    that does not cover the uncovered edges).  Indicates a bug or a
    misbehaving oracle that slipped past the per-query checks."""
