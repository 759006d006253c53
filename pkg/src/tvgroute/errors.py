"""Exception types shared across the package."""


class RoutingError(Exception):
    """Base class for all package errors."""


class GraphError(RoutingError, ValueError):
    """Malformed graph input: bad index, negative capacity, duplicate arc."""


class InfeasibleError(RoutingError):
    """No routing (or flow) satisfies the demands."""


class NegativeCycleError(RoutingError):
    """A min-cost flow input contains a negative-cost cycle."""


class UnreachableNodeError(RoutingError):
    """Some node cannot be reached from the arborescence root."""


class BudgetExceeded(RoutingError):
    """An exhaustive search hit its declared limits; the answer is unresolved."""


class SchemaError(RoutingError, ValueError):
    """Serialized input does not follow the schema."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class InvariantViolation(SchemaError):
    """Structurally valid input that breaks a model invariant (e.g. start > K)."""


class FormulaError(RoutingError, ValueError):
    """CNF formula rejected by a reduction (e.g. not irreducible)."""
