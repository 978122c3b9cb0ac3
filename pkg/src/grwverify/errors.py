"""Exception hierarchy shared by every layer of the package."""


class GRWError(Exception):
    """Base class for all errors raised by grwverify."""


class ExprError(GRWError, ValueError):
    """Problem with a scalar expression (parse or evaluation)."""


class ExprSyntaxError(ExprError):
    def __init__(self, message, position, token):
        self.position = position
        self.token = token
        super().__init__(f"{message} at position {position} (token {token!r})")


class UnknownIdentifierError(ExprError):
    def __init__(self, name, position):
        self.name = name
        self.position = position
        super().__init__(f"unknown identifier {name!r} at position {position}")


class ArityError(ExprError):
    pass


class DomainError(ExprError, ArithmeticError):
    """Evaluation left the domain of an elementary function."""

    def __init__(self, message, node=None):
        self.node = node
        where = f" in {node}" if node is not None else ""
        super().__init__(f"{message}{where}")


class NonFiniteError(GRWError, ArithmeticError):
    """Jet arithmetic produced a non-finite coefficient."""


class ValidationError(GRWError, ValueError):
    """A spacetime or field description is inadmissible."""


class DegenerateMetricError(GRWError, ArithmeticError):
    pass


class ScenarioError(GRWError, ValueError):
    """Scenario file failed to load or validate."""
