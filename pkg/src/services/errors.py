from typing import Optional


class SubordinationError(Exception):
    """Base class for precondition failures; verdicts are returned, not raised."""


class SizingError(SubordinationError):
    pass


class ForeignElementError(SubordinationError):
    pass


class MalformedInputError(SubordinationError):
    pass


class OperatorLawError(SubordinationError):
    def __init__(self, message: str, witness: Optional[tuple] = None):
        super().__init__(message)
        self.witness = witness


class NotABooleanCongruenceError(SubordinationError):
    pass


class NotACongruenceError(SubordinationError):
    pass


class NotASubalgebraError(SubordinationError):
    pass


class MorphismKindError(SubordinationError):
    pass


class FormulaSyntaxError(SubordinationError):
    def __init__(self, message: str, position: int = -1, line: int = -1, column: int = -1):
        super().__init__(message)
        self.position = position
        self.line = line
        self.column = column


class ConditionSyntaxError(FormulaSyntaxError):
    pass


class FreeVariableError(SubordinationError):
    pass


class BudgetExceededError(SubordinationError):
    pass


class UnrepresentableError(SubordinationError):
    pass


class SyntaxClassError(SubordinationError):
    pass
