from typing import Any, List, Optional, Sequence


class WorkbenchError(Exception):
    """所有工作台异常的基类"""


class DegreeMismatchError(WorkbenchError, ValueError):
    """部分单射的度数不一致，或点越界、目标重复"""


class ClosureLimitError(WorkbenchError):
    def __init__(self, max_size: int, count: int):
        super().__init__(f"closure exceeded max_size={max_size} (reached {count} elements)")
        self.max_size = max_size
        self.count = count


class NotInverseError(WorkbenchError):
    def __init__(self, element: str, inverses: Sequence[str]):
        if inverses:
            text = f"{element} has {len(inverses)} inverses: {', '.join(inverses)}"
        else:
            text = f"{element} has no inverse"
        super().__init__(text)
        self.element = element
        self.inverses = list(inverses)


class KindMismatchError(WorkbenchError):
    pass


class NotIdealError(WorkbenchError):
    def __init__(self, operation: str, witness: Sequence[str]):
        super().__init__(f"not an ideal: {operation} of ({', '.join(witness)}) leaves the subset")
        self.operation = operation
        self.witness = tuple(witness)


class TermSyntaxError(WorkbenchError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class SignatureError(WorkbenchError):
    pass


class UnboundVariableError(WorkbenchError):
    pass


class BudgetExceededError(WorkbenchError):
    def __init__(self, needed: int, budget: int):
        super().__init__(f"identity check needs {needed} assignments, budget is {budget}")
        self.needed = needed
        self.budget = budget


class NotCombinatorialError(WorkbenchError):
    pass


class UnknownAlgebraError(WorkbenchError):
    pass


class ConsistencyError(WorkbenchError):
    """内部交叉校验失败"""

    def __init__(self, message: str, details: Optional[List[Any]] = None):
        super().__init__(message)
        self.details = details or []


class ConfigError(WorkbenchError):
    """配置文件无法解析，或选项类型、取值不合法"""
