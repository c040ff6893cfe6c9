"""
Domain exceptions for the quandle workbench
"""

from typing import Optional, Tuple


class QuandleError(Exception):
    """Base class for every error raised by the workbench"""


class AxiomViolation(QuandleError):
    """A table fails one of the quandle axioms"""

    def __init__(self, axiom: str, witness: Tuple[int, ...]):
        self.axiom = axiom
        self.witness = tuple(int(w) for w in witness)
        super().__init__(f"{axiom} fails at {self.witness}")


class InvalidQuandleFile(QuandleError):
    """Malformed quandle JSON"""


class CapExceeded(QuandleError):
    """A size cap was reached while enumerating"""

    def __init__(self, what: str, cap: int):
        self.what = what
        self.cap = cap
        super().__init__(f"{what} exceeds the cap of {cap}")


class GroupTooLarge(CapExceeded):
    pass


class ClosureTooLarge(CapExceeded):
    pass


class BudgetExceeded(CapExceeded):
    pass


class UnsupportedType(QuandleError):
    """Coxeter type with no finite realization available"""


class NonPrimitive(QuandleError):
    """Vector whose entries do not generate the coefficient ring"""


class PresentationSyntaxError(QuandleError):
    """Parse error in the presentation language"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnknownGenerator(PresentationSyntaxError):
    """A relation mentions a name missing from the generator list"""

    def __init__(self, name: str, line: Optional[int] = None, column: Optional[int] = None):
        self.name = name
        super().__init__(f"unknown generator '{name}'", line, column)
