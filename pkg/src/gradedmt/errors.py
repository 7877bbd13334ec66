"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class GradedError(Exception):
    """Base class for all errors raised by gradedmt."""


class InvalidSize(GradedError, ValueError):
    pass


class InvalidElement(GradedError, ValueError):
    pass


class AxiomViolation(GradedError):
    """A user-supplied chain failed the UL-chain axioms."""

    def __init__(self, chain_name: str, failures: list) -> None:
        self.chain_name = chain_name
        self.failures = failures
        names = ", ".join(f.group for f in failures)
        super().__init__(f"chain {chain_name!r} violates: {names}")


class FormulaSyntaxError(GradedError, ValueError):
    def __init__(self, message: str, position: int, text: str = "") -> None:
        self.position = position
        self.text = text
        super().__init__(f"{message} at offset {position}")


class UnknownSymbol(FormulaSyntaxError):
    pass


class ArityMismatch(FormulaSyntaxError):
    pass


class FileFormatError(GradedError, ValueError):
    def __init__(self, message: str, source: str = "<string>", line: int = 0) -> None:
        self.source = source
        self.line = line
        where = f"{source}:{line}" if line else source
        super().__init__(f"{where}: {message}")


class SearchSpaceTooLarge(GradedError):
    def __init__(self, count: int, ceiling: int) -> None:
        self.count = count
        self.ceiling = ceiling
        super().__init__(f"search space has {count} candidate structures (ceiling {ceiling})")


class EnumerationTooLarge(GradedError):
    def __init__(self, count: int, ceiling: int) -> None:
        self.count = count
        self.ceiling = ceiling
        super().__init__(f"formula enumeration would produce {count} formulas (ceiling {ceiling})")


class UncoveredVariable(GradedError, KeyError):
    def __str__(self) -> str:
        return f"evaluation does not cover variable {self.args[0]!r}"


class NotASentence(GradedError, ValueError):
    pass


class SignatureMismatch(GradedError, ValueError):
    pass


class NotAChain(GradedError, ValueError):
    pass


class InconsistentInput(GradedError, ValueError):
    pass


class ConstantsExhausted(GradedError):
    pass


class NotAType(GradedError):
    pass


class BoundsExhausted(GradedError):
    """A model exists in principle, but none fits inside the search space."""
