"""Exception types shared across the package."""


class RingMismatchError(ValueError):
    """Operands live in different rings."""

    def __init__(self, left, right):
        super().__init__(f"ring mismatch: {left} vs {right}")
        self.left = left
        self.right = right


class ContractViolation(ValueError):
    """A precondition of an operation was not met."""


class ParseError(ValueError):
    """Malformed expression text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position
        self.text = text
