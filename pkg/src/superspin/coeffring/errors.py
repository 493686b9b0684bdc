class ExpressionClassError(ValueError):
    """Result would leave the registered-denominator expression class."""


class PoleError(ZeroDivisionError):
    """Evaluation or substitution hit a zero denominator."""


class UnboundSymbolError(ValueError):
    """A symbol that must be bound (evaluation, solution checks) is free."""

    def __init__(self, symbols):
        self.symbols = sorted(symbols)
        names = ", ".join(str(s) for s in self.symbols)
        super().__init__(f"unbound symbols: {names}")


class ParseError(ValueError):
    """Malformed expression text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        where = f" at position {pos}"
        if text:
            where += f": {text[:pos]}<!>{text[pos:]}"
        super().__init__(message + where)
