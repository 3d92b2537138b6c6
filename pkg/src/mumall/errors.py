class MumallError(Exception):
    pass


class TermTypeError(MumallError):
    def __init__(self, message, path=()):
        self.path = tuple(path)
        where = "/".join(self.path) or "<root>"
        super().__init__(f"{message} (at {where})")


class FormulaError(MumallError):
    """Ill-formed formula: arity mismatch, unbound predicate, stray index."""


class PolarityError(MumallError):
    pass


class PolarizationError(MumallError):
    pass


class ParseError(MumallError):
    def __init__(self, message, line=0, col=0):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


class ComputeError(MumallError):
    pass


class FuelExhausted(ComputeError):
    def __init__(self, used):
        self.used = used
        super().__init__(f"fuel exhausted after {used} transitions")


class EvalError(MumallError):
    pass
