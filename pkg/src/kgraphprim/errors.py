"""Exception types shared across the package."""


class KGraphError(Exception):
    """Base class for all structured errors raised by this package."""

    def payload(self) -> dict:
        """Machine-readable form used by the CLI."""
        return {"type": type(self).__name__, "message": str(self)}


class NotSourceFree(KGraphError):
    def __init__(self, vertex, color):
        super().__init__(f"vertex {vertex!r} receives no edge of color {color}")
        self.vertex = vertex
        self.color = color

    def payload(self):
        return {**super().payload(), "vertex": self.vertex, "color": self.color}


class SquareNotBijective(KGraphError):
    def __init__(self, pair, reason):
        super().__init__(f"factorization square failure at {pair!r}: {reason}")
        self.pair = pair
        self.reason = reason

    def payload(self):
        return {**super().payload(), "pair": list(self.pair), "reason": self.reason}


class CubeConditionFailed(KGraphError):
    def __init__(self, triple):
        super().__init__(f"cube condition fails on edge triple {triple!r}")
        self.triple = triple

    def payload(self):
        return {**super().payload(), "triple": list(self.triple)}


class NotComposable(KGraphError):
    pass


class BadGroupTable(KGraphError):
    pass


class AxiomViolated(KGraphError):
    def __init__(self, axiom, witness):
        super().__init__(f"self-similarity axiom ({axiom}) fails at {witness!r}")
        self.axiom = axiom
        self.witness = witness

    def payload(self):
        return {**super().payload(), "axiom": self.axiom, "witness": repr(self.witness)}


class TooManyVertices(KGraphError):
    pass


class ConstructionFailed(KGraphError):
    pass


class BudgetExceeded(KGraphError):
    pass


class NotInLattice(KGraphError):
    pass


class UnsupportedDescriptor(KGraphError):
    pass


class InvalidQuery(KGraphError):
    pass


class HypothesisUnverified(KGraphError):
    def __init__(self, items):
        super().__init__(f"unverified hypotheses: {items}")
        self.items = items


class InconclusiveResult(KGraphError):
    """A bounded computation came back empty where theory predicts content."""


class DocumentError(KGraphError):
    """Base for input-document problems; carries a source position."""

    def __init__(self, message, line, column):
        super().__init__(message)
        self.line = line
        self.column = column

    def payload(self):
        return {**super().payload(), "line": self.line, "column": self.column}


class DocumentSyntaxError(DocumentError):
    pass


class DuplicateId(DocumentError):
    pass


class DanglingReference(DocumentError):
    pass
