"""Exception hierarchy shared by every module."""


class RelcommError(Exception):
    """Base class for all input and computation errors raised by the engine."""


class InvalidTable(RelcommError):
    pass


class NotLatinSquare(RelcommError):
    pass


class NoUnit(RelcommError):
    pass


class NotAssociative(RelcommError):
    def __init__(self, witness):
        self.witness = tuple(int(v) for v in witness)
        super().__init__(f"multiplication is not associative at {self.witness}")


class AxiomViolation(RelcommError):
    def __init__(self, axiom, witness):
        self.axiom = axiom
        self.witness = tuple(int(v) for v in witness)
        super().__init__(f"axiom {axiom!r} fails at {self.witness}")


class ArityMismatch(RelcommError):
    pass


class SignatureMismatch(RelcommError):
    pass


class KindUnsupported(RelcommError):
    pass


class BudgetExceeded(RelcommError):
    def __init__(self, arity, estimate, budget=None):
        self.arity = arity
        self.estimate = int(estimate)
        self.budget = budget
        msg = f"arity {arity}: about {self.estimate} evaluations"
        if budget is not None:
            msg += f" exceeds budget {int(budget)}"
        super().__init__(msg)


class NonCommutingSquare(RelcommError):
    pass


class NotEquivalenceRelation(RelcommError):
    pass


class NoCentralizingIdeal(RelcommError):
    pass


class ParseError(RelcommError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class InvariantBroken(RelcommError):
    """A runtime cross-check between two code paths disagreed (a bug, not bad input)."""


class NotSurjective(RelcommError):
    pass
