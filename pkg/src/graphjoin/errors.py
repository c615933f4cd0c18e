"""Exception hierarchy.

Every error carries a stable ``exit_code`` so the command line can map
failures to process status without inspecting messages.
"""
from __future__ import annotations


class GraphJoinError(Exception):
    exit_code = 1


class ParseError(GraphJoinError):
    exit_code = 10

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEdge(ParseError):
    exit_code = 11


class UnknownVertex(ParseError):
    exit_code = 12


class InvalidWeight(ParseError):
    exit_code = 13


class EmptyGraph(ParseError):
    exit_code = 14


class InvalidSize(GraphJoinError):
    exit_code = 20


class NotFullySupported(GraphJoinError):
    exit_code = 21


class RequiresConnected(GraphJoinError):
    exit_code = 22


class RequiresConnectedNoLoops(GraphJoinError):
    exit_code = 23


class RequiresUniformWeights(GraphJoinError):
    exit_code = 24


class CharacterizationInapplicable(GraphJoinError):
    exit_code = 25


class ShapeError(GraphJoinError):
    exit_code = 30


class UndefinedGcd(GraphJoinError):
    exit_code = 31


class NotIsomorphism(GraphJoinError):
    exit_code = 40


class InfeasibleParameter(GraphJoinError):
    exit_code = 41


class UnsupportedEigenvalue(GraphJoinError):
    exit_code = 42


class NotAnEigenpair(GraphJoinError):
    exit_code = 43


class DegenerateDirection(GraphJoinError):
    exit_code = 44


class NotASubgraph(GraphJoinError):
    exit_code = 45


class InvalidJoining(GraphJoinError):
    exit_code = 46


class InvalidCost(GraphJoinError):
    exit_code = 47


class CompositionMismatch(GraphJoinError):
    exit_code = 50


class SearchBudgetExceeded(GraphJoinError):
    exit_code = 51


class NotReversible(GraphJoinError):
    exit_code = 60


class InternalInconsistency(GraphJoinError):
    exit_code = 70
