"""Exception hierarchy shared by every engine."""


class KanexError(Exception):
    """Base class for all errors raised by kanex."""


class NotComposable(KanexError):
    pass


class ShapeMismatch(KanexError):
    pass


class BoundaryMismatch(KanexError):
    pass


class IllDefinedMap(KanexError):
    pass


class NoColimit(KanexError):
    pass


class SearchBudgetExceeded(KanexError):
    pass


class InvalidBifunctor(KanexError):
    pass


class NotDinatural(KanexError):
    pass


class NotNatural(KanexError):
    pass


class LemmaViolation(KanexError):
    """A structural identity that must hold by construction failed.

    This always signals a bug in the engine, never bad user input.
    """


class NotAdjoint(KanexError):
    pass


class InvalidRing(KanexError):
    pass


class IllDefinedAction(KanexError):
    pass


class UnknownEntity(KanexError):
    pass


class LocatedError(KanexError):
    """Error carrying a source location (file and line)."""

    def __init__(self, message, source=None, line=None):
        self.message = message
        self.source = source
        self.line = line
        super().__init__(self.__str__())

    def __str__(self):
        where = ""
        if self.source is not None:
            where = str(self.source)
            if self.line is not None:
                where += f":{self.line}"
            where += ": "
        return where + self.message


class ParseError(LocatedError):
    pass


class ValidationError(LocatedError):
    pass
