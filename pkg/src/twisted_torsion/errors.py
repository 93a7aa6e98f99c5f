"""Exception hierarchy.  Every error raised on bad input derives from
:class:`TwistedTorsionError` so callers can catch the family at once."""


class TwistedTorsionError(ValueError):
    pass


class InvalidComplex(TwistedTorsionError):
    pass


class SquareZeroViolation(InvalidComplex):
    pass


class DegreeError(TwistedTorsionError):
    pass


class ConjugationViolation(TwistedTorsionError):
    pass


class ZeroScale(TwistedTorsionError):
    pass


class KindMismatch(TwistedTorsionError):
    pass


class RelationViolation(InvalidComplex):
    pass


class UnknownGenerator(TwistedTorsionError):
    pass


class ZeroP(TwistedTorsionError):
    pass


class GramNotSPD(TwistedTorsionError):
    pass


class EigenFailure(TwistedTorsionError):
    pass


class ToleranceAmbiguity(TwistedTorsionError):
    """An eigenvalue sits too close to the kernel threshold to classify."""


class ReferenceMismatch(TwistedTorsionError):
    pass


class NonTopFlux(TwistedTorsionError):
    pass


class ChainIdentityFailure(TwistedTorsionError):
    pass


class ParseError(TwistedTorsionError):
    def __init__(self, msg: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + where)
        self.line = line
        self.column = column


class ValidationError(TwistedTorsionError):
    pass
