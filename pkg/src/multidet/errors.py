"""Exception types shared across the package."""


class MultidetError(Exception):
    """Base class for all package errors."""


class NotAComplex(MultidetError):
    """Consecutive boundary maps do not compose to zero."""


class DimensionMismatch(MultidetError):
    pass


class DimensionOutOfRange(MultidetError):
    pass


class MismatchedShape(MultidetError):
    pass


class BudgetExceeded(MultidetError):
    """An enumeration would exceed the configured generator budget."""


class InfiniteDomainWithoutSampleBudget(MultidetError):
    pass


class MissingDatum(MultidetError):
    """A battery item has no assigned value in the determinant data."""


class MissingCertificate(MultidetError):
    pass


class MissingVerdierCertificate(MultidetError):
    pass


class VerdierAdmissionMissing(MultidetError):
    pass


class SignatureMismatch(MultidetError):
    pass


class MismatchedSignature(SignatureMismatch):
    pass


class ObjMismatch(MultidetError):
    """Object tables of two determinants differ; no morphism can exist."""


class ProductNotWellDefined(MultidetError):
    """A K0 relation-product does not reduce into the relation lattice."""


class SigmaMismatch(MultidetError):
    """Stored bimodule action disagrees with the re-derived action."""


class ParseError(MultidetError):
    def __init__(self, message, path=None, where=None):
        self.path = path
        self.where = where
        loc = f"{path}" + (f" at {where}" if where else "")
        super().__init__(f"{loc}: {message}" if path else message)


class UnresolvedReference(MultidetError):
    pass


class DuplicateId(MultidetError):
    pass


class UnknownCommand(MultidetError):
    pass
