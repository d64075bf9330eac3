"""Exception hierarchy shared by every module."""


class XiLabError(Exception):
    """Base class for all errors raised by xilab."""


class MalformedData(XiLabError, ValueError):
    """Raw input is structurally broken (missing keys, unknown ids, bad types)."""


class SizeGuardExceeded(XiLabError):
    pass


# --- finite categories -----------------------------------------------------

class CategoryError(XiLabError):
    def __init__(self, message, morphisms=()):
        super().__init__(message)
        self.morphisms = tuple(morphisms)


class MissingIdentity(CategoryError):
    pass


class NonAssociative(CategoryError):
    pass


class IllTypedComposite(CategoryError):
    pass


class UnknownMorphism(XiLabError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownCatalogName(XiLabError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


# --- presheaves ------------------------------------------------------------

class FunctorialityViolation(XiLabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NaturalityViolation(XiLabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IllTypedDiagram(XiLabError):
    pass


# --- congruences and probes ------------------------------------------------

class NotClosedUnderRestriction(XiLabError):
    def __init__(self, message, congruence=None, morphism=None):
        super().__init__(message)
        self.congruence = congruence
        self.morphism = morphism


class SiteMismatch(XiLabError):
    pass


class OracleInconsistent(XiLabError):
    pass


class NotSaturated(XiLabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# --- maps and graphs -------------------------------------------------------

class NotAPullback(XiLabError):
    pass


class NotOverDelta1(XiLabError):
    pass


class NotLightlyDense(XiLabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalInvariantError(XiLabError, AssertionError):
    """A mathematical invariant that must always hold was observed to fail."""
