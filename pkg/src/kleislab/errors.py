"""Exception types shared across the package."""


class KleislabError(Exception):
    """Base class for every error raised by kleislab."""


class ValidationError(KleislabError):
    """A structure failed one of its invariants.

    ``witness`` holds the smallest offending data found, in a form that can be
    replayed as a regression test.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnknownLabel(ValidationError):
    pass


class UnknownElement(ValidationError):
    pass


class AntisymmetryViolation(ValidationError):
    pass


class NotMonotone(ValidationError):
    pass


class NotWeakeningClosed(ValidationError):
    pass


class NotOpenMap(ValidationError):
    pass


class NotALattice(ValidationError):
    pass


class NotDistributive(NotALattice):
    pass


class NotHemimorphism(ValidationError):
    pass


class NotBimorphism(ValidationError):
    pass


class NotAMonadMorphism(ValidationError):
    pass


class EncodingError(ValidationError):
    pass


class SourceTargetMismatch(KleislabError):
    pass


# the monad toolkit speaks of a plain "mismatch" of middle objects
Mismatch = SourceTargetMismatch


class SizeCapExceeded(KleislabError):
    pass


class SchemaError(KleislabError):
    def __init__(self, message, path=()):
        super().__init__(f"{'/'.join(map(str, path)) or '<root>'}: {message}")
        self.path = tuple(path)


class UnknownSuite(KleislabError):
    pass


class UnknownBinding(KleislabError):
    pass
