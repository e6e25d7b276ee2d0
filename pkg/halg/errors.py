# halg/errors.py


class HalgError(Exception):
    pass


# group construction
class NotLatinSquare(HalgError):
    pass


class NoIdentity(HalgError):
    pass


class NotAssociative(HalgError):
    pass


class NotAPermutation(HalgError):
    pass


class GroupTooLarge(HalgError):
    pass


class NotClosed(HalgError):
    pass


class MissingIdentity(HalgError):
    pass


class UnknownElement(HalgError):
    pass


class UnknownGroup(HalgError):
    pass


# measures and algebras
class GroupMismatch(HalgError):
    pass


class KindMismatch(HalgError):
    pass


class SpaceMismatch(HalgError):
    pass


class NotNormal(HalgError):
    pass


class NonPositiveRho(HalgError):
    pass


class SystemMismatch(HalgError):
    pass


# configuration
class ConfigError(HalgError):
    pass


# verifier / io
class UnknownCheck(HalgError):
    pass


class SpecFormatError(HalgError):
    pass
