"""Exception hierarchy shared by every sysmod module."""


class SysModError(Exception):
    """Base class for all model, store and association errors."""


# universe / constructors
class MalformedType(SysModError):
    pass


class DuplicateField(SysModError):
    pass


class NoSuchField(SysModError):
    pass


class NilDereference(SysModError):
    pass


class UnknownOid(SysModError):
    pass


class ArityMismatch(SysModError):
    pass


class FieldSetMismatch(SysModError):
    pass


# classes
class DuplicateClass(SysModError):
    pass


class UnknownSuper(SysModError):
    pass


class InheritanceCycle(SysModError):
    pass


class NameConflict(SysModError):
    pass


class StrictRedefinition(SysModError):
    pass


class UnknownClass(SysModError):
    pass


class MissingInit(SysModError):
    pass


class CarrierViolation(SysModError):
    pass


class DuplicateStatic(SysModError):
    pass


# datastore
class UnmappedLocation(SysModError):
    pass


class NoSuchAttr(SysModError):
    pass


class ImmutableAttr(SysModError):
    pass


class DuplicateObject(SysModError):
    pass


class WrongLocationSet(SysModError):
    pass


class UnderspecifiedValue(SysModError):
    """An operation needed the concrete value of an ``unknown``."""


# associations
class DuplicateAssoc(SysModError):
    pass


class UnknownAssoc(SysModError):
    pass


class StrategyShapeMismatch(SysModError):
    pass


class StrategyMismatch(SysModError):
    pass


class AssocInconsistent(SysModError):
    pass


class QualifierNotUnique(SysModError):
    pass


class MultiplicityViolation(SysModError):
    pass
