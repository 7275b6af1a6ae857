"""Exception hierarchy shared by all hdproto modules.

Every public operation raises one of these (or a plain ValueError for
programming mistakes like negative dimensions). The CLI maps each class
to a documented exit category; see ``hdproto.cli``.
"""


class HdprotoError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(HdprotoError):
    """Operands have incompatible shapes."""


class ZeroVector(HdprotoError):
    """A vector with norm below 1e-12 reached a norm-sensitive operation."""


class EmptyInput(HdprotoError):
    """An operation received an empty sequence where at least one entry is required."""


class NonFiniteValue(HdprotoError):
    """NaN or Inf encountered in an input that must be finite."""


class NonFiniteLoss(HdprotoError):
    """A training iterate produced NaN/Inf; usually the update rate is too large."""


class EmptyMemory(HdprotoError):
    """Query against a prototype memory that stores no classes yet."""


class DuplicateClass(HdprotoError):
    """Attempt to add a class id that the memory already stores."""


class ShotCountMismatch(HdprotoError):
    """A support set does not provide exactly the declared number of shots per class."""


class EmptyClass(HdprotoError):
    """A scheduled class has no samples in the provided data."""


class LabelOutOfRange(HdprotoError):
    """A label index does not address any stored class."""


class UnknownClass(HdprotoError):
    """A class id is absent from the (compressed) memory."""


class UnknownLabel(HdprotoError):
    """An evaluation label falls outside the classes seen so far."""


class EmptyEvaluation(HdprotoError):
    """An evaluation set contains no samples."""


class BadMagic(HdprotoError):
    """File does not start with the embedding-file magic bytes."""


class VersionUnsupported(HdprotoError):
    """Embedding file declares a format version this build cannot read."""


class TruncatedFile(HdprotoError):
    """Embedding file is shorter than its header declares."""


class ConfigError(HdprotoError):
    """Experiment configuration is malformed, incomplete, or has unknown keys."""
