"""Exceptions for the export pipeline."""


class FeatexError(Exception):
    """Base class for all featex errors."""


class MissingData(FeatexError):
    """The dataset directory lacks a class or sample the manifest requires."""


class ManifestMismatch(FeatexError):
    """The manifest is inconsistent with itself or with the dataset layout."""
