"""featex: image datasets to embedding files through a frozen convolutional backbone.

Builds split manifests (which classes form the base session, which novel
sessions follow, and which sample indices are support versus query), then
embeds the assigned images with a frozen backbone and writes the engine's
binary embedding-file format byte-exactly.
"""

from .backbone import ConvBackbone, extract_features, pretrained_backbone, random_frozen_backbone
from .errors import FeatexError, ManifestMismatch, MissingData
from .export import export, load_image
from .manifest import (
    Assignment,
    SplitManifest,
    build_manifest,
    load_manifest,
    omniglot_style_manifest,
    save_manifest,
)
from .writer import read_embedding_file, write_embedding_file

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "ConvBackbone",
    "FeatexError",
    "ManifestMismatch",
    "MissingData",
    "SplitManifest",
    "build_manifest",
    "export",
    "extract_features",
    "load_image",
    "load_manifest",
    "omniglot_style_manifest",
    "pretrained_backbone",
    "random_frozen_backbone",
    "read_embedding_file",
    "save_manifest",
    "write_embedding_file",
    "__version__",
]
