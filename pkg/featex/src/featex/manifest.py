"""Split manifests: which classes belong to which session, and which sample
indices of each class are support (training) versus query (evaluation).

A manifest pins everything that makes an export reproducible: the class
ordering (which fixes the integer labels), the per-class sample assignments,
and the preprocessing constants (target size, resampling filter,
normalization). Sample indices refer to the class's files sorted by name.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import ManifestMismatch, MissingData

IMAGE_SUFFIXES = {".png", ".bmp", ".jpg", ".jpeg", ".gif", ".tiff"}


@dataclass(frozen=True)
class Assignment:
    """Sample indices of one class: support feeds training, query feeds evaluation."""

    support: tuple[int, ...]
    query: tuple[int, ...]

    def __post_init__(self):
        # canonical ascending order keeps export output sorted by sample index
        support = tuple(sorted(int(i) for i in self.support))
        query = tuple(sorted(int(i) for i in self.query))
        if not support:
            raise ManifestMismatch("every class needs at least one support sample")
        if len(set(support)) != len(support) or len(set(query)) != len(query):
            raise ManifestMismatch("duplicate sample indices in an assignment")
        if set(support) & set(query):
            raise ManifestMismatch("support and query indices overlap")
        if any(i < 0 for i in support + query):
            raise ManifestMismatch("sample indices must be nonnegative")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "query", query)


@dataclass(frozen=True)
class SplitManifest:
    """Class-to-session split plus per-class sample assignments and preprocessing."""

    dataset: str
    base_classes: tuple[str, ...]
    sessions: tuple[tuple[str, ...], ...]
    assignments: dict[str, Assignment]
    image_size: tuple[int, int] = (32, 32)
    grayscale: bool = True
    normalize_mean: float = 0.5
    normalize_std: float = 0.5

    def __post_init__(self):
        ordered = self.class_order()
        if len(set(ordered)) != len(ordered):
            raise ManifestMismatch("a class appears in more than one session")
        missing = [c for c in ordered if c not in self.assignments]
        if missing:
            raise ManifestMismatch(f"no sample assignment for: {missing[:5]}")
        if self.image_size[0] < 1 or self.image_size[1] < 1:
            raise ManifestMismatch("image_size must be positive")
        if self.normalize_std <= 0:
            raise ManifestMismatch("normalize_std must be positive")

    def class_order(self) -> list[str]:
        """All classes in label order: base first, then session by session."""
        out = list(self.base_classes)
        for session in self.sessions:
            out.extend(session)
        return out

    def labels(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.class_order())}

    def session_class_counts(self) -> list[int]:
        """Cumulative class count after the base session and each novel session."""
        counts = [len(self.base_classes)]
        for session in self.sessions:
            counts.append(counts[-1] + len(session))
        return counts


def build_manifest(
    dataset_dir,
    base_count: int,
    session_count: int,
    ways: int,
    base_support: int,
    base_query: int,
    novel_support: int,
    novel_query: int,
    dataset_name: str | None = None,
    image_size: tuple[int, int] = (32, 32),
    grayscale: bool = True,
    base_query_from_end: bool = True,
) -> SplitManifest:
    """Derive a manifest from a class-per-subdirectory dataset.

    Classes are taken in sorted name order: the first base_count become the
    base session and each of the session_count novel sessions takes the next
    `ways`. Base classes hold out their last base_query samples for
    evaluation (first base_support train); novel classes use their first
    novel_support samples as support and the next novel_query as queries.
    """
    root = Path(dataset_dir)
    if not root.is_dir():
        raise MissingData(f"dataset directory {root} does not exist")
    class_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    needed = base_count + session_count * ways
    if len(class_dirs) < needed:
        raise MissingData(f"need {needed} classes, found {len(class_dirs)} in {root}")

    assignments: dict[str, Assignment] = {}
    names = [p.name for p in class_dirs[:needed]]
    for position, class_dir in enumerate(class_dirs[:needed]):
        samples = count_samples(class_dir)
        if position < base_count:
            required = base_support + base_query
            if samples < required:
                raise MissingData(
                    f"base class {class_dir.name} has {samples} samples, needs {required}"
                )
            if base_query_from_end:
                query = tuple(range(samples - base_query, samples))
            else:
                query = tuple(range(base_support, base_support + base_query))
            assignments[class_dir.name] = Assignment(tuple(range(base_support)), query)
        else:
            required = novel_support + novel_query
            if samples < required:
                raise MissingData(
                    f"novel class {class_dir.name} has {samples} samples, needs {required}"
                )
            assignments[class_dir.name] = Assignment(
                tuple(range(novel_support)),
                tuple(range(novel_support, novel_support + novel_query)),
            )

    sessions = tuple(
        tuple(names[base_count + s * ways : base_count + (s + 1) * ways])
        for s in range(session_count)
    )
    return SplitManifest(
        dataset=dataset_name or root.name,
        base_classes=tuple(names[:base_count]),
        sessions=sessions,
        assignments=assignments,
        image_size=image_size,
        grayscale=grayscale,
    )


def omniglot_style_manifest(dataset_dir, **overrides) -> SplitManifest:
    """The 1623-class split: 1200 base classes keeping their first 14 samples
    for training and their last 6 for evaluation, then nine 47-way sessions
    whose classes use 5 support samples and the 6 samples right after them
    as queries."""
    params = dict(
        base_count=1200,
        session_count=9,
        ways=47,
        base_support=14,
        base_query=6,
        novel_support=5,
        novel_query=6,
    )
    params.update(overrides)
    return build_manifest(dataset_dir, **params)


def count_samples(class_dir: Path) -> int:
    return len(list_samples(class_dir))


def list_samples(class_dir: Path) -> list[Path]:
    return sorted(p for p in Path(class_dir).iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)


def save_manifest(manifest: SplitManifest, path) -> None:
    doc = {
        "dataset": manifest.dataset,
        "image_size": list(manifest.image_size),
        "grayscale": manifest.grayscale,
        "normalize": {"mean": manifest.normalize_mean, "std": manifest.normalize_std},
        "base_classes": list(manifest.base_classes),
        "sessions": [list(s) for s in manifest.sessions],
        "assignments": {
            name: {"support": list(a.support), "query": list(a.query)}
            for name, a in manifest.assignments.items()
        },
    }
    with open(path, "w") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)


def load_manifest(path) -> SplitManifest:
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict):
        raise ManifestMismatch(f"{path}: manifest must be a mapping")
    try:
        normalize = doc.get("normalize", {})
        return SplitManifest(
            dataset=str(doc["dataset"]),
            base_classes=tuple(doc["base_classes"]),
            sessions=tuple(tuple(s) for s in doc["sessions"]),
            assignments={
                name: Assignment(tuple(a["support"]), tuple(a["query"]))
                for name, a in doc["assignments"].items()
            },
            image_size=tuple(doc.get("image_size", (32, 32))),
            grayscale=bool(doc.get("grayscale", True)),
            normalize_mean=float(normalize.get("mean", 0.5)),
            normalize_std=float(normalize.get("std", 0.5)),
        )
    except (KeyError, TypeError) as exc:
        raise ManifestMismatch(f"{path}: malformed manifest ({exc})") from exc
