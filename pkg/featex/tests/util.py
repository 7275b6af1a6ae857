"""Synthetic image-dataset builder for tests: class-per-subdirectory noise images."""

import numpy as np
from PIL import Image


def make_image_dataset(root, class_count, samples_per_class, size=(40, 40), seed=0):
    """Write `class_count` directories of small grayscale PNGs; returns root."""
    rng = np.random.default_rng(seed)
    width = len(str(class_count - 1))
    for c in range(class_count):
        class_dir = root / f"c{c:0{width}d}"
        class_dir.mkdir(parents=True)
        for s in range(samples_per_class):
            arr = rng.integers(0, 256, size=size, dtype=np.uint8)
            Image.fromarray(arr, "L").save(class_dir / f"s{s:02d}.png", compress_level=1)
    return root
