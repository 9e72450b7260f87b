"""Frame loading and channel-wise stacking.

Out-of-range offsets clamp to the nearest valid frame, so every focus
frame yields the full channel count even at the sequence ends.
"""

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .scheme import ContextScheme

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff")


class FrameSequence:
    """Ordered frames of one video, read lazily from image files."""

    def __init__(self, paths, cache_size: int = 8):
        self.paths = [Path(p) for p in paths]
        self._cache: dict[int, np.ndarray] = {}
        self._cache_size = cache_size

    @classmethod
    def from_directory(cls, directory) -> "FrameSequence":
        directory = Path(directory)
        if not directory.is_dir():
            raise FileNotFoundError(f"frame directory not found: {directory}")
        paths = sorted(
            p for p in directory.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES
        )
        return cls(paths)

    def __len__(self) -> int:
        return len(self.paths)

    def frame(self, index: int) -> np.ndarray:
        if not 0 <= index < len(self.paths):
            raise IndexError(f"frame index {index} out of range 0..{len(self.paths) - 1}")
        if index in self._cache:
            return self._cache[index]
        path = self.paths[index]
        try:
            with Image.open(path) as img:
                array = np.asarray(img.convert("RGB"))
        except (OSError, UnidentifiedImageError) as exc:
            raise OSError(f"unreadable frame {path}: {exc}") from exc
        if len(self._cache) >= self._cache_size:
            self._cache.pop(next(iter(self._cache)))
        self._cache[index] = array
        return array


def stack_frames(sequence, focus_index: int, scheme: ContextScheme) -> np.ndarray:
    """H x W x 3n plane for one focus frame, channels in ascending offset.

    ``sequence`` is anything with ``__len__`` and ``frame(index)``; each
    out-of-range offset is clamped to the nearest valid frame and the
    focus frame always fills the offset-0 slot untouched.
    """
    n = len(sequence)
    if not 0 <= focus_index < n:
        raise IndexError(f"focus index {focus_index} out of range 0..{n - 1}")
    planes = []
    shape = None
    for offset in scheme.offsets:
        index = min(max(focus_index + offset, 0), n - 1)
        plane = sequence.frame(index)
        if plane.ndim != 3 or plane.shape[2] != 3:
            raise ValueError(f"frame {index} is not an H x W x 3 image: shape {plane.shape}")
        if shape is None:
            shape = plane.shape
        elif plane.shape != shape:
            raise ValueError(
                f"frame {index} shape {plane.shape} differs from {shape}; "
                "all frames of a sequence must match"
            )
        planes.append(plane)
    return np.concatenate(planes, axis=2)
