"""8-bit RGB image buffers and file I/O.

Images are plain ``numpy`` arrays of shape ``(height, width, 3)`` and dtype
``uint8``. PNG and JPEG files are decoded/encoded through Pillow.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image as _PILImage


def as_rgb8(arr) -> np.ndarray:
    """Validate and return a contiguous (H, W, 3) uint8 array."""
    a = np.asarray(arr)
    if a.dtype != np.uint8:
        raise ValueError(f"expected uint8 pixels, got {a.dtype}")
    if a.ndim != 3 or a.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) RGB array, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"image dimensions must be >= 1, got shape {a.shape}")
    return np.ascontiguousarray(a)


def load_image(path) -> np.ndarray:
    """Decode a PNG/JPEG file into an RGB uint8 array."""
    with _PILImage.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def save_image(path, img: np.ndarray) -> None:
    """Encode an RGB uint8 array; format follows the file extension."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    _PILImage.fromarray(as_rgb8(img), "RGB").save(path)


def luminance(img: np.ndarray) -> np.ndarray:
    """ITU-R BT.601 luma in [0, 255] as float64, shape (H, W)."""
    a = as_rgb8(img).astype(np.float64)
    return 0.299 * a[:, :, 0] + 0.587 * a[:, :, 1] + 0.114 * a[:, :, 2]
