"""PNG read/write helpers on top of OpenCV.

Arrays are RGB (or single-channel) uint8/uint16; the BGR flip OpenCV wants
stays contained here.  Encoding is deterministic: identical arrays produce
identical files.
"""

from __future__ import annotations

from pathlib import Path

import cv2
import numpy as np


def write_png(path, image: np.ndarray) -> None:
    image = np.asarray(image)
    if image.dtype not in (np.uint8, np.uint16):
        raise ValueError("write_png expects uint8 or uint16 arrays")
    if image.ndim == 3:
        if image.shape[2] != 3:
            raise ValueError("colour images must have 3 channels")
        image = cv2.cvtColor(image, cv2.COLOR_RGB2BGR)
    elif image.ndim != 2:
        raise ValueError("image must be (H, W) or (H, W, 3)")
    if not cv2.imwrite(str(path), image):
        raise OSError(f"failed to write {path}")


def read_png(path) -> np.ndarray:
    path = Path(path)
    image = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if image is None:
        raise OSError(f"failed to read {path}")
    if image.ndim == 3:
        if image.shape[2] == 4:
            image = cv2.cvtColor(image, cv2.COLOR_BGRA2BGR)
        image = cv2.cvtColor(image, cv2.COLOR_BGR2RGB)
    return image
