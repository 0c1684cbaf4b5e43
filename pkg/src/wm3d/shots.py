"""Scene segmentation and keyed selection of watermark-carrying shots.

Cuts are declared where the luma histogram jumps between consecutive
frames. Both embedding and extraction rely on the same boundaries; the
embedder stores them in the key bundle so extraction never depends on
re-detection surviving an attack.
"""

import math

import numpy as np

from . import prng
from .errors import GeometryError
from .media_io import VideoClip

HIST_BINS = 64
DEFAULT_THRESHOLD = 0.35

# Shortest shot that still yields 8 temporal detail frames after
# padding to a power of two (9 frames pad to 16).
MIN_EMBED_SHOT_LEN = 9


def _histogram(frame: np.ndarray) -> np.ndarray:
    # 64 bins of width 4 over the 8-bit range
    return np.bincount((frame >> 2).ravel(), minlength=HIST_BINS)


def histogram_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Normalized L1 distance between two frames' 64-bin luma histograms.

    0 for identical histograms, 1 when no pixel mass shares a bin.
    """
    ha = _histogram(a).astype(np.int64)
    hb = _histogram(b).astype(np.int64)
    return float(np.sum(np.abs(ha - hb))) / (2.0 * a.size)


def detect_shots(clip: VideoClip, threshold: float = DEFAULT_THRESHOLD) -> list:
    """Split a clip at histogram jumps; returns boundary frame indices.

    The result always starts at 0 and ends at the frame count, so
    consecutive pairs are exactly the shots. A clip with no jump above
    `threshold` comes back as one shot.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    if not clip.frames:
        raise ValueError("empty clip")
    boundaries = [0]
    for k in range(1, clip.frame_count):
        if histogram_distance(clip.frames[k], clip.frames[k - 1]) > threshold:
            boundaries.append(k)
    boundaries.append(clip.frame_count)
    return boundaries


def shot_spans(boundaries) -> list:
    """Boundary list -> [(start, end), ...] frame index spans."""
    return list(zip(boundaries[:-1], boundaries[1:]))


def validate_boundaries(boundaries, frame_count: int) -> None:
    b = list(boundaries)
    if len(b) < 2 or b[0] != 0 or b[-1] != frame_count:
        raise GeometryError(
            f"boundaries must run from 0 to {frame_count}, got {b}"
        )
    if any(y <= x for x, y in zip(b, b[1:])):
        raise GeometryError(f"boundaries must be strictly increasing, got {b}")


def select_shots(
    boundaries,
    seed3: int,
    fraction: float = 1.0,
    min_length: int = MIN_EMBED_SHOT_LEN,
) -> list:
    """Keyed choice of which shots carry the watermark.

    Shots long enough to embed are ranked by a splitmix64 hash of
    (seed3, shot index) and the first ceil(fraction * eligible) are
    taken. Returns sorted shot indices; deterministic in all inputs.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must be in (0, 1]")
    spans = shot_spans(boundaries)
    eligible = [i for i, (a, b) in enumerate(spans) if b - a >= min_length]
    if not eligible:
        raise GeometryError(
            f"no shot of at least {min_length} frames to embed into "
            f"(shot lengths: {[b - a for a, b in spans]})"
        )
    eligible.sort(key=lambda i: prng.hash64(seed3, i))
    count = math.ceil(fraction * len(eligible))
    return sorted(eligible[:count])
