"""Spread-spectrum embedding of prepared sign planes into a video.

For each selected shot the pipeline is: temporal Haar analysis,
3-level spatial Haar on every coefficient frame, a multiplicative
+-alpha update of the chosen subband region in coefficient frames 1..8
(the DC frame is never touched), exact inverse transforms, then
rounding back to 8-bit luma. Bitplane b of the watermark goes to
coefficient frame b+1, so the least significant plane rides on the
coarsest temporal detail.

The sign actually written at each position depends on whether the
local neighborhood max lies above or below the coefficient; those
realized signs are returned because extraction needs them as a key.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import GeometryError
from .keyfile import KeyBundle, ShotRecord
from .media_io import VideoClip, quantize_luma
from .prng import MASK64
from .shots import (
    DEFAULT_THRESHOLD,
    MIN_EMBED_SHOT_LEN,
    detect_shots,
    select_shots,
    shot_spans,
    validate_boundaries,
)
from .wavelet3d import (
    SubbandRect,
    spatial_forward3_volume,
    spatial_inverse3_volume,
    subband_rect,
    temporal_forward,
    temporal_inverse,
)
from .wmprep import decompose_bitplanes, disorder, permute

DEFAULT_ALPHA = 0.1
PLANE_COUNT = 8

_NEIGHBOR_OFFSETS = [
    (-1, -1), (-1, 0), (-1, 1),
    (0, -1), (0, 1),
    (1, -1), (1, 0), (1, 1),
]


@dataclass
class EmbedParams:
    """Embedding strength and watermark placement.

    band names a level-3 subband ("lh3" by default, "hl3" for the
    transposed convention); the watermark rectangle sits at
    (region_row0, region_col0) inside that subband.
    """

    alpha: float = DEFAULT_ALPHA
    region_row0: int = 0
    region_col0: int = 0
    band: str = "lh3"

    def __post_init__(self):
        # alpha 0 is allowed as a degenerate no-op strength
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha {self.alpha} outside [0, 1)")
        if self.region_row0 < 0 or self.region_col0 < 0:
            raise ValueError("region offset must be non-negative")
        if self.band not in ("ll3", "lh3", "hl3", "hh3"):
            raise ValueError(f"unknown band {self.band!r}")

    def rect_for(self, height: int, width: int) -> SubbandRect:
        return subband_rect(height, width, self.band[:2], int(self.band[2]))


def _wm_slices(rect: SubbandRect, params: EmbedParams, wm_h: int, wm_w: int):
    """Relative slices of the watermark window inside the subband.

    Raises a capacity error when the rectangle does not fit.
    """
    r0, c0 = params.region_row0, params.region_col0
    if r0 + wm_h > rect.rows or c0 + wm_w > rect.cols:
        raise GeometryError(
            f"watermark {wm_w}x{wm_h} at offset ({r0},{c0}) does not fit "
            f"subband {params.band} of {rect.cols}x{rect.rows} coefficients"
        )
    return slice(r0, r0 + wm_h), slice(c0, c0 + wm_w)


def neighbor_max(frame: np.ndarray, rect: SubbandRect, i: int, j: int) -> float:
    """Max coefficient among the in-subband neighbors of (i, j).

    Coordinates are absolute frame positions; the 8-neighborhood is
    clipped at the subband boundary, so nothing outside `rect` is read.
    """
    arr = np.asarray(frame)
    rows, cols = rect.slices()
    if not (rows.start <= i < rows.stop and cols.start <= j < cols.stop):
        raise ValueError(f"position ({i},{j}) outside subband {rect}")
    best = None
    for di, dj in _NEIGHBOR_OFFSETS:
        r, c = i + di, j + dj
        if rows.start <= r < rows.stop and cols.start <= c < cols.stop:
            v = float(arr[r, c])
            if best is None or v > best:
                best = v
    if best is None:
        raise ValueError("subband too small: position has no neighbors")
    return best


def _neighbor_max_grid(sub: np.ndarray) -> np.ndarray:
    """Neighbor max at every position of a subband region at once."""
    h, w = sub.shape
    padded = np.full((h + 2, w + 2), -np.inf)
    padded[1:-1, 1:-1] = sub
    stack = [
        padded[1 + di : 1 + di + h, 1 + dj : 1 + dj + w]
        for di, dj in _NEIGHBOR_OFFSETS
    ]
    return np.max(stack, axis=0)


def spread_sign(t: float, r: float, wd: int) -> int:
    """Realized sign for one coefficient.

    +1 when the neighborhood max t lies strictly on the side named by
    the prepared sign (above for +1, below for -1); -1 otherwise, ties
    included.
    """
    if t > r and wd == 1:
        return 1
    if t < r and wd == -1:
        return 1
    return -1


def _spread_sign_grid(t: np.ndarray, r: np.ndarray, wd: np.ndarray) -> np.ndarray:
    hit = ((t > r) & (wd == 1)) | ((t < r) & (wd == -1))
    return np.where(hit, 1, -1).astype(np.int8)


def embed_plane(
    frame: np.ndarray, sign_plane: np.ndarray, params: EmbedParams
) -> tuple:
    """Embed one prepared sign plane into one coefficient frame.

    Neighborhood maxima come from a snapshot of the unmodified frame,
    then every watermark coefficient is scaled by (1 + alpha * sign).
    Returns (modified frame, realized sign plane).
    """
    arr = np.asarray(frame, dtype=np.float64)
    wd = np.asarray(sign_plane)
    if np.any((wd != 1) & (wd != -1)):
        raise ValueError("sign plane values must be +1 or -1")
    rect = params.rect_for(*arr.shape)
    win = _wm_slices(rect, params, *wd.shape)

    sub = arr[rect.slices()]
    t = _neighbor_max_grid(sub)
    realized = _spread_sign_grid(t[win], sub[win], wd)

    out = arr.copy()
    region = out[rect.slices()]
    region[win] = region[win] * (1.0 + params.alpha * realized)
    return out, realized


def embed_shot(frames, sign_planes: np.ndarray, params: EmbedParams) -> tuple:
    """Watermark one shot; returns (quantized frames, realized planes)."""
    n = len(frames)
    if n < MIN_EMBED_SHOT_LEN:
        raise GeometryError(
            f"shot of {n} frames too short to embed "
            f"(minimum {MIN_EMBED_SHOT_LEN})"
        )
    planes = np.asarray(sign_planes)
    if planes.shape[0] != PLANE_COUNT:
        raise ValueError(f"expected {PLANE_COUNT} sign planes")

    volume = spatial_forward3_volume(temporal_forward(frames))
    coeffs = volume.frames
    realized = np.empty_like(planes, dtype=np.int8)
    for k in range(1, PLANE_COUNT + 1):
        coeffs[k], realized[k - 1] = embed_plane(coeffs[k], planes[k - 1], params)

    rebuilt = temporal_inverse(
        spatial_inverse3_volume(replace(volume, frames=coeffs))
    )
    return [quantize_luma(f) for f in rebuilt], realized


def prepare_sign_planes(watermark: np.ndarray, seed1: int, seed2: int) -> np.ndarray:
    """Watermark image -> 8 permuted, disorder-mapped sign planes."""
    bitplanes = decompose_bitplanes(watermark)
    return np.stack(
        [disorder(permute(bitplanes[b], seed1), b, seed2) for b in range(PLANE_COUNT)]
    )


def embed_clip(
    clip: VideoClip,
    watermark: np.ndarray,
    seed1: int,
    seed2: int,
    seed3: int,
    params: EmbedParams | None = None,
    boundaries=None,
    fraction: float = 1.0,
    threshold: float = DEFAULT_THRESHOLD,
) -> tuple:
    """Embed a watermark into every selected shot of a clip.

    Returns (watermarked clip, key bundle). Unselected shots are left
    bit-identical. Shot boundaries may be forced via `boundaries`;
    otherwise they come from histogram-based detection.
    """
    if params is None:
        params = EmbedParams()
    for name, seed in (("seed1", seed1), ("seed2", seed2), ("seed3", seed3)):
        if not 0 <= seed <= MASK64:
            raise ValueError(f"{name} must be an unsigned 64-bit integer")
    wm = np.asarray(watermark)
    if wm.ndim != 2 or wm.size == 0:
        raise ValueError("watermark must be a nonempty 2-D image")
    wm_h, wm_w = wm.shape

    # Fail fast on geometry before any transform work.
    rect = params.rect_for(clip.height, clip.width)
    _wm_slices(rect, params, wm_h, wm_w)

    if boundaries is None:
        boundaries = detect_shots(clip, threshold)
    else:
        boundaries = list(boundaries)
        validate_boundaries(boundaries, clip.frame_count)
    selected = select_shots(boundaries, seed3, fraction)

    sign_planes = prepare_sign_planes(wm, seed1, seed2)

    out_frames = list(clip.frames)
    records = []
    for index in selected:
        start, end = shot_spans(boundaries)[index]
        shot_out, realized = embed_shot(clip.frames[start:end], sign_planes, params)
        out_frames[start:end] = shot_out
        records.append(ShotRecord(shot_index=index, planes=realized))

    bundle = KeyBundle(
        seed1=seed1,
        seed2=seed2,
        seed3=seed3,
        alpha=params.alpha,
        wm_width=wm_w,
        wm_height=wm_h,
        band=params.band,
        region_row0=params.region_row0,
        region_col0=params.region_col0,
        boundaries=tuple(boundaries),
        selected=tuple(selected),
        records=records,
    )
    watermarked = VideoClip(
        frames=out_frames,
        rate=clip.rate,
        chroma_token=clip.chroma_token,
        chroma=clip.chroma,
        extras=clip.extras,
    )
    return watermarked, bundle
