import math

import numpy as np
import pytest

from wm3d.media_io import VideoClip
from wm3d.metrics import nc, psnr, psnr_clip


def test_nc_identical_is_unity():
    w = np.random.RandomState(0).randint(0, 256, (8, 8)).astype(np.uint8)
    assert nc(w, w) == pytest.approx(1.0)


def test_nc_zero_extracted():
    w = np.full((4, 4), 9, np.uint8)
    assert nc(w, np.zeros((4, 4), np.uint8)) == 0.0


def test_nc_halved_extracted():
    w = (np.random.RandomState(1).randint(0, 128, (6, 6)) * 2).astype(np.uint8)
    assert nc(w, w // 2) == pytest.approx(0.5)


def test_nc_linearity():
    rs = np.random.RandomState(2)
    w = rs.rand(5, 5) * 255
    x, y = rs.rand(5, 5) * 255, rs.rand(5, 5) * 255
    a, b = 0.3, 1.7
    assert nc(w, a * x + b * y) == pytest.approx(a * nc(w, x) + b * nc(w, y))


def test_nc_errors():
    with pytest.raises(ValueError, match="mismatch"):
        nc(np.zeros((2, 2)), np.zeros((3, 3)))
    with pytest.raises(ValueError, match="all-zero"):
        nc(np.zeros((2, 2)), np.ones((2, 2)))


def test_psnr_identical_infinite():
    a = np.random.RandomState(3).randint(0, 256, (8, 8)).astype(np.uint8)
    assert math.isinf(psnr(a, a))


def test_psnr_unit_difference():
    a = np.zeros((16, 16), np.uint8)
    b = np.ones((16, 16), np.uint8)
    assert psnr(a, b) == pytest.approx(48.1308, abs=1e-3)


def test_psnr_full_scale_difference():
    a = np.zeros((4, 4), np.uint8)
    b = np.full((4, 4), 255, np.uint8)
    assert psnr(a, b) == pytest.approx(0.0, abs=1e-12)


def test_psnr_symmetric_and_monotone():
    rs = np.random.RandomState(4)
    a = rs.randint(0, 200, (8, 8)).astype(np.uint8)
    assert psnr(a, a + 5) == pytest.approx(psnr(a + 5, a))
    assert psnr(a, a + 1) > psnr(a, a + 2) > psnr(a, a + 10)


def test_psnr_dim_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        psnr(np.zeros((2, 2)), np.zeros((2, 3)))


def test_psnr_clip_identical():
    clip = VideoClip(frames=[np.full((4, 4), 77, np.uint8)] * 3)
    report = psnr_clip(clip, clip)
    assert all(math.isinf(v) for v in report.psnr_per_frame)
    assert math.isinf(report.psnr_mean)


def test_psnr_clip_one_differing_frame():
    frames = [np.zeros((4, 4), np.uint8) for _ in range(3)]
    other = [f.copy() for f in frames]
    other[1] = np.ones((4, 4), np.uint8)
    report = psnr_clip(VideoClip(frames=frames), VideoClip(frames=other))
    finite = [v for v in report.psnr_per_frame if math.isfinite(v)]
    assert len(finite) == 1
    assert report.psnr_mean == pytest.approx(finite[0])


def test_psnr_clip_matches_bruteforce():
    rs = np.random.RandomState(5)
    a = VideoClip(frames=[rs.randint(0, 256, (6, 5)).astype(np.uint8) for _ in range(3)])
    b = VideoClip(frames=[rs.randint(0, 256, (6, 5)).astype(np.uint8) for _ in range(3)])
    report = psnr_clip(a, b)
    for fa, fb, got in zip(a.frames, b.frames, report.psnr_per_frame):
        total = 0.0
        for i in range(6):
            for j in range(5):
                d = float(fa[i, j]) - float(fb[i, j])
                total += d * d
        expected = 20.0 * math.log10(255.0 / math.sqrt(total / 30.0))
        assert got == pytest.approx(expected, rel=1e-12)


def test_psnr_clip_count_mismatch():
    a = VideoClip(frames=[np.zeros((2, 2), np.uint8)] * 2)
    b = VideoClip(frames=[np.zeros((2, 2), np.uint8)] * 3)
    with pytest.raises(ValueError, match="count"):
        psnr_clip(a, b)
