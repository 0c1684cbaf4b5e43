import io

import numpy as np
import pytest

from wm3d.errors import FormatError
from wm3d.keyfile import KeyBundle, ShotRecord, read_key, write_key


def _planes(seed, h=16, w=16):
    rs = np.random.RandomState(seed)
    return np.where(rs.rand(8, h, w) < 0.5, 1, -1).astype(np.int8)


def _bundle(**overrides):
    kw = dict(
        seed1=0x0123456789ABCDEF,
        seed2=42,
        seed3=2**64 - 1,
        alpha=0.1,
        wm_width=16,
        wm_height=16,
        band="lh3",
        region_row0=0,
        region_col0=0,
        boundaries=(0, 30, 64),
        selected=(0, 1),
        records=[
            ShotRecord(shot_index=0, planes=_planes(1)),
            ShotRecord(shot_index=1, planes=_planes(2)),
        ],
    )
    kw.update(overrides)
    return KeyBundle(**kw)


def _roundtrip(bundle):
    buf = io.StringIO()
    write_key(bundle, buf)
    return read_key(io.StringIO(buf.getvalue())), buf.getvalue()


def test_roundtrip_exact():
    bundle = _bundle()
    again, _ = _roundtrip(bundle)
    for name in ("seed1", "seed2", "seed3", "alpha", "wm_width", "wm_height",
                 "band", "region_row0", "region_col0", "boundaries", "selected"):
        assert getattr(again, name) == getattr(bundle, name)
    assert len(again.records) == 2
    for a, b in zip(again.records, bundle.records):
        assert a.shot_index == b.shot_index
        assert np.array_equal(a.planes, b.planes)


def test_alpha_repr_roundtrips_exactly():
    for alpha in (0.1, 1.0 / 3.0, 0.07500000000000001, 0.0):
        again, _ = _roundtrip(_bundle(alpha=alpha))
        assert again.alpha == alpha


def test_plane_lines_are_44_base64_chars():
    # 16x16 plane -> 256 bits -> 32 bytes -> 44 base64 characters
    _, text = _roundtrip(_bundle())
    plane_lines = [ln for ln in text.splitlines() if ln.startswith("plane")]
    assert len(plane_lines) == 16
    assert all(len(ln.split("=", 1)[1]) == 44 for ln in plane_lines)


def test_file_layout(tmp_path):
    path = tmp_path / "k.key"
    write_key(_bundle(), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "WM3DKEY 1"
    assert lines[1].startswith("seed1=")
    assert lines[11].startswith("selected=")
    again = read_key(path)
    assert again.boundaries == (0, 30, 64)


def test_bad_magic_and_version():
    with pytest.raises(FormatError, match="magic"):
        read_key(io.StringIO("NOPE 1\n"))
    with pytest.raises(FormatError, match="version"):
        read_key(io.StringIO("WM3DKEY 9\n"))
    with pytest.raises(FormatError, match="empty"):
        read_key(io.StringIO(""))


def test_corrupt_base64_rejected():
    _, text = _roundtrip(_bundle())
    corrupted = text.replace("plane1=", "plane1=!!", 1)
    with pytest.raises(FormatError, match="base64"):
        read_key(io.StringIO(corrupted))


def test_wrong_payload_length_rejected():
    _, text = _roundtrip(_bundle())
    lines = text.splitlines()
    idx = next(i for i, ln in enumerate(lines) if ln.startswith("plane1="))
    lines[idx] = "plane1=AAAA"
    with pytest.raises(FormatError, match="bytes"):
        read_key(io.StringIO("\n".join(lines) + "\n"))


def test_missing_plane_rejected():
    _, text = _roundtrip(_bundle())
    lines = [ln for ln in text.splitlines() if not ln.startswith("plane8=")]
    with pytest.raises(FormatError, match="plane 8"):
        read_key(io.StringIO("\n".join(lines) + "\n"))


def test_missing_header_field_rejected():
    _, text = _roundtrip(_bundle())
    lines = [ln for ln in text.splitlines() if not ln.startswith("alpha=")]
    with pytest.raises(FormatError, match="alpha"):
        read_key(io.StringIO("\n".join(lines) + "\n"))


def test_inconsistent_bundles_rejected_on_write():
    with pytest.raises(FormatError, match="boundaries"):
        write_key(_bundle(boundaries=(0, 30, 20)), io.StringIO())
    with pytest.raises(FormatError, match="selected"):
        write_key(_bundle(selected=(0, 5)), io.StringIO())
    with pytest.raises(FormatError, match="records"):
        write_key(_bundle(selected=(0,)), io.StringIO())
    with pytest.raises(FormatError, match="alpha"):
        write_key(_bundle(alpha=1.5), io.StringIO())
    bad = _bundle()
    bad.records[0].planes = np.zeros((8, 16, 16), np.int8)
    with pytest.raises(FormatError, match="must be"):
        write_key(bad, io.StringIO())


def test_selected_records_mismatch_on_read():
    _, text = _roundtrip(_bundle())
    # drop the whole second shot block
    lines = text.splitlines()
    start = lines.index("shot=1")
    with pytest.raises(FormatError, match="records"):
        read_key(io.StringIO("\n".join(lines[:start]) + "\n"))
