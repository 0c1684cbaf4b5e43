"""Command line interface.

Video arguments are YUV4MPEG2 files (*.y4m) or directories of binary
PGM frames; watermarks are single PGM images. Exit codes: 0 success,
1 usage error, 2 data/format error, 3 capacity/geometry error.
"""

import argparse
import csv
import math
import sys
from pathlib import Path

from .attacks import (
    attack_average,
    attack_compress,
    attack_drop,
    attack_noise,
    attack_swap,
)
from .embed import EmbedParams, embed_clip
from .errors import FormatError, GeometryError
from .extract import extract_clip
from .keyfile import read_key, write_key
from .media_io import (
    read_pgm,
    read_pgm_sequence,
    read_y4m,
    write_pgm,
    write_pgm_sequence,
    write_y4m,
)
from .metrics import nc as nc_metric
from .metrics import psnr_clip
from .shots import DEFAULT_THRESHOLD, detect_shots, shot_spans

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_GEOMETRY = 3

DEFAULT_SEED1 = 1
DEFAULT_SEED2 = 2
DEFAULT_SEED3 = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; this toolkit uses 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_clip(path: str):
    p = Path(path)
    if p.is_dir():
        return read_pgm_sequence(p)
    return read_y4m(p)


def _save_clip(clip, path: str) -> None:
    p = Path(path)
    if p.suffix.lower() == ".y4m":
        write_y4m(clip, p)
    else:
        write_pgm_sequence(clip, p)


def _fmt(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


def _parse_offset(text: str):
    try:
        r, c = text.split(",")
        return int(r), int(c)
    except ValueError:
        raise FormatError(f"bad offset {text!r}, expected ROW,COL") from None


def _parse_shot_list(text: str, frame_count: int):
    """Manual segmentation 'a:b,c:d' -> boundary list; must tile the clip."""
    boundaries = []
    prev_end = 0
    for part in text.split(","):
        try:
            a, b = (int(v) for v in part.split(":"))
        except ValueError:
            raise FormatError(f"bad shot span {part!r}, expected START:END") from None
        if a != prev_end:
            raise GeometryError(
                f"shot spans must tile the clip; expected start {prev_end}, got {a}"
            )
        boundaries.append(a)
        prev_end = b
    boundaries.append(prev_end)
    if prev_end != frame_count:
        raise GeometryError(
            f"shot spans end at {prev_end} but the clip has {frame_count} frames"
        )
    return boundaries


def cmd_embed(args) -> int:
    clip = _load_clip(args.input)
    watermark = read_pgm(args.wm)
    params = EmbedParams(
        alpha=args.alpha,
        region_row0=args.offset[0],
        region_col0=args.offset[1],
        band=args.band,
    )
    boundaries = (
        _parse_shot_list(args.shots, clip.frame_count) if args.shots else None
    )
    marked, bundle = embed_clip(
        clip,
        watermark,
        seed1=args.seed1,
        seed2=args.seed2,
        seed3=args.seed3,
        params=params,
        boundaries=boundaries,
        fraction=args.select_fraction,
        threshold=args.shot_threshold,
    )
    spans = shot_spans(bundle.boundaries)
    for index in bundle.selected:
        a, b = spans[index]
        print(f"shot {index}: frames [{a},{b}) embedded")
    write_key(bundle, args.key_out)
    _save_clip(marked, args.output)
    return EXIT_OK


def cmd_extract(args) -> int:
    clip = _load_clip(args.input)
    bundle = read_key(args.key)
    reference = read_pgm(args.ref) if args.ref else None
    result = extract_clip(clip, bundle, reference)
    write_pgm(result.watermark, args.output)
    for shot in result.shots:
        note = " (length mismatch)" if shot.length_mismatch else ""
        if shot.nc is not None:
            print(f"shot {shot.shot_index}: nc={_fmt(shot.nc)}{note}")
        else:
            print(f"shot {shot.shot_index}: extracted{note}")
    if result.nc is not None:
        print(f"aggregate: nc={_fmt(result.nc)}")
    return EXIT_OK


def cmd_attack(args) -> int:
    clip = _load_clip(args.input)
    if args.type == "drop":
        if not args.original:
            raise FormatError("attack type 'drop' requires --original")
        attacked = attack_drop(clip, _load_clip(args.original))
    elif args.type == "average":
        attacked = attack_average(clip)
    elif args.type == "swap":
        attacked = attack_swap(clip)
    elif args.type == "compress":
        attacked = attack_compress(clip, args.quality)
    else:
        attacked = attack_noise(clip, args.sigma, args.seed)
    _save_clip(attacked, args.output)
    return EXIT_OK


def cmd_psnr(args) -> int:
    report = psnr_clip(_load_clip(args.a), _load_clip(args.b))
    print(_fmt(report.psnr_mean))
    return EXIT_OK


def cmd_nc(args) -> int:
    print(_fmt(nc_metric(read_pgm(args.a), read_pgm(args.b))))
    return EXIT_OK


def cmd_shots(args) -> int:
    boundaries = detect_shots(_load_clip(args.input), args.threshold)
    print(",".join(str(b) for b in boundaries))
    return EXIT_OK


_BENCH_ATTACKS = "drop,average,swap,compress:75,noise:2"


def _parse_attack_list(text: str):
    specs = []
    for part in text.split(","):
        name, _, param = part.partition(":")
        if name not in ("drop", "average", "swap", "compress", "noise"):
            raise FormatError(f"unknown attack {name!r}")
        if name == "compress":
            specs.append((name, int(param) if param else 75))
        elif name == "noise":
            specs.append((name, float(param) if param else 2.0))
        else:
            specs.append((name, None))
    return specs


def cmd_bench(args) -> int:
    clip = _load_clip(args.input)
    watermark = read_pgm(args.wm)
    alphas = [float(a) for a in args.alphas.split(",")]
    specs = _parse_attack_list(args.attacks)

    writer = csv.writer(sys.stdout)
    writer.writerow(["alpha", "attack", "parameter", "nc", "psnr_db"])
    for alpha in alphas:
        marked, bundle = embed_clip(
            clip,
            watermark,
            seed1=args.seed1,
            seed2=args.seed2,
            seed3=args.seed3,
            params=EmbedParams(alpha=alpha),
        )
        baseline = extract_clip(marked, bundle, watermark)
        psnr0 = psnr_clip(clip, marked).psnr_mean
        writer.writerow(["%g" % alpha, "none", "", _fmt(baseline.nc), _fmt(psnr0)])
        for name, param in specs:
            if name == "drop":
                attacked = attack_drop(marked, clip)
            elif name == "average":
                attacked = attack_average(marked)
            elif name == "swap":
                attacked = attack_swap(marked)
            elif name == "compress":
                attacked = attack_compress(marked, param)
            else:
                attacked = attack_noise(marked, param, args.seed)
            result = extract_clip(attacked, bundle, watermark)
            quality = psnr_clip(clip, attacked).psnr_mean
            writer.writerow(
                [
                    "%g" % alpha,
                    name,
                    "" if param is None else "%g" % param,
                    _fmt(result.nc),
                    _fmt(quality),
                ]
            )
    return EXIT_OK


def _add_seed_options(p) -> None:
    p.add_argument("--seed1", type=int, default=DEFAULT_SEED1,
                   help="permutation key (default %(default)s)")
    p.add_argument("--seed2", type=int, default=DEFAULT_SEED2,
                   help="disorder key (default %(default)s)")
    p.add_argument("--seed3", type=int, default=DEFAULT_SEED3,
                   help="shot selection key (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="wm3d",
        description="Blind video watermarking in a 3D Haar wavelet domain",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a watermark and write the key file")
    p.add_argument("--in", dest="input", required=True, help="input video")
    p.add_argument("--wm", required=True, help="watermark PGM image")
    p.add_argument("--key-out", required=True, help="key file to write")
    p.add_argument("--out", dest="output", required=True, help="output video")
    p.add_argument("--alpha", type=float, default=0.1,
                   help="embedding intensity (default %(default)s)")
    _add_seed_options(p)
    p.add_argument("--select-fraction", type=float, default=1.0,
                   help="fraction of eligible shots to watermark")
    p.add_argument("--shots", help="manual shot spans, e.g. 0:30,30:64")
    p.add_argument("--shot-threshold", type=float, default=DEFAULT_THRESHOLD,
                   help="histogram cut threshold (default %(default)s)")
    p.add_argument("--band", default="lh3", choices=["lh3", "hl3"],
                   help="target subband (default %(default)s)")
    p.add_argument("--offset", type=_parse_offset, default=(0, 0),
                   metavar="ROW,COL", help="watermark offset inside the subband")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="blind-extract a watermark using a key file")
    p.add_argument("--in", dest="input", required=True, help="received video")
    p.add_argument("--key", required=True, help="key file from embedding")
    p.add_argument("--out", dest="output", required=True,
                   help="output PGM for the extracted watermark")
    p.add_argument("--ref", help="reference watermark PGM; prints NC values")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("attack", help="apply a frame-level attack")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--type", required=True,
                   choices=["drop", "average", "swap", "compress", "noise"])
    p.add_argument("--original", help="original video (drop attack)")
    p.add_argument("--quality", type=int, default=75,
                   help="compression quality 1..100 (default %(default)s)")
    p.add_argument("--sigma", type=float, default=2.0,
                   help="noise standard deviation (default %(default)s)")
    p.add_argument("--seed", type=int, default=1234,
                   help="noise seed (default %(default)s)")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("psnr", help="mean PSNR between two videos")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_psnr)

    p = sub.add_parser("nc", help="normalized correlation between two PGM images")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_nc)

    p = sub.add_parser("shots", help="print detected shot boundaries")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.set_defaults(func=cmd_shots)

    p = sub.add_parser("bench", help="embed/attack/extract sweep as CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--wm", required=True)
    p.add_argument("--alphas", default="0.1", help="comma list of alphas")
    p.add_argument("--attacks", default=_BENCH_ATTACKS,
                   help=f"comma list, e.g. {_BENCH_ATTACKS}")
    p.add_argument("--seed", type=int, default=1234, help="noise attack seed")
    _add_seed_options(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage error or --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except GeometryError as exc:
        print(f"wm3d: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (FormatError, OSError) as exc:
        print(f"wm3d: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"wm3d: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
