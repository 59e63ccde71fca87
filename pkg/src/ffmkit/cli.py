"""Batch command-line front-end.

Subcommands: ffm, weights, extract, fd, eval, bench.  File-producing
commands are deterministic, so reruns yield byte-identical outputs; the
exit code is 0 only when every input was processed without error.
"""

from __future__ import annotations

import argparse
import glob
import json
import sys
from pathlib import Path

import numpy as np

from . import io as fio
from .bench import run_benchmark
from .errors import FfmkitError
from .fd import estimate_fd
from .ffm import FfmParams, compute_ffm, compute_ffm_label
from .metrics import ALL_METRICS, evaluate, mean_report
from .topology import extract_edges, skeletonize


def _expand(patterns) -> tuple[list[str], list[str]]:
    files: list[str] = []
    missing: list[str] = []
    for pattern in patterns:
        hits = sorted(glob.glob(pattern))
        if hits:
            files.extend(h for h in hits if h not in files)
        elif Path(pattern).exists():
            if pattern not in files:
                files.append(pattern)
        else:
            missing.append(pattern)
    return files, missing


def _emit(record: dict, stream=None) -> None:
    print(json.dumps(record), file=stream or sys.stdout)


def _ffm_params(args) -> FfmParams:
    return FfmParams(window=args.window, step=args.step,
                     gray_levels=args.gray_levels, robust=args.robust)


def _add_ffm_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window", type=int, default=5,
                        help="sliding window side, odd and >= 3 (default 5)")
    parser.add_argument("--step", type=int, default=1,
                        help="stride between visited pixels (default 1)")
    parser.add_argument("--gray-levels", type=int, default=256,
                        help="number of gray levels L (default 256)")
    parser.add_argument("--robust", action="store_true",
                        help="use the mean +/- std box spans")
    parser.add_argument("--threads", type=int, default=0,
                        help="worker threads, 0 = all cores (default 0)")


def _run_batch(files, job) -> int:
    """Apply ``job`` to every file, emitting one status record per file."""
    failures = 0
    for path in files:
        try:
            record = job(path)
            record.setdefault("status", "ok")
        except (FfmkitError, OSError, ValueError) as exc:
            failures += 1
            record = {"file": path, "status": "error", "error": str(exc)}
        _emit({"file": path, **record})
    return failures


def _require_inputs(patterns) -> tuple[list[str], int]:
    files, missing = _expand(patterns)
    failures = 0
    for pattern in missing:
        _emit({"file": pattern, "status": "error", "error": "no such file"})
        failures += 1
    return files, failures


def _cmd_ffm(args) -> int:
    params = _ffm_params(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    files, failures = _require_inputs(args.inputs)

    def job(path):
        image = fio.read_image(path)
        ffm = compute_ffm(image, params, threads=args.threads)
        target = out_dir / (Path(path).stem + ".ffm")
        fio.write_ffm(ffm, target)
        record = {"ffm": str(target)}
        if args.png16:
            png = out_dir / (Path(path).stem + ".png")
            fio.export_png16(ffm, png)
            record["png16"] = str(png)
        return record

    return failures + _run_batch(files, job)


def _cmd_weights(args) -> int:
    params = _ffm_params(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    files, failures = _require_inputs(args.inputs)

    def job(path):
        mask = fio.read_mask(path)
        weights = compute_ffm_label(mask, params, threads=args.threads)
        target = out_dir / (Path(path).stem + ".ffm")
        fio.write_ffm(weights, target)
        record = {"weights": str(target)}
        if args.png16:
            png = out_dir / (Path(path).stem + ".png")
            fio.export_png16(weights, png)
            record["png16"] = str(png)
        return record

    return failures + _run_batch(files, job)


def _cmd_extract(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    files, failures = _require_inputs(args.inputs)

    def job(path):
        mask = fio.read_mask(path)
        edge_path = out_dir / (Path(path).stem + "_edge.pgm")
        skel_path = out_dir / (Path(path).stem + "_skeleton.pgm")
        fio.write_mask(extract_edges(mask), edge_path)
        fio.write_mask(skeletonize(mask), skel_path)
        return {"edge": str(edge_path), "skeleton": str(skel_path)}

    return failures + _run_batch(files, job)


def _cmd_fd(args) -> int:
    files, failures = _require_inputs(args.inputs)
    scales = None
    if args.scales:
        scales = tuple(int(s) for s in args.scales.split(","))
    rows = []

    def job(path):
        image = fio.read_image(path)
        est = estimate_fd(image, scales, args.gray_levels, args.robust)
        rows.append((path, est))
        return {"fd": est.fd, "r_squared": est.r_squared,
                "n_scales": len(est.points)}

    failures += _run_batch(files, job)
    if rows:
        width = max(len(p) for p, _ in rows)
        print(f"{'file':<{width}}  {'fd':>8}  {'r^2':>8}  scales")
        for path, est in rows:
            print(f"{path:<{width}}  {est.fd:8.4f}  {est.r_squared:8.4f}  "
                  f"{len(est.points)}")
    return failures


def _pair_eval_files(pred_patterns, gt_patterns):
    preds, missing_p = _expand(pred_patterns)
    gts, missing_g = _expand(gt_patterns)
    if missing_p or missing_g:
        raise FfmkitError(f"missing inputs: {missing_p + missing_g}")
    preds = sorted(preds, key=lambda p: Path(p).name)
    gts = sorted(gts, key=lambda p: Path(p).name)
    if len(preds) != len(gts):
        raise FfmkitError(
            f"prediction/ground-truth count mismatch: {len(preds)} vs {len(gts)}"
        )
    pairs = []
    for pred, gt in zip(preds, gts):
        if Path(pred).stem != Path(gt).stem:
            raise FfmkitError(
                f"basename mismatch: {Path(pred).name} vs {Path(gt).name}"
            )
        pairs.append((pred, gt))
    return pairs


def _cmd_eval(args) -> int:
    metrics = tuple(m.strip() for m in args.metrics.split(",")) if args.metrics \
        else None
    try:
        pairs = _pair_eval_files(args.pred, args.gt)
    except FfmkitError as exc:
        _emit({"status": "error", "error": str(exc)}, sys.stderr)
        return 1
    failures = 0
    records = []
    reports = []
    for pred_path, gt_path in pairs:
        name = Path(pred_path).stem
        try:
            prob = fio.read_probability_map(pred_path)
            gt = fio.read_mask(gt_path)
            report = evaluate(prob, gt, threshold=args.threshold,
                              betti_mode=args.betti, metrics=metrics)
            reports.append(report)
            records.append({"file": name, **report.to_dict()})
        except (FfmkitError, OSError, ValueError) as exc:
            failures += 1
            records.append({"file": name, "status": "error", "error": str(exc)})
    if reports:
        records.append({"file": "mean", "n_images": len(reports),
                        **mean_report(reports).to_dict()})
    lines = "\n".join(json.dumps(r) for r in records)
    print(lines)
    if args.out:
        Path(args.out).write_text(lines + "\n")
    _print_eval_table(records)
    return failures


def _print_eval_table(records) -> None:
    rows = [r for r in records if "error" not in r]
    if not rows:
        return
    names = [m for m in ALL_METRICS if any(r.get(m) is not None for r in rows)]
    width = max(len(str(r["file"])) for r in rows)
    header = f"{'file':<{width}}" + "".join(f"  {m:>12}" for m in names)
    print(header, file=sys.stderr)
    for r in rows:
        cells = "".join(
            f"  {r[m]:>12.4f}" if r.get(m) is not None else f"  {'-':>12}"
            for m in names
        )
        print(f"{str(r['file']):<{width}}{cells}", file=sys.stderr)


def _cmd_bench(args) -> int:
    report = run_benchmark(
        size=args.size,
        window=args.window,
        step=args.step,
        gray_levels=args.gray_levels,
        robust=args.robust,
        threads=args.threads,
        reps=args.reps,
        seed=args.seed,
    )
    print(json.dumps(report, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ffmkit",
        description="Fractal feature maps, segmentation ground truth and metrics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ffm = sub.add_parser("ffm", help="compute image feature maps")
    p_ffm.add_argument("inputs", nargs="+", help="image files or globs")
    _add_ffm_flags(p_ffm)
    p_ffm.add_argument("--out", required=True, help="output directory")
    p_ffm.add_argument("--png16", action="store_true",
                       help="also write 16-bit PNG renderings")
    p_ffm.set_defaults(func=_cmd_ffm)

    p_w = sub.add_parser("weights", help="compute label weight maps")
    p_w.add_argument("inputs", nargs="+", help="mask files or globs")
    _add_ffm_flags(p_w)
    p_w.add_argument("--out", required=True, help="output directory")
    p_w.add_argument("--png16", action="store_true",
                     help="also write 16-bit PNG renderings")
    p_w.set_defaults(func=_cmd_weights)

    p_x = sub.add_parser("extract", help="derive edge and skeleton masks")
    p_x.add_argument("inputs", nargs="+", help="mask files or globs")
    p_x.add_argument("--out", required=True, help="output directory")
    p_x.set_defaults(func=_cmd_extract)

    p_fd = sub.add_parser("fd", help="whole-image fractal dimensions")
    p_fd.add_argument("inputs", nargs="+", help="image files or globs")
    p_fd.add_argument("--scales", default=None,
                      help="comma-separated box sides, e.g. 2,3,4")
    p_fd.add_argument("--gray-levels", type=int, default=256)
    p_fd.add_argument("--robust", action="store_true")
    p_fd.set_defaults(func=_cmd_fd)

    p_e = sub.add_parser("eval", help="score predictions against ground truth")
    p_e.add_argument("--pred", nargs="+", required=True,
                     help="probability maps (.ffm) or 8-bit images")
    p_e.add_argument("--gt", nargs="+", required=True, help="ground-truth masks")
    p_e.add_argument("--threshold", type=float, default=0.5,
                     help="binarization threshold (default 0.5)")
    p_e.add_argument("--betti", choices=("sum", "b1"), default="sum",
                     help="Betti error mode (default sum)")
    p_e.add_argument("--metrics", default=None,
                     help=f"comma-separated subset of {','.join(ALL_METRICS)}")
    p_e.add_argument("--out", default=None, help="also write records to a file")
    p_e.set_defaults(func=_cmd_eval)

    p_b = sub.add_parser("bench", help="time the feature-map engine")
    p_b.add_argument("--size", type=int, default=256, help="image side (>= 64)")
    _add_ffm_flags(p_b)
    p_b.add_argument("--reps", type=int, default=5, help="repetitions (default 5)")
    p_b.add_argument("--seed", type=int, default=0, help="image seed (default 0)")
    p_b.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        failures = args.func(args)
    except (FfmkitError, ValueError) as exc:
        _emit({"status": "error", "error": str(exc)}, sys.stderr)
        return 1
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
