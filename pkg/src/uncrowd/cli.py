"""Batch command line: run regularizations, generate datasets, score layouts,
and serve interactive sessions."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import datasets, encodings, fileio, metrics, render
from .density import build_density
from .errors import UncrowdError
from .model import RegularizationParams
from .regularize import run as run_regularization

GEN_KINDS = ("four-cluster", "diagonal", "mixture", "labeled-regions")
_KIND_ALIAS = {"mixture": "gaussian-mixture"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uncrowd",
                                     description="De-clutter 2D scatterplots by "
                                                 "density-equalizing deformation")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--k", type=int, default=10,
                       help="texture resolution exponent (side = 2**k)")
        p.add_argument("--kernel", type=int, default=8,
                       help="smoothing kernel size in pixels")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--desk-scale", action="store_true",
                       help="divide built-in dataset sizes by 100")

    p_run = sub.add_parser("run", help="regularize a dataset and export results")
    p_run.add_argument("--input", type=Path, help="CSV file with x,y[,label]")
    p_run.add_argument("--gen", choices=GEN_KINDS, help="generate the input instead")
    p_run.add_argument("--n", type=int, default=10_000,
                       help="sample count for size-free generators")
    p_run.add_argument("--iters", type=int, default=16)
    p_run.add_argument("--d0", default="auto",
                       help="background density: 'auto' or a positive number")
    p_run.add_argument("--stop", choices=("fixed", "eps", "time"), default="fixed")
    p_run.add_argument("--epsilon", type=float, default=1e-4)
    p_run.add_argument("--time-budget", type=float, default=None)
    p_run.add_argument("--encodings", default="",
                       help="comma list of grid,density,contours")
    p_run.add_argument("--export", default="frames,metrics",
                       help="comma list of frames,fields,metrics")
    p_run.add_argument("--image-size", type=int, default=512)
    p_run.add_argument("--out", type=Path, required=True)
    add_common(p_run)

    p_gen = sub.add_parser("generate", help="write a generated dataset as CSV")
    p_gen.add_argument("--gen", choices=GEN_KINDS, default="mixture")
    p_gen.add_argument("--n", type=int, default=10_000)
    p_gen.add_argument("--out", type=Path, required=True)
    add_common(p_gen)

    p_met = sub.add_parser("metrics", help="score a layout (optionally against another)")
    p_met.add_argument("--input", type=Path, required=True)
    p_met.add_argument("--against", type=Path,
                       help="deformed layout to compare row-by-row")
    p_met.add_argument("--knn", type=int, default=10)
    add_common(p_met)

    p_srv = sub.add_parser("serve", help="serve the interactive session API")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.add_argument("--host", default="127.0.0.1")
    add_common(p_srv)
    return parser


def _make_dataset(args):
    if getattr(args, "input", None):
        return fileio.load_csv(args.input)
    kind = _KIND_ALIAS.get(args.gen, args.gen)
    spec = datasets.GenSpec(kind=kind, seed=args.seed, n=args.n,
                            desk_scale=args.desk_scale)
    return datasets.generate(spec)


def _cmd_run(args) -> int:
    if args.input is None and args.gen is None:
        print("run: provide --input or --gen", file=sys.stderr)
        return 2
    background = None if args.d0 == "auto" else float(args.d0)
    stop = {"fixed": "fixed", "eps": "displacement", "time": "time"}[args.stop]
    params = RegularizationParams(
        k=args.k, kernel_size=args.kernel, iterations=args.iters, stop=stop,
        epsilon=args.epsilon, time_budget=args.time_budget, background=background,
    ).validate()

    dataset = _make_dataset(args)
    exports = {token for token in args.export.split(",") if token}
    encoding_kinds = {token for token in args.encodings.split(",") if token}
    result = run_regularization(dataset, params, collect_metrics="basic")

    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    if "metrics" in exports:
        fileio.write_metrics(result.metrics, out / "metrics.jsonl")
    if "fields" in exports:
        for t, field in enumerate(result.fields, start=1):
            fileio.export_field(field, out / f"field_{t:03d}.bin", iteration=t)

    contours = None
    if "contours" in encoding_kinds:
        density0 = build_density(dataset.positions, params)
        contours = encodings.extract_contours(density0,
                                              encodings.default_levels(density0))
    if "frames" in exports:
        for t in range(result.iterations + 1):
            frame = result.frame(t)
            grid_lines = None
            if "grid" in encoding_kinds:
                grid_lines = encodings.deform_grid(result, upto=t).polylines
            contour_lines = None
            if contours is not None:
                contour_lines = encodings.deform_contours(contours, result,
                                                          upto=t).polylines
            bg = bg_range = None
            if "density" in encoding_kinds:
                tex = encodings.deform_background(result, upto=t)
                bg, bg_range = tex.values, tex.value_range
            render.render_frame(frame, dataset.labels, size=args.image_size,
                                background=bg, background_range=bg_range,
                                grid_lines=grid_lines, contour_lines=contour_lines,
                                path=out / f"frame_{t:03d}.png")
    if encoding_kinds:
        final = result.iterations
        if "grid" in encoding_kinds:
            overlay = encodings.deform_grid(result, upto=final)
            fileio.write_polylines(overlay.polylines,
                                   {"kind": "grid", "spacing": overlay.spacing,
                                    "subdivision": overlay.subdivision},
                                   out / "encoding_grid.json")
        if "contours" in encoding_kinds and contours is not None:
            moved = encodings.deform_contours(contours, result, upto=final)
            fileio.write_polylines(moved.polylines,
                                   {"kind": "contours", "levels": moved.levels,
                                    "line_levels": moved.line_levels},
                                   out / "encoding_contours.json")
    print(f"run complete: {result.iterations} iterations, n={dataset.n}, "
          f"outputs in {out}")
    return 0


def _cmd_generate(args) -> int:
    dataset = _make_dataset(args)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    fileio.save_csv(dataset, args.out)
    print(f"wrote {dataset.n} samples to {args.out}")
    return 0


def _cmd_metrics(args) -> int:
    base = fileio.load_csv(args.input)
    print(f"binned_stddev={metrics.binned_stddev(base.positions, args.k)!r}")
    print(f"overplotting={metrics.overplotting(base.positions, args.k)!r}")
    if args.against:
        other = fileio.load_csv(args.against)
        trust = metrics.trustworthiness(base.positions, other.positions,
                                        n_neighbors=args.knn)
        order = metrics.orthogonal_ordering(base.positions, other.positions)
        print(f"trustworthiness={trust!r}")
        print(f"ordering={order!r}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    handlers = {"run": _cmd_run, "generate": _cmd_generate,
                "metrics": _cmd_metrics, "serve": _cmd_serve}
    try:
        return handlers[args.command](args)
    except (UncrowdError, ValueError) as exc:
        # domain/validation problems are configuration errors
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
