"""Command-line entry point.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 eigen-solver non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Optional, Sequence

import numpy as np

from .balance import balance_report, switching_balance_test
from .layout import (
    DEFAULT_X_TOLERANCE,
    MEASURES,
    LayoutModel,
    compute_layout,
    get_measure,
    layout_from_json,
    layout_to_json,
)
from .render import RenderSpec, render_svg
from .sgraph import SignedGraph, parse_edge_list, serialize_edge_list, signed_laplacian
from .spectral import ConvergenceError, SpectralResult, smallest_eigenpair, verify_residual
from .synth import GenParams, generate, reshuffle_signs, shuffle_sidecar

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3
ZERO_THRESHOLD = 1e-8


class UsageError(Exception):
    pass


class VerificationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        data = sys.stdin.buffer.read()
    else:
        with open(path, "rb") as fh:
            data = fh.read()
    return data.decode("utf-8")


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def analyse(g: SignedGraph, verify: bool) -> SpectralResult:
    """Eigen-solve, optionally cross-checking residual and the balance verdict."""
    lap = signed_laplacian(g)
    spectral = smallest_eigenpair(lap)
    if verify:
        bound = 1e-8 * (1.0 + float(np.abs(lap).sum(axis=1).max(initial=0.0)))
        residual = verify_residual(lap, spectral)
        if residual > bound:
            raise VerificationError(f"eigenpair residual {residual:.3e} exceeds {bound:.3e}")
        balanced = switching_balance_test(g).is_balanced
        if balanced != (spectral.lambda_min <= ZERO_THRESHOLD):
            raise VerificationError(
                f"switching test says balanced={balanced} but lambda_min={spectral.lambda_min:.3e}"
            )
    return spectral


def _render_spec(args) -> RenderSpec:
    return RenderSpec(
        width=args.width,
        height=args.height,
        margin=args.margin,
        node_radius=args.node_radius,
        color_positive=args.color_positive,
        color_negative=args.color_negative,
        bundling=args.bundling,
        bundle_strength=args.bundle_strength,
        max_tilt_degrees=args.max_tilt,
        show_lambda_label=not args.no_lambda_label,
    )


def _layout_for(g: SignedGraph, args) -> LayoutModel:
    spectral = analyse(g, args.verify)
    return compute_layout(g, spectral, get_measure(args.mu), args.x_tolerance)


def cmd_layout(args) -> int:
    g = parse_edge_list(_read(args.input))
    _write(args.output, layout_to_json(_layout_for(g, args), g))
    return EXIT_OK


def cmd_metrics(args) -> int:
    g = parse_edge_list(_read(args.input))
    spectral = analyse(g, args.verify)
    report = balance_report(g, spectral)
    doc = report.to_dict()
    doc["node_count"] = g.node_count
    doc["edge_count"] = g.edge_count
    _write(args.output, _dump(doc))
    return EXIT_OK


def _emit_with_sidecar(args, text: str, sidecar: dict) -> None:
    if args.json:
        if args.output in (None, "-"):
            raise UsageError("--json prints the sidecar on stdout; give -o for the edge list")
        _write(args.output, text)
        _write(None, _dump(sidecar))
        return
    _write(args.output, text)
    if args.output in (None, "-"):
        sys.stderr.write(json.dumps(sidecar) + "\n")
    else:
        _write(args.output + ".json", _dump(sidecar))


def cmd_generate(args) -> int:
    params = GenParams(args.n, args.delta, args.nu, args.seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = generate(params)
    for note in result.warnings:
        sys.stderr.write(f"warning: {note}\n")
    _emit_with_sidecar(args, serialize_edge_list(result.graph), result.sidecar())
    return EXIT_OK


def cmd_reshuffle(args) -> int:
    g = parse_edge_list(_read(args.input))
    shuffled = reshuffle_signs(g, args.seed)
    _emit_with_sidecar(args, serialize_edge_list(shuffled), shuffle_sidecar(shuffled, args.seed))
    return EXIT_OK


def cmd_render(args) -> int:
    text = _read(args.input)
    if text.lstrip().startswith("{"):
        if args.mu is not None:
            raise UsageError("--mu cannot be applied to a precomputed layout")
        layout, g = layout_from_json(text)
    else:
        g = parse_edge_list(text)
        layout = _layout_for(g, args)
    _write(args.output, render_svg(layout, g, _render_spec(args)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sbviz", description="Spectral structural-balance layouts for signed networks.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p, with_input=True):
        if with_input:
            p.add_argument("input", help="edge-list file, or '-' for stdin")
        p.add_argument("-o", "--output", help="output path (default: stdout)")

    def spectral_flags(p):
        p.add_argument("--mu", choices=["none", *MEASURES], default=None, help="faction measure for the axis tilt")
        p.add_argument("--x-tolerance", type=float, default=DEFAULT_X_TOLERANCE)
        p.add_argument("--verify", action="store_true", help="check residual and balance verdict (exit 2 on failure)")

    p = sub.add_parser("layout", help="emit layout JSON")
    common(p)
    spectral_flags(p)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("metrics", help="emit balance report JSON")
    common(p)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("generate", help="synthetic signed network")
    common(p, with_input=False)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="print the sidecar JSON on stdout")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("reshuffle", help="sign-reshuffled null model")
    common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="print the sidecar JSON on stdout")
    p.set_defaults(func=cmd_reshuffle)

    p = sub.add_parser("render", help="SVG from an edge list or a layout JSON")
    common(p)
    spectral_flags(p)
    p.add_argument("--width", type=float, default=900)
    p.add_argument("--height", type=float, default=600)
    p.add_argument("--margin", type=float, default=40)
    p.add_argument("--node-radius", type=float, default=5)
    p.add_argument("--color-positive", default="#1f77b4")
    p.add_argument("--color-negative", default="#d62728")
    p.add_argument("--bundling", action="store_true")
    p.add_argument("--bundle-strength", type=float, default=0.35)
    p.add_argument("--max-tilt", type=float, default=15.0)
    p.add_argument("--no-lambda-label", action="store_true")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VerificationError as exc:
        sys.stderr.write(f"verification failed: {exc}\n")
        return EXIT_VERIFY
    except ConvergenceError as exc:
        sys.stderr.write(f"eigen-solver did not converge: {exc}\n")
        return EXIT_NUMERIC
    except (UsageError, ValueError, KeyError, TypeError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
