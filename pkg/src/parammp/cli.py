"""Command-line interface: plan, classify, verify, components.

Exit codes: 0 success, 1 validation failure (bad input), 2 internal
inconsistency (the library contradicted itself, e.g. an uncertifiable plan).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

import numpy as np

from .errors import (
    InternalConsistencyError,
    ModeUnsupportedError,
    ParammpError,
    QueryValidationError,
)
from .formats import FORMAT_VERSION, parse_problem, render_svg, sample_csv, serialize_plan
from .geometry import classify, component_count, make_frame
from .planner import default_mode, plan
from .verification import certify_separation

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INTERNAL = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parammp",
        description="Collision-free multi-robot motion planning among point obstacles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="problem JSON file")
        p.add_argument(
            "--mode",
            choices=["fixed", "obstacle-pair"],
            help="projection-frame mode (default: from the document, else automatic)",
        )
        p.add_argument("--samples", type=int, help="samples per segment / CSV resolution")
        p.add_argument("--seed", type=int, help="seed (fallback: PARAMMP_SEED)")
        p.add_argument("--output", help="write the main result here instead of stdout")

    p_plan = sub.add_parser("plan", help="plan a motion and emit the exact path as JSON")
    add_common(p_plan)
    p_plan.add_argument("--svg", help="also write an SVG rendering to this file")
    p_plan.add_argument("--csv", help="also write a sampled trajectory CSV to this file")

    p_classify = sub.add_parser("classify", help="report the continuity-region label")
    add_common(p_classify)

    p_verify = sub.add_parser(
        "verify", help="plan, certify separation and check endpoint/obstacle contracts"
    )
    add_common(p_verify)

    p_comp = sub.add_parser("components", help="count generic ordering pairs exactly")
    p_comp.add_argument("n", type=int, help="number of robots")
    p_comp.add_argument("m", type=int, help="number of obstacles")
    p_comp.add_argument("--output", help="write the count here instead of stdout")
    return parser


def _resolve_seed(args) -> Optional[int]:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("PARAMMP_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise QueryValidationError([f"PARAMMP_SEED: not an integer: {env!r}"]) from exc
    return None


def _emit(text: str, output: Optional[str]):
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load(args):
    with open(args.input, "r", encoding="utf-8") as handle:
        document = parse_problem(handle.read())
    mode = args.mode.replace("-", "_") if args.mode else None
    if mode is None and document.mode is not None:
        mode = document.frame_mode()
    return document, document.to_query(), mode


def _cmd_plan(args) -> int:
    document, query, mode = _load(args)
    result = plan(query, mode=mode, snap_tol=document.options.snap_tolerance)
    _emit(serialize_plan(result), args.output)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as handle:
            handle.write(render_svg(result))
    if args.csv:
        resolution = args.samples or 256
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write(sample_csv(result, resolution=resolution))
    return EXIT_OK


def _cmd_classify(args) -> int:
    document, query, mode = _load(args)
    frame_mode = mode or default_mode(query)
    frame = make_frame(query, frame_mode)
    label = classify(query, frame, document.options.snap_tolerance)
    _emit(
        json.dumps(
            {
                "version": FORMAT_VERSION,
                "mode": frame.mode.value,
                "region": {"j": label.j, "t": label.t, "c": label.c},
            },
            indent=2,
        ),
        args.output,
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    document, query, mode = _load(args)
    seed = _resolve_seed(args)
    samples = args.samples or document.options.samples_per_segment
    result = plan(query, mode=mode, snap_tol=document.options.snap_tolerance)
    certificate = certify_separation(result.path, samples_per_segment=samples)
    start_err = max(
        float(np.linalg.norm(result.path.position(r, 0.0) - query.starts[r]))
        for r in range(query.robot_count)
    )
    goal_err = max(
        float(np.linalg.norm(result.path.position(r, 1.0) - query.goals[r]))
        for r in range(query.robot_count)
    )
    obstacles_stationary = bool(np.array_equal(result.path.obstacles, query.obstacles))
    endpoints_ok = start_err <= 1e-9 and goal_err <= 1e-9
    report = {
        "version": FORMAT_VERSION,
        "mode": result.mode.value,
        "region": {"j": result.region.j, "t": result.region.t, "c": result.region.c},
        "swap_count": result.swap_count,
        "samples_per_segment": samples,
        "seed": seed,
        "endpoint_error": {"start": start_err, "goal": goal_err},
        "obstacles_stationary": obstacles_stationary,
        "separation": {
            "passed": certificate.passed,
            "min_certified": certificate.min_certified,
            "pairs": [
                {
                    "kind": p.kind,
                    "first": p.first,
                    "second": p.second,
                    "sampled_min": p.sampled_min,
                    "certified_lower_bound": p.certified_lower_bound,
                    "pass": p.passes,
                }
                for p in certificate.pairs
            ],
        },
        "passed": bool(certificate.passed and endpoints_ok and obstacles_stationary),
    }
    _emit(json.dumps(report, indent=2), args.output)
    status = "pass" if report["passed"] else "FAIL"
    print(
        f"verify: {status} (c={result.region.c}, swaps={result.swap_count}, "
        f"min certified separation {certificate.min_certified:.6g})",
        file=sys.stderr,
    )
    return EXIT_OK if report["passed"] else EXIT_INTERNAL


def _cmd_components(args) -> int:
    if args.n < 1 or args.m < 1:
        raise QueryValidationError(["components: need n >= 1 and m >= 1"])
    _emit(str(component_count(args.n, args.m)), args.output)
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "plan": _cmd_plan,
        "classify": _cmd_classify,
        "verify": _cmd_verify,
        "components": _cmd_components,
    }
    try:
        return handlers[args.command](args)
    except (QueryValidationError, ModeUnsupportedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ParammpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
