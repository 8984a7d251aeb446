"""Command-line surface: crease validate|check|fold|motion|append|pleat|combescure|plot.

Exit codes: 0 success (valid / foldable / written), 1 domain verdict failure
(incompatible pattern, trivial or out-of-range fold, degenerate transform),
2 I/O or schema failure.  CREASE_SAMPLES overrides the default sample count.
"""

import argparse
import json
import os
import sys

from .append import AppendSpec, append_crease_cone, append_crease_cylinder, \
    append_crease_general
from .compatibility import compatibility_report
from .errors import BadDocument, CreaseError, FoldAngleOutOfRange
from .exports import folded_state_to_obj, pattern_to_svg
from .folding import TrivialState, fold_pattern, motion_bound, sample_motion
from .numerics import DEFAULT_SAMPLES, FuncGrid
from .pattern import load_pattern, save_pattern, validate
from .transform import add_parallel_pleat, combescure_transform

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_IO = 2


def _samples_default():
    env = os.environ.get("CREASE_SAMPLES")
    if env:
        try:
            return max(33, int(env))
        except ValueError:
            pass
    return DEFAULT_SAMPLES


def _load(path, samples):
    try:
        return load_pattern(path, samples=samples)
    except BadDocument as exc:
        raise SystemExit(_fail_io(f"cannot load {path}: {exc}"))


def _fail_io(message):
    print(f"error: {message}", file=sys.stderr)
    return EXIT_IO


def _write_json(payload, path):
    text = json.dumps(payload, indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_validate(args):
    pattern = _load(args.pattern, args.samples)
    result = validate(pattern)
    payload = {"regular": result.regular, "candidate": result.candidate,
               "inflection_nodes": [int(j) for j in result.t0_nodes],
               "failed_checks": list(result.diagnostics)}
    _write_json(payload, args.report)
    return EXIT_OK if result.ok else EXIT_VERDICT


def cmd_check(args):
    pattern = _load(args.pattern, args.samples)
    report = compatibility_report(pattern, tol=args.tolerance)
    _write_json(report.to_dict(), args.report)
    return EXIT_OK if report.foldable else EXIT_VERDICT


def _resolve_c1(args, pattern, report):
    if args.c1 is not None:
        return args.c1
    if not 0.0 < args.fraction < 1.0:
        print("error: --fraction must be in (0, 1)", file=sys.stderr)
        return None
    return args.fraction * motion_bound(pattern, report)


def cmd_fold(args):
    pattern = _load(args.pattern, args.samples)
    report = compatibility_report(pattern, tol=args.tolerance)
    if not report.foldable:
        print(f"error: pattern is {report.verdict}", file=sys.stderr)
        return EXIT_VERDICT
    c1 = _resolve_c1(args, pattern, report)
    if c1 is None:
        return EXIT_IO
    try:
        state = fold_pattern(pattern, report, c1)
    except FoldAngleOutOfRange as exc:
        print(f"error: fold constant out of range (bound {exc.bound})",
              file=sys.stderr)
        return EXIT_VERDICT
    if isinstance(state, TrivialState):
        print("error: trivial state (c1 = 0 is the flat configuration)",
              file=sys.stderr)
        return EXIT_VERDICT
    text = folded_state_to_obj(state)
    if args.obj:
        with open(args.obj, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"c1={c1:.17g} assembly_residual={state.assembly_residual:.3e} "
          f"ruling_match_residual={state.ruling_match_residual:.3e}",
          file=sys.stderr)
    return EXIT_OK


def cmd_motion(args):
    pattern = _load(args.pattern, args.samples)
    report = compatibility_report(pattern, tol=args.tolerance)
    if not report.foldable:
        print(f"error: pattern is {report.verdict}", file=sys.stderr)
        return EXIT_VERDICT
    try:
        motion = sample_motion(pattern, report, args.steps)
    except FoldAngleOutOfRange as exc:
        print(f"error: fold constant out of range (bound {exc.bound})",
              file=sys.stderr)
        return EXIT_VERDICT
    os.makedirs(args.obj_dir, exist_ok=True)
    schedule = []
    for idx, (c1, state) in enumerate(motion.samples):
        name = f"frame_{idx:03d}.obj"
        with open(os.path.join(args.obj_dir, name), "w", encoding="utf-8") as fh:
            fh.write(folded_state_to_obj(state))
        schedule.append({"frame": name, "c1": c1,
                         "assembly_residual": state.assembly_residual,
                         "ruling_match_residual": state.ruling_match_residual})
    payload = {"c1_range": list(motion.c1_range), "frames": schedule}
    with open(os.path.join(args.obj_dir, "motion.json"), "w",
              encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
    return EXIT_OK


def cmd_append(args):
    pattern = _load(args.pattern, args.samples)
    spec = AppendSpec(pattern, tuple(args.init))
    fn = {"cyl": append_crease_cylinder, "cone": append_crease_cone,
          "general": append_crease_general}[args.kind]
    try:
        result = fn(spec)
    except CreaseError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    save_pattern(result.pattern, args.out)
    if args.theta_out:
        _write_json({"theta_2L": result.theta_2l.values.tolist()}, args.theta_out)
    return EXIT_OK


def cmd_pleat(args):
    pattern = _load(args.pattern, args.samples)
    try:
        out = add_parallel_pleat(pattern, args.crease_offset, args.boundary_offset)
    except CreaseError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    save_pattern(out, args.out)
    return EXIT_OK


def cmd_combescure(args):
    pattern = _load(args.pattern, args.samples)
    p0 = FuncGrid.constant(pattern.grid, args.p0_scale)
    lengths = list(args.lengths) if args.lengths else None
    try:
        out = combescure_transform(pattern, p0, lengths)
    except CreaseError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    save_pattern(out, args.out)
    return EXIT_OK


def cmd_plot(args):
    pattern = _load(args.pattern, args.samples)
    report = compatibility_report(pattern)
    text = pattern_to_svg(pattern, report.classifications)
    with open(args.svg, "w", encoding="utf-8") as fh:
        fh.write(text)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="crease",
        description="Curved-crease pattern validation, foldability checking, "
                    "folding and construction.")
    parser.add_argument("--samples", type=int, default=_samples_default(),
                        help="grid sample count (default 401; CREASE_SAMPLES)")
    parser.add_argument("--tolerance", type=float, default=1e-5,
                        help="pair-condition residual tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="regularity and candidate checks")
    p.add_argument("pattern")
    p.add_argument("--report", help="write the JSON report here")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("check", help="rigid-ruling foldability verdict")
    p.add_argument("pattern")
    p.add_argument("--report")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("fold", help="compute one folded state as OBJ")
    p.add_argument("pattern")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--c1", type=float)
    group.add_argument("--fraction", type=float,
                       help="fraction of the attainable fold range in (0, 1)")
    p.add_argument("--obj", help="output OBJ path (stdout otherwise)")
    p.set_defaults(fn=cmd_fold)

    p = sub.add_parser("motion", help="sample the folding motion into OBJ frames")
    p.add_argument("pattern")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--obj-dir", required=True)
    p.set_defaults(fn=cmd_motion)

    p = sub.add_parser("append", help="append a compatible crease")
    p.add_argument("pattern")
    p.add_argument("--kind", choices=("cyl", "cone", "general"), required=True)
    p.add_argument("--init", type=float, nargs=3, required=True,
                   metavar=("L2", "L2P", "L2PP"))
    p.add_argument("--out", required=True)
    p.add_argument("--theta-out")
    p.set_defaults(fn=cmd_append)

    p = sub.add_parser("pleat", help="add a parallel pleat")
    p.add_argument("pattern")
    p.add_argument("--crease-offset", type=float, required=True)
    p.add_argument("--boundary-offset", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_pleat)

    p = sub.add_parser("combescure", help="Combescure-transform a pattern")
    p.add_argument("pattern")
    p.add_argument("--p0-scale", type=float, default=1.0)
    p.add_argument("--lengths", type=float, nargs="*")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_combescure)

    p = sub.add_parser("plot", help="SVG plot of creases and rulings")
    p.add_argument("pattern")
    p.add_argument("--svg", required=True)
    p.set_defaults(fn=cmd_plot)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.samples < 33:
        return _fail_io("--samples must be at least 33")
    if args.tolerance <= 0:
        return _fail_io("--tolerance must be positive")
    try:
        return args.fn(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_IO
    except BadDocument as exc:
        return _fail_io(str(exc))


if __name__ == "__main__":
    sys.exit(main())
