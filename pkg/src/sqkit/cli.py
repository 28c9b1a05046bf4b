"""Command-line interface: fit, sample, canon, eval, gen, grid.

Exit codes: 0 success, 1 usage error, 2 parse/format error, 3 numerical
failure (non-convergence, degenerate input). Diagnostics go to stderr.
"""

import argparse
import json
import sys

import numpy as np

from .canonical import canonicalize, decompose_scale_shear
from .core import farthest_point_sample, sample_surface
from .fileio import (
    GenConfig,
    ParseError,
    gen_synthetic,
    parse_params,
    parse_ply,
    record_from_superquadric,
    write_params,
    write_ply,
)
from .fitting import FitConfig, fit
from .metrics import CameraIntrinsics, PoseHypothesis, accuracy_curve, mspd, mssd
from .shapespace import categorize, default_grid, symmetry_group, template_points

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path):
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, data):
    with open(path, "wb") as f:
        f.write(data)


def _load_params(path):
    return parse_params(_read(path))


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _thresholds(text):
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad threshold list: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("threshold list is empty")
    if any(b < a for a, b in zip(values, values[1:])):
        raise argparse.ArgumentTypeError("thresholds must be ascending")
    return values


def _fraction(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError("must lie in (0, 1]")
    return value


def _nonnegative_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0.0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _pose_from_record(record):
    sq = record.to_superquadric()
    rotation = sq.rotation_matrix
    shear = record.shear or (0.0, 0.0, 0.0)
    sym = np.array([
        [record.scale[0], shear[0], shear[1]],
        [shear[0], record.scale[1], shear[2]],
        [shear[1], shear[2], record.scale[2]],
    ])
    return PoseHypothesis(matrix=rotation @ sym, translation=np.array(record.translation))


def _cmd_fit(args):
    cloud = parse_ply(_read(args.input))
    config = FitConfig(
        max_iterations=args.max_iters,
        multistart=args.multistart,
        noise_scale=args.noise_scale,
        seed=args.seed,
    )
    result = fit(cloud, config)
    sq = canonicalize(result.params).canonical
    category = categorize(sq.eps1, sq.eps2, default_grid())
    record = record_from_superquadric(sq, category_id=category)
    _write(args.output, write_params(record))
    print(f"rms_residual_m={result.rms_residual:.9g}")
    if not result.converged:
        print("fit did not converge within the iteration budget", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_sample(args):
    sq = _load_params(args.params).to_superquadric()
    cloud = sample_surface(sq, args.n, seed=0)
    if args.fps is not None:
        idx = farthest_point_sample(cloud, args.fps, start=0)
        cloud = cloud[idx]
    _write(args.output, write_ply(cloud))
    return EXIT_OK


def _cmd_canon(args):
    record = _load_params(args.params)
    if record.shear is not None and any(v != 0.0 for v in record.shear):
        raise ParseError("canon expects a pure parameter record without shear")
    result = canonicalize(record.to_superquadric())
    matrix, translation = result.compose()
    rotation, scale, shear = decompose_scale_shear(matrix)
    out = record_from_superquadric(result.canonical, shear=shear)
    _write(args.output, write_params(out))
    report = {
        "warped": result.warped,
        "matrix": matrix.tolist(),
        "translation": translation.tolist(),
        "rotation": rotation.tolist(),
        "scale": scale.tolist(),
        "shear": shear.tolist(),
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_eval(args):
    gt = _load_params(args.gt)
    est = _load_params(args.est)
    gt_sq = gt.to_superquadric()
    grid = default_grid()
    category = grid.category(categorize(gt_sq.eps1, gt_sq.eps2, grid))
    template = template_points(category, n=args.points)
    group = symmetry_group(gt_sq)
    pose_gt = _pose_from_record(gt)
    pose_est = _pose_from_record(est)
    report = {
        "schema_version": 1,
        "category_id": category.id,
        "template_points": int(args.points),
        "mssd_m": mssd(pose_est, pose_gt, template, group),
    }
    if args.intrinsics is not None:
        raw = json.loads(_read(args.intrinsics))
        try:
            intrinsics = CameraIntrinsics(fx=raw["fx"], fy=raw["fy"],
                                          cx=raw["cx"], cy=raw["cy"])
        except (KeyError, TypeError):
            raise ParseError(f"{args.intrinsics}: expected fx, fy, cx, cy") from None
        report["mspd_px"] = mspd(pose_est, pose_gt, template, group, intrinsics)
    if args.thresholds is not None:
        report["thresholds"] = args.thresholds
        report["mssd_accuracy"] = accuracy_curve([report["mssd_m"]], args.thresholds).tolist()
        if "mspd_px" in report:
            report["mspd_accuracy"] = accuracy_curve([report["mspd_px"]], args.thresholds).tolist()
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output is not None:
        _write(args.output, text.encode("ascii"))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_gen(args):
    sq = _load_params(args.params).to_superquadric()
    cfg = GenConfig(n_points=args.n, noise_sigma=args.noise,
                    visible_fraction=args.visible, seed=args.seed)
    _write(args.output, write_ply(gen_synthetic(sq, cfg)))
    return EXIT_OK


def _cmd_grid(args):
    if not args.list:
        raise ParseError("nothing to do: pass --list")
    for cat in default_grid().categories():
        print(f"{cat.id}\t{cat.eps1}\t{cat.eps2}")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="sqkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("fit", help="fit a superquadric to a PLY cloud")
    p.add_argument("--input", required=True, help="input ASCII PLY cloud")
    p.add_argument("--output", required=True, help="output parameter JSON")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--multistart", type=_positive_int, default=6)
    p.add_argument("--max-iters", type=_positive_int, default=200)
    p.add_argument("--noise-scale", type=_nonnegative_float, default=0.0,
                   help="Huber scale in meters; 0 disables the robust loss")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("sample", help="sample surface points from parameters")
    p.add_argument("--params", required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--fps", type=_positive_int, default=None,
                   help="downsample to this many farthest points")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("canon", help="fold parameters into the canonical range")
    p.add_argument("--params", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_canon)

    p = sub.add_parser("eval", help="symmetry-aware pose errors between records")
    p.add_argument("--gt", required=True)
    p.add_argument("--est", required=True)
    p.add_argument("--points", type=_positive_int, default=512)
    p.add_argument("--intrinsics", default=None, help="JSON file with fx, fy, cx, cy")
    p.add_argument("--thresholds", type=_thresholds, default=None,
                   help="comma-separated ascending error thresholds")
    p.add_argument("--output", default=None, help="write the JSON report here instead of stdout")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("gen", help="generate a synthetic cloud from parameters")
    p.add_argument("--params", required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--noise", type=_nonnegative_float, default=0.0,
                   help="Gaussian sigma in meters")
    p.add_argument("--visible", type=_fraction, default=1.0,
                   help="visible fraction in (0, 1]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("grid", help="show the shape category table")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=_cmd_grid)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"sqkit: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except json.JSONDecodeError as exc:
        print(f"sqkit: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"sqkit: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
