"""``eigres`` command line.

Exit codes: 0 success, 2 usage/parse error, 3 invalid input, 4 numerical
failure, 5 internal or I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io
from .blowup2 import eigenline_atlas, pauli_coords, projective_chart, radial_lift, resolve_local
from .exceptions import EigresError, PatchDivisionByZero, ValidationError
from .hermitian import eigendecompose, random_hermitian
from .isotropy import FLAVORS, isotropy_index, schedule
from .paths import BUILTINS, MatrixPath, builtin_path, probe_smoothness, track_cluster, track_eigenlines
from .riesz import DEFAULT_NODES, DEFAULT_REL_TOL, detect_gaps, multi_split, split_at_gap

DEFAULT_STEPS = 256


def _positive(kind):
    def conv(text):
        val = kind(text)
        if val <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return val
    return conv


def _at_least(lo):
    def conv(text):
        val = int(text)
        if val < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {text}")
        return val
    return conv


def _default_seed(fallback: int = 0) -> int:
    env = os.environ.get("EIGRES_SEED")
    try:
        return int(env) if env else fallback
    except ValueError:
        return fallback


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eigres", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def matrix_source(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--input", help="matrix JSON file")
        g.add_argument("--random", type=_at_least(1), metavar="N", help="draw an N x N GUE matrix")
        sp.add_argument("--seed", type=int, default=_default_seed(),
                        help="seed for --random (default: $EIGRES_SEED or 0)")
        sp.add_argument("--tol", type=_positive(float), default=io.DEFAULT_TOL,
                        help="Hermitian validation tolerance (default: %(default)g)")

    def numerics(sp):
        sp.add_argument("--nodes", type=_at_least(8), default=DEFAULT_NODES,
                        help="contour quadrature nodes (default: %(default)s)")
        sp.add_argument("--rel-tol", type=_positive(float), default=DEFAULT_REL_TOL,
                        help="eigenvalue clustering tolerance (default: %(default)g)")

    sp = sub.add_parser("analyze", help="spectrum, isotropy index and clusters")
    matrix_source(sp)
    numerics(sp)
    sp.add_argument("--out", help="write a JSON report here")

    sp = sub.add_parser("split", help="commuting block split at a gap or at every cluster gap")
    matrix_source(sp)
    numerics(sp)
    sp.add_argument("--cut", type=float, help="split at this gap (default: every detected gap)")
    sp.add_argument("--out", help="write blocks as JSON here")

    sp = sub.add_parser("schedule", help="blow-up schedule for S(n)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--flavor", choices=FLAVORS, default="radial")
    sp.add_argument("--out", help="write the schedule JSON here")

    sp = sub.add_parser("lift", help="ball/chart coordinates of a 2x2, or local resolution of a pair")
    matrix_source(sp)
    sp.add_argument("--nodes", type=_at_least(8), default=DEFAULT_NODES,
                    help="contour quadrature nodes (default: %(default)s)")
    sp.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"),
                    help="isolate a two-eigenvalue cluster (required for n > 2)")
    sp.add_argument("--direction", type=float, nargs=3, metavar=("A", "C", "D"),
                    help="front-face direction used at the origin")
    sp.add_argument("--out", help="write the lift as JSON here")

    sp = sub.add_parser("track", help="track eigenlines or a cluster along sampled matrices")
    sp.add_argument("--input", nargs="+", required=True, help="matrix JSON files in path order")
    sp.add_argument("--tol", type=_positive(float), default=io.DEFAULT_TOL,
                    help="Hermitian validation tolerance (default: %(default)g)")
    sp.add_argument("--cut", type=float, help="track the cluster below this cut (default: eigenlines)")
    sp.add_argument("--nodes", type=_at_least(8), default=DEFAULT_NODES,
                    help="contour quadrature nodes (default: %(default)s)")
    sp.add_argument("--out", help="write the trajectory CSV here")

    sp = sub.add_parser("demo", help="run a builtin path")
    sp.add_argument("--name", choices=BUILTINS, required=True)
    sp.add_argument("--steps", type=_at_least(16), default=DEFAULT_STEPS,
                    help="path steps (default: %(default)s)")
    sp.add_argument("--turns", type=int, choices=(1, 2), default=1, help="loop2x2 traversals")
    sp.add_argument("--seed", type=int, default=None,
                    help="ray3 conjugation seed (default: $EIGRES_SEED or 3)")
    sp.add_argument("--nodes", type=_at_least(8), default=DEFAULT_NODES,
                    help="contour quadrature nodes (default: %(default)s)")
    sp.add_argument("--out", help="write the trajectory CSV here")
    return p


def _load(args) -> np.ndarray:
    if args.input is not None:
        return io.read_matrix_json(args.input, args.tol)
    return random_hermitian(args.random, args.seed)


def _floats(a) -> list:
    return [float(x) for x in np.asarray(a).ravel()]


def cmd_analyze(args) -> int:
    X = _load(args)
    dec = eigendecompose(X)
    part = detect_gaps(dec.values, args.rel_tol)
    idx = isotropy_index(dec.values, args.rel_tol)
    report = {
        "n": int(X.shape[0]),
        "eigenvalues": _floats(dec.values),
        "isotropyIndex": list(idx.indices),
        "clusters": {"sizes": list(part.sizes), "cuts": list(part.cuts),
                     "gapWidths": list(part.gap_widths)},
    }
    print(f"n: {X.shape[0]}")
    print("eigenvalues: " + " ".join(f"{v:.12g}" for v in dec.values))
    print(f"isotropy index: {idx}")
    print(f"clusters: {len(part.sizes)} with sizes {list(part.sizes)}")
    if args.out:
        io.write_json(report, args.out)
    return 0


def cmd_split(args) -> int:
    X = _load(args)
    if args.cut is not None:
        sp = split_at_gap(X, args.cut, args.nodes)
        blocks = [sp.L, sp.R]
        ranks = [sp.k, X.shape[0] - sp.k]
        report = {"cut": args.cut, "k": sp.k}
    else:
        part = detect_gaps(eigendecompose(X).values, args.rel_tol)
        blocks, _ = multi_split(X, part, args.nodes)
        ranks = list(part.sizes)
        report = {"cuts": list(part.cuts)}
    err = float(np.linalg.norm(sum(blocks) - X))
    comm = max((float(np.linalg.norm(a @ b - b @ a)) for i, a in enumerate(blocks)
                for b in blocks[i + 1:]), default=0.0)
    report.update(ranks=ranks, blocks=[io.matrix_to_obj(b) for b in blocks],
                  reconstructionError=err, maxCommutator=comm)
    print(f"blocks: {len(blocks)} with ranks {ranks}")
    print(f"||sum - X||_F = {err:.3e}, max ||[B_i, B_j]||_F = {comm:.3e}")
    if args.out:
        io.write_json(report, args.out)
    return 0


def cmd_schedule(args) -> int:
    sched = schedule(args.n, args.flavor)
    print(sched.dumps())
    if args.out:
        io.write_json(sched.to_json(), args.out)
    return 0


def cmd_lift(args) -> int:
    X = _load(args)
    n = X.shape[0]
    if args.bracket is not None:
        res = resolve_local(X, tuple(args.bracket), args.nodes)
        report = {
            "mu": res.mu, "r": res.r,
            "theta": None if res.theta is None else _floats(res.theta),
            "liftedValues": list(res.lifted_values),
        }
        print(f"mu = {res.mu:.12g}, r = {res.r:.12g}")
        print(f"lifted values: {res.lifted_values[0]:.12g} {res.lifted_values[1]:.12g}")
    elif n == 2:
        b = pauli_coords(X)
        pt = radial_lift(b, args.direction)
        report = {"ball": {"a": b.a, "c": b.c, "d": b.d, "tau": b.tau},
                  "radial": {"r": pt.r, "theta": _floats(pt.theta)},
                  "liftedValues": list(pt.lifted_values)}
        try:
            pj = projective_chart(None, b)
            report["projective"] = {"patch": pj.chart, "coords": list(pj.coords)}
        except PatchDivisionByZero:
            report["projective"] = None
        lines = eigenline_atlas(pt.theta)
        report["eigenlines"] = {
            "plus": {"re": _floats(lines.plus.real), "im": _floats(lines.plus.imag)},
            "minus": {"re": _floats(lines.minus.real), "im": _floats(lines.minus.imag)},
            "formulas": list(lines.chart_used),
        }
        print(f"ball coordinates: a={b.a:.12g} c={b.c:.12g} d={b.d:.12g} tau={b.tau:.12g}")
        print(f"radial lift: r={pt.r:.12g} theta=" + " ".join(f"{x:.12g}" for x in pt.theta))
        print(f"lifted values: {pt.lifted_values[0]:.12g} {pt.lifted_values[1]:.12g}")
    else:
        raise ValidationError("lift needs a 2x2 matrix or --bracket LO HI")
    if args.out:
        io.write_json(report, args.out)
    return 0


def _print_report(report) -> None:
    s = report.summary()
    print(f"kind: {s['kind']}")
    print(f"permutation: {s['permutation']}")
    print("principal angles (rad): " + " ".join(f"{a:.6e}" for a in s["principalAnglesRad"]))
    print(f"closureResidual: {s['closureResidual']:.12g}")
    print(f"swapDetected: {'true' if s['swapDetected'] else 'false'}")


def cmd_track(args) -> int:
    if len(args.input) < 2:
        raise ValidationError("track needs at least two matrices")
    mats = [io.read_matrix_json(p, args.tol) for p in args.input]
    if len({m.shape for m in mats}) != 1:
        raise ValidationError("all matrices on a path must have the same size")
    path = MatrixPath(np.linspace(0.0, 1.0, len(mats)), np.array(mats))
    report = track_eigenlines(path) if args.cut is None else track_cluster(path, args.cut, args.nodes)
    _print_report(report)
    if args.out:
        io.write_report_csv(report, args.out)
    return 0


def cmd_demo(args) -> int:
    if args.name == "loop2x2":
        path = builtin_path("loop2x2", args.steps, turns=args.turns)
        report = track_eigenlines(path)
    elif args.name == "curve4x4":
        path = builtin_path("curve4x4", args.steps)
        report = track_cluster(path, 0.0, args.nodes)
    else:
        seed = args.seed if args.seed is not None else _default_seed(3)
        path = builtin_path("ray3", args.steps, seed=seed)
        report = track_cluster(path, 2.5, args.nodes)
        probe = probe_smoothness(path.func, 0.5, (-1.0, 2.5), nodes=args.nodes)
        print(f"lifted second-difference ratio max: {np.nanmax(probe.ratios):.6g}")
        print(f"raw eigenvalue derivative jump: {probe.raw_jump:.6g}")
    print(f"path: {args.name}, {len(path)} samples")
    _print_report(report)
    if args.out:
        io.write_report_csv(report, args.out)
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "split": cmd_split,
    "schedule": cmd_schedule,
    "lift": cmd_lift,
    "track": cmd_track,
    "demo": cmd_demo,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except EigresError as exc:
        print(f"eigres: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001
        print(f"eigres: internal error: {exc!r}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
