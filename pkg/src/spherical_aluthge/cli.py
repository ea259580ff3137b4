"""Command-line interface.

Exit codes: 0 success, 1 input or validation error, 2 numerical failure,
3 a reproduction check failed.
"""

import argparse
from dataclasses import asdict, dataclass
import logging
import os
import sys

import numpy as np

from . import io as tio
from .errors import AluthgeError, NotCommuting, NumericalFailure, SizeGuard
from .koszul import GridSlice, grid_scan, joint_eigenvalues, membership_report
from .linalg import RANK_TOL
from .models import STYLES, corpus, ex14_pair, ex24_pair, ex41_matrix, random_commuting
from .polar import aluthge, iterate, spherical_polar
from .radius import radius_report
from .reproduce import CASES, ReproConfig, run_case
from .tuples import COMMUTE_TOL, PointCd

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_CHECK = 0, 1, 2, 3

log = logging.getLogger("spherical_aluthge")


class InputError(Exception):
    """Bad command-line arguments or input files (exit code 1)."""


@dataclass
class RunConfig:
    t: float = 0.5
    max_iter: int = 500
    stop_tol: float = 1e-9
    rank_tol: float = RANK_TOL
    k_max: int = 40
    seed: int = 7
    format: str = "json"
    out: str = None

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise InputError(f"--t must lie in [0, 1], got {self.t}")
        for name in ("stop_tol", "rank_tol"):
            if not getattr(self, name) > 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.max_iter < 1:
            raise InputError("--max-iter must be >= 1")
        if self.k_max < 2:
            raise InputError("--k-max must be >= 2")
        if self.format not in ("json", "csv"):
            raise InputError("--format must be json or csv")

    def echo(self):
        cfg = asdict(self)
        cfg.pop("out")
        return cfg


# ---------------------------------------------------------------------------
# helpers


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_tuple(path, commute_tol=COMMUTE_TOL):
    tf = tio.load(path)
    return tf.to_tuple(commute_tol), tf


def _matrix(m):
    return tio.encode_matrix(m)


def _point(p):
    return [[float(c.real), float(c.imag)] for c in p]


def _parse_point(text, d):
    try:
        coords = [complex(part.strip().replace(" ", "")) for part in text.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse point {text!r}: {exc}") from exc
    if len(coords) != d:
        raise InputError(f"point {text!r} has {len(coords)} coordinates, tuple has d={d}")
    return PointCd(coords)


# ---------------------------------------------------------------------------
# subcommands


def cmd_transform(args, cfg):
    T, _ = _load_tuple(args.input)
    polar = spherical_polar(T, cfg.rank_tol)
    D = aluthge(T, cfg.t, rel_tol=cfg.rank_tol, polar=polar)
    if cfg.format != "json":
        raise InputError("transform writes JSON only")
    payload = {
        "config": cfg.echo(),
        "n": T.n,
        "d": T.d,
        "rank_P": polar.rank,
        "P": _matrix(polar.P),
        "V": [_matrix(v) for v in polar.V],
        "transform": [_matrix(m) for m in D],
        "residuals": dict(polar.residuals, commutator=D.commutator_residual),
    }
    _emit(tio.to_json(payload), cfg.out)
    return EXIT_OK


def cmd_iterate(args, cfg):
    T, _ = _load_tuple(args.input)
    try:
        trace = iterate(T, cfg.t, cfg.max_iter, cfg.stop_tol, cfg.rank_tol)
    except NumericalFailure as exc:
        if exc.trace is not None:
            _emit(_trace_csv(exc.trace), cfg.out)
        raise
    if cfg.format == "csv":
        _emit(_trace_csv(trace), cfg.out)
    else:
        payload = {
            "config": cfg.echo(),
            "initial_norm": trace.initial_norm,
            "converged": trace.converged,
            "stop_reason": trace.stop_reason,
            "oscillating": trace.oscillating,
            "limit_estimate": trace.limit_estimate,
            "trace": [asdict(e) for e in trace.entries],
        }
        _emit(tio.to_json(payload), cfg.out)
    return EXIT_OK


def _trace_csv(trace):
    rows = [(e.n, e.norm2, e.delta, e.commutator_residual) for e in trace.entries]
    return tio.to_csv(["n", "norm2", "delta", "commutator_residual"], rows)


def cmd_radius(args, cfg):
    T, _ = _load_tuple(args.input)
    t = cfg.t if cfg.t > 0 else 0.5
    rep = radius_report(T, t=t, k_max=cfg.k_max, max_iter=cfg.max_iter, stop_tol=cfg.stop_tol)
    for w in rep.metadata["aluthge"]["warnings"]:
        log.warning("%s", w)
    if cfg.format == "csv":
        rows = [(name, value) for name, value in rep.estimates.items()]
        rows.append(("two_norm", rep.two_norm))
        _emit(tio.to_csv(["method", "estimate"], rows), cfg.out)
    else:
        payload = {
            "config": cfg.echo(),
            "estimates": rep.estimates,
            "two_norm": rep.two_norm,
            "spread": rep.spread,
            "metadata": rep.metadata,
        }
        _emit(tio.to_json(payload), cfg.out)
    return EXIT_OK


def _report_dict(rep):
    return {
        "point": _point(rep.point),
        "flags": rep.flags(),
        "homology": list(rep.homology),
        "sigma_min_left": rep.sigma_min_left,
        "sigma_min_right": rep.sigma_min_right,
        "essential": rep.essential,
        "index": rep.index,
    }


def cmd_spectrum(args, cfg):
    T, _ = _load_tuple(args.input)
    tol = args.membership_tol
    if args.grid_index is not None:
        grid = GridSlice(
            index=args.grid_index,
            re_range=tuple(args.re),
            im_range=tuple(args.im),
            resolution=tuple(args.resolution),
            fixed=tuple(_parse_point(args.fixed, T.d)) if args.fixed else (),
        )
        try:
            cells = grid_scan(T, grid, tol, workers=args.workers)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if cfg.format == "csv":
            first = cells[0][1] if cells else membership_report(T, (0,) * T.d, tol)
            header = ["re", "im"] + list(first.flags()) + [f"h{p}" for p in range(T.d + 1)]
            rows = []
            for p, rep in cells:
                z = p[grid.index]
                rows.append([z.real, z.imag] + [int(v) for v in rep.flags().values()] + list(rep.homology))
            _emit(tio.to_csv(header, rows), cfg.out)
        else:
            _emit(tio.to_json({"config": cfg.echo(), "reports": [_report_dict(r) for _, r in cells]}), cfg.out)
        return EXIT_OK
    if args.point:
        points = [_parse_point(p, T.d) for p in args.point]
        eig = None
    else:
        eig = joint_eigenvalues(T, seed=cfg.seed)
        points = eig
    reports = [membership_report(T, p, tol) for p in points]
    if cfg.format == "csv":
        header = []
        for i in range(T.d):
            header += [f"re{i}", f"im{i}"]
        header += list(reports[0].flags()) if reports else []
        header += [f"h{p}" for p in range(T.d + 1)]
        rows = []
        for rep in reports:
            row = []
            for c in rep.point:
                row += [c.real, c.imag]
            rows.append(row + [int(v) for v in rep.flags().values()] + list(rep.homology))
        _emit(tio.to_csv(header, rows), cfg.out)
    else:
        payload = {"config": cfg.echo(), "reports": [_report_dict(r) for r in reports]}
        if eig is not None:
            payload["joint_eigenvalues"] = [_point(p) for p in eig]
        _emit(tio.to_json(payload), cfg.out)
    return EXIT_OK


def cmd_reproduce(args, cfg):
    if args.case not in CASES and args.case != "all":
        raise InputError(f"unknown case {args.case!r}; choose from {', '.join(CASES)} or all")
    config = ReproConfig(
        seed=cfg.seed,
        corpus_size=args.corpus_size,
        max_iter=cfg.max_iter,
        stop_tol=cfg.stop_tol,
        k_max=cfg.k_max,
        workers=args.workers,
    )
    cases = CASES if args.case == "all" else (args.case,)
    reports = [run_case(c, config) for c in cases]
    if cfg.format == "csv":
        rows = [
            (r.case, c.name, c.anchor, c.residual, c.tolerance, c.passed)
            for r in reports
            for c in r.checks
        ]
        _emit(tio.to_csv(["case", "check", "anchor", "residual", "tolerance", "passed"], rows), cfg.out)
    else:
        payload = {"reports": [r.as_dict() for r in reports]}
        _emit(tio.to_json(payload), cfg.out)
    for r in reports:
        for c in r.checks:
            if not c.passed:
                log.error("%s: %s failed (residual %.3e > %.1e)", r.case, c.name, c.residual, c.tolerance)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK


def cmd_model(args, cfg):
    name = args.builder
    meta = {"builder": name}
    if name == "ex41":
        T = ex41_matrix(args.k).tuple
        meta["k"] = args.k
    elif name == "ex14":
        T = ex14_pair(args.N).tuple
        meta["N"] = args.N
    elif name == "ex24":
        T = ex24_pair(args.N).tuple
        meta["N"] = args.N
    elif name == "random":
        T = random_commuting(cfg.seed, args.n, args.d, args.style).tuple
        meta.update(seed=cfg.seed, n=args.n, d=args.d, style=args.style)
    else:  # corpus
        samples = corpus(cfg.seed, args.corpus_size)
        if not 0 <= args.index < len(samples):
            raise InputError(f"--index must lie in [0, {len(samples)})")
        T = samples[args.index].tuple
        meta.update(seed=cfg.seed, index=args.index, corpus_size=args.corpus_size)
    _emit(tio.dumps(tio.TupleFile.from_tuple(T, meta)), cfg.out)
    return EXIT_OK


COMMANDS = {
    "transform": cmd_transform,
    "iterate": cmd_iterate,
    "radius": cmd_radius,
    "spectrum": cmd_spectrum,
    "reproduce": cmd_reproduce,
    "model": cmd_model,
}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--t", type=float, default=0.5, help="transform exponent in [0, 1]")
    common.add_argument("--max-iter", type=int, default=500)
    common.add_argument("--stop-tol", type=float, default=1e-9, help="norm-stall tolerance")
    common.add_argument("--rank-tol", type=float, default=RANK_TOL, help="relative rank cutoff")
    common.add_argument("--k-max", type=int, default=40, help="largest power for the power formula")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--workers", type=int, default=1, help="thread-pool size for scans")

    parser = argparse.ArgumentParser(
        prog="spherical-aluthge",
        description="Spherical Aluthge transforms, Koszul spectra and joint spectral radii of commuting matrix tuples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", parents=[common], help="polar factors and Delta_t(T)")
    p.add_argument("input")
    p = sub.add_parser("iterate", parents=[common], help="norm trace of the Delta_t iterates")
    p.add_argument("input")
    p = sub.add_parser("radius", parents=[common], help="four joint spectral radius estimates")
    p.add_argument("input")

    p = sub.add_parser("spectrum", parents=[common], help="spectral membership at points or on a grid")
    p.add_argument("input")
    p.add_argument("--point", action="append", help="comma-separated complex coordinates, e.g. '1+2j,0'")
    p.add_argument("--grid-index", type=int, default=None, help="coordinate swept by the grid")
    p.add_argument("--re", type=float, nargs=2, default=(-1.0, 1.0), metavar=("MIN", "MAX"))
    p.add_argument("--im", type=float, nargs=2, default=(-1.0, 1.0), metavar=("MIN", "MAX"))
    p.add_argument("--resolution", type=int, nargs=2, default=(21, 21), metavar=("NRE", "NIM"))
    p.add_argument("--fixed", default=None, help="values of the other coordinates")
    p.add_argument("--membership-tol", type=float, default=1e-8)

    p = sub.add_parser("reproduce", parents=[common], help="run a reproduction case")
    p.add_argument("case", help=f"one of {', '.join(CASES)} or all")
    p.add_argument("--corpus-size", type=int, default=50)

    p = sub.add_parser("model", parents=[common], help="write a tuple file from a builder")
    p.add_argument("builder", choices=("ex41", "ex14", "ex24", "random", "corpus"))
    p.add_argument("--k", type=float, default=2.0)
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--style", choices=STYLES, default="diagonalizable")
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--corpus-size", type=int, default=50)
    return parser


DEFAULT_FORMAT = {"iterate": "csv", "spectrum": None}


def _setup_logging():
    color = sys.stderr.isatty() and not os.environ.get("NO_COLOR")
    fmt = "\033[31m%(levelname)s\033[0m: %(message)s" if color else "%(levelname)s: %(message)s"
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(fmt))
    root = logging.getLogger("spherical_aluthge")
    root.handlers[:] = [handler]
    root.setLevel(logging.WARNING)
    root.propagate = False


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    fmt = args.format
    if fmt is None:
        fmt = DEFAULT_FORMAT.get(args.command) or "json"
        if args.command == "spectrum" and args.grid_index is not None:
            fmt = "csv"
    try:
        cfg = RunConfig(
            t=args.t,
            max_iter=args.max_iter,
            stop_tol=args.stop_tol,
            rank_tol=args.rank_tol,
            k_max=args.k_max,
            seed=args.seed,
            format=fmt,
            out=args.out,
        )
        if args.workers < 1:
            raise InputError("--workers must be >= 1")
        return COMMANDS[args.command](args, cfg)
    except (InputError, tio.TupleFileError, NotCommuting, SizeGuard, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except (NumericalFailure, AluthgeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
