"""Command-line entry point.

    orthoglide eig X Y Z
    orthoglide check-box XLO XHI YLO YHI ZLO ZHI
    orthoglide workspace [--epsilon E] [--output PATH --format json|csv|obj]
    orthoglide cube [--alpha A] [--output PATH]

Defaults for the option flags may also come from ``ORTHOGLIDE_<FLAG>``
environment variables (``ORTHOGLIDE_SIGMA_MIN``, ``ORTHOGLIDE_EPSILON``, ...).
Exit codes: 0 ok, 1 internal error, 2 bad input, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .certify import classify
from .cube import CubeParams, largest_cube
from .export import cube_to_json, write_workspace
from .interval import Box
from .kinematics import (
    DomainError,
    TransmissionSpec,
    det_A,
    in_domain,
    inverse_kinematics,
    parallel_singularity_at,
    serial_singularity_at,
    spectra,
)
from .workspace import WorkspaceParams, compute_workspace

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3
ENV_PREFIX = "ORTHOGLIDE_"


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    sigma_min: float = 0.25
    sigma_max: float = 4.0
    epsilon: float = 0.05
    alpha: float = 0.001
    output: str | None = None
    format: str = "json"
    workers: int = 1

    def to_dict(self) -> dict:
        d = asdict(self)
        d["version"] = __version__
        return d


def _env(name: str, conv, default):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    try:
        return conv(raw)
    except ValueError:
        raise InputError(f"bad value for {ENV_PREFIX}{name.upper()}: {raw!r}") from None


def _finite(s: str) -> float:
    v = float(s)
    if not math.isfinite(v):
        raise ValueError(s)
    return v


def _spec_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sigma-min", type=_finite, default=_env("sigma_min", _finite, 0.25))
    p.add_argument("--sigma-max", type=_finite, default=_env("sigma_max", _finite, 4.0))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orthoglide", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eig", help="spectrum of JJ^T at a point")
    for a in "xyz":
        p.add_argument(a, type=_finite)

    p = sub.add_parser("check-box", help="classify one box")
    for a in ("xlo", "xhi", "ylo", "yhi", "zlo", "zhi"):
        p.add_argument(a, type=_finite)
    _spec_options(p)

    p = sub.add_parser("workspace", help="certified inner approximation of the dextrous workspace")
    _spec_options(p)
    p.add_argument("--epsilon", type=_finite, default=_env("epsilon", _finite, 0.05))
    p.add_argument("--output", default=_env("output", str, None))
    p.add_argument("--format", choices=("json", "csv", "obj"), default=_env("format", str, "json"))
    p.add_argument("--workers", type=int, default=_env("workers", int, 1))

    p = sub.add_parser("cube", help="largest enclosed axis-aligned cube")
    _spec_options(p)
    p.add_argument("--alpha", type=_finite, default=_env("alpha", _finite, 0.001))
    p.add_argument("--output", default=_env("output", str, None), help="JSON file for the result")
    p.add_argument("--workers", type=int, default=_env("workers", int, 1))
    return parser


def _fmt(v) -> str:
    return ",".join(repr(float(t)) for t in np.atleast_1d(v))


def cmd_eig(args) -> int:
    p = np.array([args.x, args.y, args.z])
    if not in_domain(p):
        raise InputError(f"point {tuple(float(v) for v in p)} is outside the reachable region")
    st = inverse_kinematics(p)
    sigma = spectra(p[None, :])[0]
    print(f"sigma={_fmt(sigma)}")
    print(f"psi={_fmt(np.sqrt(sigma))}")
    print(f"det_A={det_A(p)!r}")
    print(f"eta={_fmt(st.eta)}")
    print(f"serial_singularity={str(serial_singularity_at(p)).lower()}")
    print(f"parallel_singularity={str(parallel_singularity_at(p)).lower()}")
    return EXIT_OK


def _spec(args) -> TransmissionSpec:
    try:
        return TransmissionSpec(args.sigma_min, args.sigma_max)
    except ValueError as e:
        raise InputError(str(e)) from None


def cmd_check_box(args) -> int:
    spec = _spec(args)
    try:
        box = Box.from_bounds([args.xlo, args.ylo, args.zlo], [args.xhi, args.yhi, args.zhi])
    except ValueError as e:
        raise InputError(str(e)) from None
    bc = classify(box, spec)
    print(f"verdict={bc.verdict.name.lower()} domain={bc.domain.name.lower()}")
    return EXIT_OK


def _config(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        sigma_min=args.sigma_min,
        sigma_max=args.sigma_max,
        epsilon=getattr(args, "epsilon", 0.05),
        alpha=getattr(args, "alpha", 0.001),
        output=args.output,
        format=getattr(args, "format", "json"),
        workers=args.workers,
    )


def cmd_workspace(args) -> int:
    cfg = _config(args)
    try:
        params = WorkspaceParams(_spec(args), epsilon=cfg.epsilon, workers=cfg.workers)
    except ValueError as e:
        raise InputError(str(e)) from None
    r = compute_workspace(params)
    if cfg.output:
        write_workspace(r, cfg.output, cfg.format, cfg.to_dict())
    print(f"inside_volume={r.inside_volume!r} error_index={r.error_index!r} boxes={len(r)}")
    return EXIT_OK


def cmd_cube(args) -> int:
    cfg = _config(args)
    try:
        params = CubeParams(_spec(args), alpha=cfg.alpha)
    except ValueError as e:
        raise InputError(str(e)) from None
    r = largest_cube(params)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            json.dump(cube_to_json(r, cfg.to_dict()), fh)
    print(f"center={_fmt(r.center)} edge={r.edge!r} guarantee={r.guarantee!r} certified={str(r.certified).lower()}")
    return EXIT_OK


COMMANDS = {"eig": cmd_eig, "check-box": cmd_check_box, "workspace": cmd_workspace, "cube": cmd_cube}


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse reports usage errors with status 2
        return int(e.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except (InputError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except Exception as e:  # pragma: no cover - last-resort guard
        logging.getLogger(__name__).exception("internal error")
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
