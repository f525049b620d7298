"""Command line interface.

One subcommand per operation.  Options may come from a ``--config`` file
of ``key=value`` lines, where each key is the option name with
underscores (``t_lo=0.01``); explicit flags always win over the file.

Exit codes: 0 for success (including an on-ray separation verdict),
2 for violated preconditions or malformed input, 3 for numerical or
resource failures, 4 for an inconclusive separation.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .addresses import dist, parse_address
from .approximation import approximate_misiurewicz, classify_misiurewicz
from .errors import (
    AlphabetMismatch,
    BoundaryHit,
    BoundaryOrbit,
    DegreeTooSmall,
    ExpraysError,
    InvalidAddress,
    InvalidBase,
    NotPeriodic,
    PeriodMismatch,
    PreconditionError,
)
from .itineraries import itinerary
from .portraits import CharacteristicPair, is_characteristic_pair, portrait_classes
from .rays import RayTrace, trace_dynamic_ray, trace_parameter_ray
from .render import RenderJob, Window, render
from .separation import INCONCLUSIVE, verify_fiber_separation
from .solvers import (
    find_misiurewicz_parameter,
    find_parabolic_root,
    find_periodic_point,
)

PRECONDITION_ERRORS = (
    PreconditionError,
    InvalidAddress,
    InvalidBase,
    AlphabetMismatch,
    PeriodMismatch,
    DegreeTooSmall,
    NotPeriodic,
    BoundaryHit,
    BoundaryOrbit,
)


def parse_epsilon(text: str) -> Fraction:
    """Accept 2^-8, 1/256, or a decimal such as 0.00390625."""
    t = text.strip()
    m = re.fullmatch(r"2\^(-?\d+)", t)
    if m:
        return Fraction(2) ** int(m.group(1))
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"cannot read {text!r} as a tolerance") from exc


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError as exc:
        raise PreconditionError(f"cannot read {text!r} as a complex number") from exc


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _apply_config(argv: List[str]) -> List[str]:
    """Fold key=value lines from a --config file into the argument list,
    skipping keys the command line already sets."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise PreconditionError("--config needs a file path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    extra: List[str] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise PreconditionError(f"cannot read config file {path}: {exc}") from exc
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise PreconditionError(f"config line {line!r} is not key=value")
        opt = "--" + key.strip().replace("_", "-")
        if opt in rest:
            continue
        extra.extend([opt, val.strip()])
    return rest + extra


def _addr(args: argparse.Namespace, attr: str = "address"):
    return parse_address(getattr(args, attr), getattr(args, "degree", None))


def cmd_addr(args: argparse.Namespace) -> int:
    a = _addr(args)
    print(f"canonical {a}")
    print(f"alphabet {a.alphabet}")
    print(f"preperiod {a.preperiod_length}")
    print(f"period {a.period_length}")
    if a.alphabet.is_cyclic:
        print(f"angle {a.angle()}")
    if args.dist is not None:
        b = parse_address(args.dist, args.degree)
        print(f"dist {dist(a, b)}")
    if args.base is not None:
        base = parse_address(args.base, args.degree)
        print(f"itinerary {itinerary(a, base)}")
    return 0


def cmd_portrait(args: argparse.Namespace) -> int:
    base = parse_address(args.base, args.degree)
    portraits = portrait_classes(args.period, args.bound, base)
    print(f"portraits {len(portraits)}")
    for idx, por in enumerate(portraits):
        print(
            f"portrait {idx} orbit_period={por.orbit_period} "
            f"rays_per_point={por.rays_per_point} "
            f"address_period={por.address_period}"
        )
        for cls in por.classes:
            print("  class " + "  ".join(f'"{a}"' for a in cls))
    return 0


def cmd_characteristic(args: argparse.Namespace) -> int:
    lower = parse_address(args.lower, args.degree)
    upper = parse_address(args.upper, args.degree)
    verdict = is_characteristic_pair(lower, upper)
    print("characteristic" if verdict else "not characteristic")
    return 0


def cmd_approx(args: argparse.Namespace) -> int:
    s = _addr(args)
    combo = classify_misiurewicz(s, args.bound)
    print(
        f"class preperiod={combo.preperiod} period={combo.period} "
        f"rays={combo.ray_count}"
    )
    for a in combo.addresses:
        print(f'  ray "{a}"')
    result = approximate_misiurewicz(combo, parse_epsilon(args.epsilon))
    for line in result.lines():
        print(line)
    return 0


def _emit_trace(trace: RayTrace, out: Optional[str]) -> None:
    if out:
        trace.write_text(out)
    else:
        for line in trace.format_lines():
            print(line)


def cmd_trace_ray(args: argparse.Namespace) -> int:
    s = _addr(args)
    c = parse_complex(args.c)
    trace = trace_dynamic_ray(
        c,
        s,
        args.t_lo,
        args.t_hi,
        args.tol,
        samples=args.samples,
        collision_radius=args.collision_radius,
    )
    _emit_trace(trace, args.out)
    return 0


def cmd_trace_param_ray(args: argparse.Namespace) -> int:
    s = _addr(args)
    trace = trace_parameter_ray(
        s, args.t_lo, args.t_hi, args.tol, samples=args.samples
    )
    _emit_trace(trace, args.out)
    return 0


def cmd_periodic_point(args: argparse.Namespace) -> int:
    s = _addr(args)
    c = parse_complex(args.c)
    result = find_periodic_point(c, s)
    print(f"point {format_complex(result.point)}")
    print(f"period {result.period}")
    print(f"multiplier {format_complex(result.multiplier)}")
    print(f"residual {result.residual:.6g}")
    return 0


def cmd_misiurewicz(args: argparse.Namespace) -> int:
    s = _addr(args)
    result = find_misiurewicz_parameter(s, args.preperiod, args.period)
    print(f"parameter {format_complex(result.parameter)}")
    print(f"orbit_point {format_complex(result.orbit_point)}")
    print(f"preperiod {result.preperiod}")
    print(f"period {result.period}")
    print(f"multiplier {format_complex(result.multiplier)}")
    return 0


def cmd_parabolic(args: argparse.Namespace) -> int:
    lower = parse_address(args.lower, args.degree)
    upper = parse_address(args.upper, args.degree)
    pair = CharacteristicPair.of(lower, upper)
    root = find_parabolic_root(pair)
    print(f"parameter {format_complex(root.parameter)}")
    print(f"point {format_complex(root.point)}")
    print(f"orbit_period {root.orbit_period}")
    print(f"address_period {root.address_period}")
    print(f"multiplier {format_complex(root.multiplier)}")
    return 0


def cmd_separate(args: argparse.Namespace) -> int:
    s = _addr(args)
    combo = classify_misiurewicz(s, args.bound)
    certificate = verify_fiber_separation(
        combo,
        parse_complex(args.probe),
        start_power=args.start_power,
        max_power=args.max_power,
        trace_samples=args.samples,
    )
    print(certificate.to_text())
    return 4 if certificate.verdict == INCONCLUSIVE else 0


def cmd_render(args: argparse.Namespace) -> int:
    window = Window.from_width(
        parse_complex(args.center), args.width, args.px, args.py
    )
    c = parse_complex(args.c) if args.c is not None else None
    job = RenderJob(
        window,
        args.kind,
        c,
        max_iter=args.max_iter,
        escape_real=args.escape_real,
    )
    overlays = []
    for path in args.overlay or []:
        with open(path, "r", encoding="utf-8") as fh:
            overlays.append(RayTrace.parse_text(fh.read()).points())
    render(job, args.out, overlays=overlays)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        help="file of key=value option defaults; explicit flags win",
    )
    common.add_argument(
        "--degree",
        type=int,
        default=None,
        help="work over the finite cyclic alphabet of this degree",
    )

    parser = argparse.ArgumentParser(
        prog="exprays",
        description="Combinatorics and numerics of rays for exp(z) + c",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("addr", parents=[common], help="inspect an address")
    p.add_argument("address")
    p.add_argument("--dist", default=None, help="second address to measure against")
    p.add_argument("--base", default=None, help="base address for an itinerary")
    p.set_defaults(func=cmd_addr)

    p = sub.add_parser(
        "portrait", parents=[common], help="orbit portraits of one period"
    )
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--base", required=True)
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser(
        "characteristic",
        parents=[common],
        help="test a pair of periodic addresses",
    )
    p.add_argument("lower")
    p.add_argument("upper")
    p.set_defaults(func=cmd_characteristic)

    p = sub.add_parser(
        "approx",
        parents=[common],
        help="approximating ray pairs for a preperiodic address",
    )
    p.add_argument("address")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--epsilon", required=True)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser(
        "trace-ray", parents=[common], help="trace a dynamic ray"
    )
    p.add_argument("address")
    p.add_argument("--c", required=True)
    p.add_argument("--t-lo", type=float, required=True)
    p.add_argument("--t-hi", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--samples", type=int, default=120)
    p.add_argument("--collision-radius", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_trace_ray)

    p = sub.add_parser(
        "trace-param-ray", parents=[common], help="trace a parameter ray"
    )
    p.add_argument("address")
    p.add_argument("--t-lo", type=float, required=True)
    p.add_argument("--t-hi", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--samples", type=int, default=120)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_trace_param_ray)

    p = sub.add_parser(
        "periodic-point",
        parents=[common],
        help="landing point of a periodic dynamic ray",
    )
    p.add_argument("address")
    p.add_argument("--c", required=True)
    p.set_defaults(func=cmd_periodic_point)

    p = sub.add_parser(
        "misiurewicz",
        parents=[common],
        help="parameter with a strictly preperiodic singular value",
    )
    p.add_argument("address")
    p.add_argument("--preperiod", type=int, required=True)
    p.add_argument("--period", type=int, required=True)
    p.set_defaults(func=cmd_misiurewicz)

    p = sub.add_parser(
        "parabolic",
        parents=[common],
        help="wake root of a characteristic pair",
    )
    p.add_argument("lower")
    p.add_argument("upper")
    p.set_defaults(func=cmd_parabolic)

    p = sub.add_parser(
        "separate",
        parents=[common],
        help="separate a probe parameter from a preperiodic one",
    )
    p.add_argument("address")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--probe", required=True)
    p.add_argument("--start-power", type=int, default=4)
    p.add_argument("--max-power", type=int, default=9)
    p.add_argument("--samples", type=int, default=160)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("render", parents=[common], help="escape time picture")
    p.add_argument("--kind", choices=["dynamic", "parameter"], required=True)
    p.add_argument("--c", default=None)
    p.add_argument("--center", required=True)
    p.add_argument("--width", type=float, required=True)
    p.add_argument("--px", type=int, default=400)
    p.add_argument("--py", type=int, default=400)
    p.add_argument("--max-iter", type=int, default=60)
    p.add_argument("--escape-real", type=float, default=50.0)
    p.add_argument("--overlay", action="append", help="ray trace file to draw")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    raw = list(sys.argv[1:] if argv is None else argv)
    try:
        expanded = _apply_config(raw)
        parser = build_parser()
        args = parser.parse_args(expanded)
        return args.func(args)
    except PRECONDITION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ExpraysError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
