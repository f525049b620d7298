"""Certified separation of parameters by closed ray curves.

Two parameter rays of a characteristic pair, truncated at a large
potential and joined through the common root of their wake at the bottom
and by a chord between their far endpoints at the top, bound a closed
polygonal curve.  A point strictly inside and a point strictly outside
such a curve cannot lie in the same connected fiber.  This module builds
those curves from approximating pairs of a preperiodic landing class and
refines the approximation until a given probe parameter is separated
from the class's own parameter, or gives up explicitly.

Verdicts are conservative: "separated" is only reported when both points
lie strictly off a verified simple curve, on different sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .approximation import MisiurewiczCombinatorics, approximate_misiurewicz
from .errors import (
    BranchCut,
    NewtonDivergence,
    NotSimple,
    PreconditionError,
    SearchExhausted,
    SeedDisagreement,
)
from .portraits import CharacteristicPair
from .rays import TWO_PI, trace_parameter_ray
from .solvers import (
    MisiurewiczParameter,
    ParabolicRoot,
    find_misiurewicz_parameter,
    find_parabolic_root,
)

INSIDE = "inside"
OUTSIDE = "outside"
ON_CURVE = "on"

SEPARATED = "separated"
INCONCLUSIVE = "inconclusive"
ON_RAY = "on-ray"


def _orient(a: complex, b: complex, c: complex) -> float:
    return (b.real - a.real) * (c.imag - a.imag) - (b.imag - a.imag) * (
        c.real - a.real
    )


def _proper_cross(a: complex, b: complex, c: complex, d: complex) -> bool:
    o1 = _orient(a, b, c)
    o2 = _orient(a, b, d)
    o3 = _orient(c, d, a)
    o4 = _orient(c, d, b)
    return o1 * o2 < 0.0 and o3 * o4 < 0.0


def _point_segment_distance(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    denom = ab.real * ab.real + ab.imag * ab.imag
    if denom == 0.0:
        return abs(p - a)
    t = ((p.real - a.real) * ab.real + (p.imag - a.imag) * ab.imag) / denom
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return abs(p - (a + t * ab))


@dataclass(frozen=True)
class SeparatingCurve:
    """Closed polygon built from the two parameter rays of a pair.

    Vertices run down the lower ray, through the wake root, back up the
    upper ray; the edge from the last vertex to the first closes the
    polygon across the far ends of the two rays.
    """

    pair: CharacteristicPair
    root: ParabolicRoot
    vertices: Tuple[complex, ...]
    t_max: float

    def edges(self):
        n = len(self.vertices)
        for i in range(n):
            yield self.vertices[i], self.vertices[(i + 1) % n]

    def distance_to(self, p: complex) -> float:
        return min(_point_segment_distance(p, a, b) for a, b in self.edges())


def _check_simple(vertices: Tuple[complex, ...]) -> None:
    n = len(vertices)
    segs = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a, b = segs[i]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue  # adjacent through the closing edge
            c, d = segs[j]
            if _proper_cross(a, b, c, d):
                raise NotSimple(
                    f"curve edges {i} and {j} cross; the truncated wake "
                    "boundary is not a simple closed curve"
                )


def build_curve(
    pair: CharacteristicPair,
    *,
    t_min: float = 0.02,
    t_max: float = 20.0,
    samples: int = 160,
    asym_tol: float = 0.5,
) -> SeparatingCurve:
    """Closed curve from the two parameter rays of the pair.

    Each ray is traced from t_max down to t_min and the gap at the bottom
    is closed through the wake root.  The far endpoints must sit near
    their asymptotic positions t_max + 2 pi i (first entry); otherwise
    the closing chord could sweep across bounded parameters and the curve
    would certify nothing.
    """
    lo = trace_parameter_ray(pair.lower, t_min, t_max, samples=samples)
    hi = trace_parameter_ray(pair.upper, t_min, t_max, samples=samples)
    for tr, addr in ((lo, pair.lower), (hi, pair.upper)):
        if tr.truncated_at is not None:
            raise NewtonDivergence(
                f"parameter ray of {addr} could not be traced to t={t_min}"
            )
        far = tr.samples[0][1]
        target = complex(t_max, TWO_PI * addr.symbol(0))
        if abs(far - target) > asym_tol:
            raise PreconditionError(
                f"far endpoint {far:.4g} of the ray of {addr} is not near "
                f"its asymptotic position {target:.4g}; raise t_max"
            )
    root = find_parabolic_root(pair)
    verts: List[complex] = [z for (_, z) in lo.samples]
    verts.append(root.parameter)
    verts.extend(z for (_, z) in reversed(hi.samples))
    vertices = tuple(verts)
    _check_simple(vertices)
    return SeparatingCurve(pair, root, vertices, t_max)


def side_of(curve: SeparatingCurve, p: complex, *, margin: float = 1e-4) -> str:
    """INSIDE, OUTSIDE, or ON_CURVE (within margin of some edge)."""
    if curve.distance_to(p) < margin:
        return ON_CURVE
    inside = False
    for a, b in curve.edges():
        if (a.imag > p.imag) != (b.imag > p.imag):
            x = a.real + (p.imag - a.imag) * (b.real - a.real) / (b.imag - a.imag)
            if x > p.real:
                inside = not inside
    return INSIDE if inside else OUTSIDE


@dataclass(frozen=True)
class SeparationCertificate:
    """Outcome of a separation attempt between a preperiodic parameter
    and a probe parameter."""

    verdict: str
    target: complex
    probe: complex
    epsilon: Optional[Fraction]
    pair: Optional[CharacteristicPair]
    detail: str

    def to_text(self) -> str:
        lines = [f"verdict {self.verdict}"]
        lines.append(
            f"target {self.target.real:.17g}{self.target.imag:+.17g}i"
        )
        lines.append(f"probe {self.probe.real:.17g}{self.probe.imag:+.17g}i")
        if self.epsilon is not None:
            lines.append(f"epsilon {self.epsilon}")
        if self.pair is not None:
            lines.append(f'pair "{self.pair.lower}" "{self.pair.upper}"')
        if self.detail:
            lines.append(f"detail {self.detail}")
        return "\n".join(lines)


def verify_fiber_separation(
    combinatorics: MisiurewiczCombinatorics,
    probe: complex,
    *,
    start_power: int = 4,
    max_power: int = 9,
    t_max: float = 20.0,
    trace_samples: int = 160,
    margin: float = 1e-4,
    target: Optional[MisiurewiczParameter] = None,
) -> SeparationCertificate:
    """Try to separate the probe from the parameter of the landing class.

    The class parameter is solved from its first address (or taken from
    ``target`` when the caller already has it).  Probes sitting on one of
    the class's own parameter rays are reported as ON_RAY, since those
    belong to the ray part of the fiber and no approximating wake can
    enclose the target without them.  Otherwise approximating pairs are
    computed at epsilon = 2^-N for increasing N, each pair's wake
    boundary is built, and the first simple curve with target and probe
    strictly on opposite sides decides.  Exhausting max_power returns
    INCONCLUSIVE, never a guessed separation.
    """
    if target is None:
        first = combinatorics.addresses[0]
        target = find_misiurewicz_parameter(
            first, combinatorics.preperiod, combinatorics.period
        )
    c0 = target.parameter
    if abs(probe - c0) <= 1e-9 * (1.0 + abs(c0)):
        raise PreconditionError(
            "probe coincides with the target parameter; nothing separates "
            "a point from itself"
        )
    if probe.real > t_max - 2.0 or c0.real > t_max - 2.0:
        raise PreconditionError(
            f"points with real part above {t_max - 2.0} need a larger t_max"
        )
    for addr in combinatorics.addresses:
        tr = trace_parameter_ray(addr, 5e-3, t_max, samples=trace_samples)
        pts = [z for (_, z) in tr.samples]
        dist = min(
            _point_segment_distance(probe, a, b)
            for a, b in zip(pts, pts[1:])
        )
        if dist < margin:
            return SeparationCertificate(
                ON_RAY,
                c0,
                probe,
                None,
                None,
                f"probe lies on the parameter ray of {addr}",
            )
    last_failure = "no curve separated the points"
    for power in range(start_power, max_power + 1):
        eps = Fraction(1, 2**power)
        try:
            approx = approximate_misiurewicz(combinatorics, eps)
        except SearchExhausted as exc:
            last_failure = f"approximation failed at epsilon=2^-{power}: {exc}"
            break
        for pair in approx.pairs:
            try:
                curve = build_curve(
                    pair, t_max=t_max, samples=trace_samples
                )
            except (
                NotSimple,
                SeedDisagreement,
                NewtonDivergence,
                BranchCut,
                PreconditionError,
            ) as exc:
                last_failure = f"curve for {pair} unusable: {exc}"
                continue
            side_target = side_of(curve, c0, margin=margin)
            side_probe = side_of(curve, probe, margin=margin)
            if ON_CURVE in (side_target, side_probe):
                last_failure = f"a point fell on the curve of {pair}"
                continue
            if side_target != side_probe:
                return SeparationCertificate(
                    SEPARATED,
                    c0,
                    probe,
                    eps,
                    pair,
                    f"target {side_target}, probe {side_probe} of the wake "
                    f"boundary of {pair}",
                )
    return SeparationCertificate(
        INCONCLUSIVE, c0, probe, None, None, last_failure
    )
