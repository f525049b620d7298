"""Newton solvers for distinguished points and parameters of exp(z) + c.

Three solvers live here:

* :func:`find_periodic_point` locates the landing point of a periodic
  dynamic ray by following the ray inward and polishing with Newton on
  ``f^n(z) - z``.
* :func:`find_misiurewicz_parameter` locates the parameter at which the
  singular value is strictly preperiodic with prescribed preperiod and
  period, seeded by parameter-ray continuation.
* :func:`find_parabolic_root` solves the two-by-two system
  ``f^p(z) = z``, ``(f^p)'(z) = 1`` for the parameter at the base of the
  wake bounded by a characteristic ray pair.

Every solver cross-checks its answer against the ray it was seeded from,
so a Newton iteration that drifts into the wrong basin is reported
instead of returned.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .addresses import ExternalAddress
from .errors import (
    AttractingContradiction,
    BranchCut,
    Divergence,
    NewtonDivergence,
    NotPeriodic,
    PreconditionError,
    SeedDisagreement,
    WrongBasin,
)
from .portraits import CharacteristicPair
from .rays import (
    RayTrace,
    _march_rays,
    landing_point,
    trace_dynamic_ray,
    trace_parameter_ray,
    verify_landing,
)


def _exp(z: complex) -> complex:
    """exp for orbit work; overflow means the iterate left any region a
    solver could be converging in, so it surfaces as a Newton failure."""
    if z.real > 700.0:
        raise NewtonDivergence("orbit escaped beyond representable range")
    return cmath.exp(z)


def _complex_expm1(z: complex) -> complex:
    """exp(z) - 1 without cancellation for small z.

    Uses exp(x)cos(y) - 1 = expm1(x) - 2 exp(x) sin^2(y/2).
    """
    x, y = z.real, z.imag
    ex = math.exp(x)
    half = math.sin(0.5 * y)
    return complex(math.expm1(x) - 2.0 * ex * half * half, ex * math.sin(y))


def _orbit(c: complex, z: complex, n: int) -> List[complex]:
    """z, f(z), ..., f^n(z) for f(w) = exp(w) + c."""
    out = [z]
    for _ in range(n):
        z = _exp(z) + c
        out.append(z)
    return out


def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _minimal_period(c: complex, z: complex, n: int, tol: float = 1e-8) -> int:
    orbit = _orbit(c, z, n)
    for d in _divisors(n):
        if abs(orbit[d] - z) <= tol * (1.0 + abs(z)):
            return d
    return n


def _cycle_multiplier(c: complex, z: complex, period: int) -> complex:
    """(f^period)'(z) = exp(sum of the cycle points)."""
    total = 0.0 + 0.0j
    w = z
    for _ in range(period):
        total += w
        w = _exp(w) + c
    if total.real > 700.0:
        raise NewtonDivergence("multiplier beyond representable range")
    return cmath.exp(total)


def _refine_cycle_point(
    c: complex,
    z: complex,
    period: int,
    tol: float = 1e-13,
    max_iter: int = 60,
) -> complex:
    """Newton in z alone on f^period(z) - z = 0 at fixed c."""
    for _ in range(max_iter):
        w = z
        der = 1.0 + 0.0j
        for _ in range(period):
            e = _exp(w)
            der *= e
            w = e + c
        g = der - 1.0
        if g == 0:
            raise NewtonDivergence("neutral derivative in cycle refinement")
        step = (w - z) / g
        z = z - step
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise NewtonDivergence("cycle refinement escaped")
        if abs(step) <= tol * (1.0 + abs(z)):
            return z
    raise NewtonDivergence("cycle refinement stalled")


@dataclass(frozen=True)
class PeriodicPoint:
    """A periodic point reached as the landing point of a periodic ray."""

    parameter: complex
    address: ExternalAddress
    point: complex
    period: int
    multiplier: complex
    residual: float


@dataclass(frozen=True)
class MisiurewiczParameter:
    """A parameter whose singular value is strictly preperiodic."""

    address: ExternalAddress
    parameter: complex
    orbit_point: complex
    preperiod: int
    period: int
    multiplier: complex


@dataclass(frozen=True)
class ParabolicRoot:
    """The parameter at the base of the wake of a characteristic pair,
    together with its parabolic orbit data.  ``multiplier`` is the
    derivative of the first-return map over the full address period and
    equals one at every root; at a satellite root the minimal cycle's
    own derivative over ``orbit_period`` steps is a root of unity."""

    pair: CharacteristicPair
    parameter: complex
    point: complex
    orbit_period: int
    multiplier: complex

    @property
    def address_period(self) -> int:
        return self.pair.period


def find_periodic_point(
    c: complex,
    s: ExternalAddress,
    *,
    t_land: float = 1e-3,
    t_start: float = 4.0,
    tol: float = 1e-14,
    max_iter: int = 90,
    landing_tol: float = 3e-3,
) -> PeriodicPoint:
    """Landing point of the periodic dynamic ray of address s at c.

    The ray is marched inward with branch-by-continuity (the fixed-strip
    chain can land a sheet off when the target spirals) for a seed and
    kept for a basin check.  The Newton objective ``f^n(z) - z`` uses
    the stable derivative form exp(sum of orbit) - 1, so parabolic
    targets (derivative zero at the root) degrade to bisection-speed
    convergence instead of failing.
    """
    if not s.is_periodic:
        raise NotPeriodic(f"{s} is not purely periodic")
    n = s.period_length
    ts, cols, _ = _march_rays(c, s, t_land, t_start)
    z = cols[0][-1]
    for _ in range(max_iter):
        orbit = _orbit(c, z, n)
        if n == 1:
            # exp(z) + c - z, arranged so that c near -1 and z near 0
            # do not cancel catastrophically
            g = _complex_expm1(z) + (c + 1.0) - z
        else:
            g = orbit[n] - z
        gprime = _complex_expm1(sum(orbit[:n]))
        if gprime == 0:
            raise NewtonDivergence("derivative vanished exactly")
        step = g / gprime
        z = z - step
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise NewtonDivergence(f"periodic point Newton escaped for {s}")
        if abs(step) <= tol * (1.0 + abs(z)):
            break
    else:
        raise NewtonDivergence(f"periodic point Newton stalled for {s} at c={c}")
    period = _minimal_period(c, z, n)
    mult = _cycle_multiplier(c, z, period)
    if abs(mult) < 1.0 - 1e-6:
        raise AttractingContradiction(
            f"Newton limit has multiplier {mult:.6g}; a ray cannot land there"
        )
    stride = max(1, len(ts) // 120)
    picked = list(range(0, len(ts), stride))
    if picked[-1] != len(ts) - 1:
        picked.append(len(ts) - 1)
    tail = RayTrace(
        "dynamic",
        s,
        c,
        [(ts[i], cols[0][i]) for i in picked],
        [0.0] * len(picked),
    )
    if not verify_landing(tail, z, landing_tol):
        raise WrongBasin(
            f"ray tail of {s} does not approach the Newton limit {z:.6g}"
        )
    residual = abs(_orbit(c, z, n)[n] - z)
    return PeriodicPoint(c, s, z, period, mult, residual)


def _orbit_with_parameter_derivative(
    c: complex, length: int
) -> Tuple[List[complex], List[complex]]:
    """Singular orbit z_0 = c, z_{j+1} = exp(z_j) + c and its derivative
    with respect to c: dz_0 = 1, dz_{j+1} = exp(z_j) dz_j + 1."""
    zs = [c]
    ds = [1.0 + 0.0j]
    for _ in range(length):
        e = _exp(zs[-1])
        zs.append(e + c)
        ds.append(e * ds[-1] + 1.0)
    return zs, ds


def find_misiurewicz_parameter(
    s: ExternalAddress,
    preperiod: int,
    period: int,
    *,
    t_seed: float = 0.3,
    t_start: float = 8.0,
    seed_samples: int = 24,
    tol: float = 1e-13,
    max_iter: int = 80,
    landing_tol: float = 1e-8,
) -> MisiurewiczParameter:
    """Parameter at which the singular value is strictly preperiodic with
    the given preperiod and period, found from the parameter ray of s.

    The preperiod must equal the preperiod of s and the period must be a
    multiple of the period of s (one landing class can close up after
    several address periods, never after a fraction of one).

    Three stages: the parameter ray of s is continued to a seed; Newton
    on the orbit closure ``f^{k+m}(c) = f^k(c)`` refines it; then the
    root is checked, and if need be corrected, against the defining
    condition that the marched dynamic ray of s lands exactly on the
    singular value.  The last stage matters: the closure equation has
    one root per branch assignment of the landing cycle, and a seed
    continued with fixed-strip branches can start nearer a root whose
    cycle is the right one only sheet-by-sheet.  ``landing_tol`` bounds
    the accepted landing defect relative to 1 + |c|.
    """
    if not s.is_preperiodic:
        raise PreconditionError(f"{s} is not strictly preperiodic")
    if preperiod != s.preperiod_length:
        raise PreconditionError(
            f"preperiod {preperiod} differs from the address preperiod "
            f"{s.preperiod_length}"
        )
    if period <= 0 or period % s.period_length != 0:
        raise PreconditionError(
            f"period {period} is not a positive multiple of the address "
            f"period {s.period_length}"
        )
    k, m = preperiod, period
    # The system z_{k+m}(c) = z_k(c) has spurious near-roots wherever the
    # orbit dives far left (exp of the iterate is below any tolerance and
    # the pseudo-cycle is violently attracting), so a shallow ray seed can
    # drop Newton into the wrong basin.  Retry from successively deeper
    # seeds before giving up; the verification below never lets a wrong
    # basin through.
    failure: Exception = NewtonDivergence(f"no seed attempt made for {s}")
    for t_at, n_samples in (
        (t_seed, seed_samples),
        (t_seed / 6.0, 40),
        (t_seed / 30.0, 64),
    ):
        try:
            seed_trace = trace_parameter_ray(s, t_at, t_start, samples=n_samples)
            t_reached = seed_trace.samples[-1][0]
            if seed_trace.truncated_at is not None and t_reached > 1.5:
                # too high for the endpoint to say anything about the landing
                raise NewtonDivergence(
                    f"seed trace for {s} truncated at t={t_reached:.3g}"
                )
            c = _misiurewicz_newton(s, k, m, seed_trace.final_point, tol, max_iter)
            c = _march_polish(s, k, m, c, tol, max_iter)
            return _misiurewicz_verify(s, k, m, c, landing_tol)
        except (
            NewtonDivergence,
            AttractingContradiction,
            WrongBasin,
            BranchCut,
            Divergence,
        ) as exc:
            failure = exc
    raise failure


def _misiurewicz_newton(
    s: ExternalAddress,
    k: int,
    m: int,
    c: complex,
    tol: float,
    max_iter: int,
) -> complex:
    for _ in range(max_iter):
        zs, ds = _orbit_with_parameter_derivative(c, k + m)
        phi = zs[k + m] - zs[k]
        dphi = ds[k + m] - ds[k]
        if dphi == 0:
            raise NewtonDivergence("parameter derivative vanished")
        step = phi / dphi
        c = c - step
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise NewtonDivergence(f"parameter Newton escaped for {s}")
        if abs(step) <= tol * (1.0 + abs(c)):
            return c
    raise NewtonDivergence(f"parameter Newton stalled for {s}")


def _cycle_log_multiplier(c: complex, z: complex, period: int) -> float:
    """log |(f^period)'(z)| = Re(sum of the cycle points), overflow-free."""
    total = 0.0
    w = z
    for _ in range(period):
        total += w.real
        w = _exp(w) + c
    return total


def _landing_potential(log_mult: float, m: int) -> float:
    """Potential deep enough that the pullback contraction still to come
    squeezes any order-one error below roughly 1e-10.

    Depth in pullback levels grows like 2/t; each full cycle of m levels
    contracts by the cycle multiplier, so the depth needed scales like
    m / log|multiplier|.  Clamped to [1e-3, 0.035]; at the floor a
    near-parabolic landing may still be unresolved, which the caller's
    defect check then reports honestly.
    """
    if log_mult <= 1e-9:
        return 1e-3
    depth = 40.0 + 23.0 * m / log_mult
    return min(0.035, max(1e-3, 2.0 / depth))


def _march_polish(
    s: ExternalAddress,
    k: int,
    m: int,
    c: complex,
    tol: float,
    max_iter: int,
) -> complex:
    """Move an orbit-closure root onto the root whose marched ray of s
    actually lands on the singular value.

    When the seed was already in the right basin the first defect
    evaluation is tiny and the root is returned unchanged.  Otherwise
    Newton runs on the landing defect (finite differences), and the
    orbit closure is re-polished afterwards; if that re-polish moves the
    parameter materially, the closure root nearest the marched one does
    not carry the landing and the solve is rejected.
    """
    zs, _ = _orbit_with_parameter_derivative(c, k + m)
    t_land = _landing_potential(_cycle_log_multiplier(c, zs[k], m), m)
    h = landing_point(c, s, t_land=t_land) - c
    scale = 1.0 + abs(c)
    if abs(h) <= 1e-9 * scale:
        return c
    for _ in range(10):
        fd = 1e-6 * scale
        hp = landing_point(c + fd, s, t_land=t_land) - (c + fd)
        hm = landing_point(c - fd, s, t_land=t_land) - (c - fd)
        d = (hp - hm) / (2.0 * fd)
        if d == 0 or not (math.isfinite(d.real) and math.isfinite(d.imag)):
            raise NewtonDivergence("landing defect derivative unusable")
        c = c - h / d
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise NewtonDivergence(f"landing defect Newton escaped for {s}")
        h = landing_point(c, s, t_land=t_land) - c
        scale = 1.0 + abs(c)
        if abs(h) <= 1e-10 * scale:
            break
    else:
        raise NewtonDivergence(f"landing defect Newton stalled for {s}")
    refined = _misiurewicz_newton(s, k, m, c, tol, max_iter)
    if abs(refined - c) > 1e-5 * scale:
        raise WrongBasin(
            "orbit closure polish left the marched root; the nearest "
            "closure root does not carry the landing"
        )
    return refined


def _misiurewicz_verify(
    s: ExternalAddress,
    k: int,
    m: int,
    c: complex,
    landing_tol: float,
) -> MisiurewiczParameter:
    zs, _ = _orbit_with_parameter_derivative(c, k + m)
    w = zs[k]
    min_m = m
    for d in _divisors(m):
        if abs(zs[k + d] - w) <= 1e-8 * (1.0 + abs(w)):
            min_m = d
            break
    mult = _cycle_multiplier(c, w, min_m)
    if abs(mult) < 1.0 - 1e-6:
        raise AttractingContradiction(
            f"cycle multiplier {mult:.6g} is attracting; the singular value "
            "cannot be preperiodic into such a cycle"
        )
    t_land = _landing_potential((m // min_m) * _cycle_log_multiplier(c, w, min_m), m)
    defect = abs(landing_point(c, s, t_land=t_land) - c)
    if defect > landing_tol * (1.0 + abs(c)) and t_land > 1.1e-3:
        # the contraction estimate may have been optimistic; go deeper once
        defect = abs(landing_point(c, s, t_land=1e-3) - c)
    if defect > landing_tol * (1.0 + abs(c)):
        raise WrongBasin(
            f"dynamic ray of {s} at the solved parameter misses the "
            f"singular value by {defect:.3g}"
        )
    return MisiurewiczParameter(s, c, w, k, min_m, mult)


def find_parabolic_root(
    pair: CharacteristicPair,
    *,
    t_seed: float = 0.02,
    t_start: float = 8.0,
    seed_samples: int = 48,
    tol: float = 1e-13,
    max_iter: int = 80,
    seed_gap: float = 1.0,
    landing_tol: float = 1e-2,
) -> ParabolicRoot:
    """Parameter where the two rays of a characteristic pair bound a wake
    whose root carries a parabolic orbit.

    Both parameter rays are continued to ``t_seed``; their endpoints must
    agree to within ``seed_gap`` (they converge to the same root).  Newton
    then solves f^p(z) = z together with (f^p)'(z) = 1 in the two unknowns
    (z, c), with p the full address period: at a satellite root the
    return map of the full period still has derivative one, so the same
    system covers the primitive and the satellite case.  At a satellite
    root, though, the new cycle collides with its base cycle, z becomes a
    multiple root of both equations and the Jacobian degenerates there;
    c keeps converging to rounding while the z update floors well above
    it.  The loop therefore also accepts a residual-floor iterate and
    recovers z to full accuracy afterwards by Newton on the base cycle
    alone (the smallest divisor period holding a cycle next to the
    iterate, a simple root in z).

    The multiplier of the result is the derivative of the first-return
    map over the full address period, 1 at every root; at a satellite
    the orbit's own multiplier over orbit_period steps is a root of
    unity instead.

    Each ray is then re-traced toward the root far enough that its final
    point must sit within ``landing_tol`` of the solved parameter, and
    the tail is checked with verify_landing.  The approach distance
    shrinks only linearly in the potential at a parabolic root while the
    ray map's conditioning grows like its inverse square, so the check
    cost scales like 1/landing_tol; the default keeps it cheap while
    still tying both rays to the root.  Callers wanting a tighter bound
    re-trace with a smaller t_lo and run verify_landing themselves.
    """
    p = pair.period
    lo_trace = trace_parameter_ray(pair.lower, t_seed, t_start, samples=seed_samples)
    hi_trace = trace_parameter_ray(pair.upper, t_seed, t_start, samples=seed_samples)
    c_lo, c_hi = lo_trace.final_point, hi_trace.final_point
    if abs(c_lo - c_hi) > seed_gap:
        raise SeedDisagreement(
            f"parameter ray endpoints {c_lo:.6g} and {c_hi:.6g} disagree by "
            f"{abs(c_lo - c_hi):.3g}"
        )
    c = 0.5 * (c_lo + c_hi)
    # seed z from the marched dynamic ray at the seed parameter; the
    # fixed-strip chain can land on a wrong sheet when c is this close
    # to a parabolic parameter
    _, seed_cols, _ = _march_rays(c, pair.lower, t_seed, t_start)
    z = seed_cols[0][-1]
    clean = False
    best_score = math.inf
    z_best = c_best = 0.0 + 0.0j
    for _ in range(max_iter):
        ws = [z]
        a = [1.0 + 0.0j]  # d w_j / d z
        b = [0.0 + 0.0j]  # d w_j / d c
        for j in range(p):
            e = _exp(ws[j])
            ws.append(e + c)
            a.append(e * a[j])
            b.append(e * b[j] + 1.0)
        mu_log = sum(ws[:p])
        if mu_log.real > 700.0:
            raise NewtonDivergence("multiplier beyond representable range")
        mu = cmath.exp(mu_log)
        f1 = ws[p] - z
        f2 = mu - 1.0
        score = abs(f1) / (1.0 + abs(z)) + abs(f2)
        if score < best_score:
            best_score, z_best, c_best = score, z, c
        j11 = a[p] - 1.0
        j12 = b[p]
        j21 = mu * sum(a[:p])
        j22 = mu * sum(b[:p])
        det = j11 * j22 - j12 * j21
        if det == 0:
            raise NewtonDivergence("singular Jacobian in the parabolic solve")
        dz = (f1 * j22 - f2 * j12) / det
        dc = (j11 * f2 - j21 * f1) / det
        z, c = z - dz, c - dc
        if not all(
            math.isfinite(v) for v in (z.real, z.imag, c.real, c.imag)
        ):
            raise NewtonDivergence(f"parabolic Newton escaped for {pair}")
        if abs(dz) + abs(dc) <= tol * (1.0 + abs(z) + abs(c)):
            clean = True
            break
    if clean:
        n = _minimal_period(c, z, p)
    else:
        if best_score > 1e-9:
            raise NewtonDivergence(f"parabolic Newton stalled for {pair}")
        z, c = z_best, c_best
        n = 0
        for d in _divisors(p):
            try:
                zd = _refine_cycle_point(c, z, d)
            except NewtonDivergence:
                continue
            if abs(zd - z) <= 1e-3 * (1.0 + abs(z)):
                z, n = zd, d
                break
        if n == 0:
            raise NewtonDivergence(
                f"no cycle of a divisor period found next to the degenerate "
                f"parabolic iterate for {pair}"
            )
    mult = _cycle_multiplier(c, z, p)
    for addr, c_end in (
        (pair.lower, lo_trace.final_point),
        (pair.upper, hi_trace.final_point),
    ):
        slope = abs(c_end - c) / t_seed
        t_land = min(t_seed / 4.0, max(1e-5, landing_tol / (3.0 * max(slope, 1e-12))))
        tail = trace_parameter_ray(addr, t_land, t_start, samples=seed_samples + 12)
        if tail.truncated_at is not None or not verify_landing(tail, c, landing_tol):
            raise WrongBasin(
                f"parameter ray of {addr} does not land at the solved root "
                f"within {landing_tol:g}"
            )
    return ParabolicRoot(pair, c, z, n, mult)
