"""Tracing dynamic and parameter rays for z -> exp(z) + c.

A ray with address s at potential t is computed by backward iteration:
push t forward under the growth map F(t) = exp(t) - 1 until the value is
astronomically large, seed with the asymptotic position (value plus
2 pi i times the address entry at that depth), then pull back with the
principal logarithm, shifting into the strip named by each address entry.
The contraction of the pullback makes the scheme self-correcting, so the
seed error is irrelevant.

Parameter rays are the c-values whose singular value sits on its own ray
at the given potential; they are found by Newton iteration on
c -> (ray point of s at t in the plane of c) - c, continued downward in
potential from an asymptotic seed.

Residual conventions: for dynamic rays the functional equation is checked
against an independently computed trace of the shifted address at the
pushed-forward potential, normalized by the magnitude of that companion
point (the values grow double-exponentially in t, so an absolute residual
would be meaningless at large potentials); for parameter rays the
residual is the absolute defect |ray point - c|.
"""

from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .addresses import ExternalAddress
from .errors import (
    BranchCut,
    Divergence,
    NewtonDivergence,
    PostsingularCollision,
    PreconditionError,
)

TWO_PI = 2.0 * math.pi

#: Seeds beyond this magnitude are taken as exactly asymptotic.
T_BIG = 1e12


def _seed_depth(t: float, t_big: float = T_BIG) -> Tuple[int, float]:
    """Iterate the growth map F(t) = exp(t) - 1 until the value is huge.

    Returns (depth, value).  Values above ~709 would overflow the next
    exponential; since they already exceed any useful seed threshold the
    loop stops there as well.
    """
    if not (t > 0.0 and math.isfinite(t)):
        raise Divergence(f"potential {t!r} outside (0, inf)")
    v = float(t)
    depth = 0
    while v < t_big:
        if v > 700.0:
            break
        v = math.expm1(v)
        depth += 1
    return depth, v


def point_on_dynamic_ray(
    c: complex,
    s: ExternalAddress,
    t: float,
    *,
    t_big: float = T_BIG,
    branch_tol: float = 1e-12,
) -> complex:
    """Position of the dynamic ray with address s at potential t, in the
    plane of the map z -> exp(z) + c."""
    depth, v = _seed_depth(t, t_big)
    z = complex(v, TWO_PI * s.symbol(depth))
    for k in range(depth - 1, -1, -1):
        w = z - c
        if w == 0:
            raise Divergence("pullback hit the logarithmic singularity")
        if w.real < 0.0 and abs(w.imag) <= branch_tol * (1.0 + abs(w.real)):
            raise BranchCut(f"pullback step {k} lies on the branch cut")
        z = cmath.log(w) + complex(0.0, TWO_PI * s.symbol(k))
    return z


def point_on_dynamic_ray_mp(c, s: ExternalAddress, t, dps: int = 60, t_big: float = T_BIG):
    """High precision variant of :func:`point_on_dynamic_ray`.

    Returns an mpmath complex number computed at ``dps`` decimal digits.
    Needed when rays must be separated at large potentials, where the
    gaps shrink like exp(-t) and vanish in double precision.
    """
    from mpmath import mp, mpc, mpf

    with mp.workdps(dps):
        v = mpf(t)
        if not v > 0:
            raise Divergence(f"potential {t!r} outside (0, inf)")
        depth = 0
        while v < t_big:
            if v > 700:
                break
            v = mp.expm1(v)
            depth += 1
        z = mpc(v, 2 * mp.pi * s.symbol(depth))
        cc = mpc(c)
        for k in range(depth - 1, -1, -1):
            w = z - cc
            z = mp.log(w) + mpc(0, 2 * mp.pi * s.symbol(k))
        return z


def point_on_parameter_ray(
    s: ExternalAddress,
    t: float,
    *,
    seed: Optional[complex] = None,
    tol: float = 1e-10,
    max_iter: int = 60,
    fd_scale: float = 1e-7,
) -> complex:
    """Parameter c whose singular value lies on its ray of address s at
    potential t.  Newton iteration on the defect c -> g(c) - c, derivative
    by central differences with step fd_scale * (1 + |c|)."""
    c = complex(seed) if seed is not None else complex(t, TWO_PI * s.symbol(0))
    nudges = 0
    for _ in range(max_iter):
        try:
            g = point_on_dynamic_ray(c, s, t)
        except BranchCut:
            if nudges >= 5:
                raise
            c += complex(0.0, 1e-9 * (1.0 + abs(c)))
            nudges += 1
            continue
        r = g - c
        if abs(r) <= tol * (1.0 + abs(c)):
            return c
        h = fd_scale * (1.0 + abs(c))
        gp = point_on_dynamic_ray(c + h, s, t)
        gm = point_on_dynamic_ray(c - h, s, t)
        d = (gp - gm) / (2.0 * h) - 1.0
        if d == 0 or not (math.isfinite(d.real) and math.isfinite(d.imag)):
            raise NewtonDivergence(f"flat or invalid derivative at t={t}")
        step = r / d
        # a step comparable to |c| means the seed was outside the basin
        cap = 0.5 * (1.0 + abs(c))
        if abs(step) > cap:
            raise NewtonDivergence(
                f"parameter Newton step {abs(step):.3g} exceeds trust "
                f"region at t={t}"
            )
        c = c - step
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise NewtonDivergence(f"parameter Newton escaped at t={t}")
    raise NewtonDivergence(f"parameter Newton stalled at t={t} for {s}")


def point_on_parameter_ray_mp(s: ExternalAddress, t, dps: int = 60, seed=None):
    """High precision variant of :func:`point_on_parameter_ray`."""
    from mpmath import mp, mpc

    with mp.workdps(dps):
        c = mpc(seed) if seed is not None else mpc(t, 2 * mp.pi * s.symbol(0))
        h = mp.mpf(10) ** (-dps // 2)
        for _ in range(80):
            g = point_on_dynamic_ray_mp(c, s, t, dps=dps)
            r = g - c
            if abs(r) <= mp.mpf(10) ** (5 - dps) * (1 + abs(c)):
                return c
            gp = point_on_dynamic_ray_mp(c + h, s, t, dps=dps)
            gm = point_on_dynamic_ray_mp(c - h, s, t, dps=dps)
            d = (gp - gm) / (2 * h) - 1
            c = c - r / d
        raise NewtonDivergence(f"high precision parameter Newton stalled at t={t}")


def geometric_grid(t_lo: float, t_hi: float, samples: int) -> List[float]:
    """Strictly decreasing potentials from t_hi to t_lo, geometrically spaced."""
    if not (0.0 < t_lo < t_hi):
        raise PreconditionError(f"need 0 < t_lo < t_hi, got {t_lo}, {t_hi}")
    if samples < 2:
        raise PreconditionError("need at least two samples")
    ratio = (t_hi / t_lo) ** (1.0 / (samples - 1))
    ts = [t_hi / ratio**i for i in range(samples)]
    ts[0] = t_hi
    ts[-1] = t_lo
    return ts


@dataclass
class RayTrace:
    """A sampled ray: (potential, position) pairs at strictly decreasing
    potentials, with one residual per sample and optional truncation data."""

    kind: str  # "dynamic" or "parameter"
    address: ExternalAddress
    parameter: Optional[complex]
    samples: List[Tuple[float, complex]]
    residuals: List[float]
    truncated_at: Optional[float] = None
    caveats: Tuple[str, ...] = ()

    @property
    def final_point(self) -> complex:
        return self.samples[-1][1]

    def points(self) -> List[complex]:
        return [z for (_, z) in self.samples]

    def format_lines(self) -> List[str]:
        head = f"# kind={self.kind} address={self.address}"
        if self.parameter is not None:
            head += f" c={self.parameter.real:.17g}{self.parameter.imag:+.17g}i"
        lines = [head]
        for caveat in self.caveats:
            lines.append(f"# caveat: {caveat}")
        for (t, z), r in zip(self.samples, self.residuals):
            lines.append(f"{t:.17g} {z.real:.17g} {z.imag:.17g} {r:.6g}")
        return lines

    def write_text(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.format_lines()) + "\n")

    @classmethod
    def parse_text(cls, text: str) -> "RayTrace":
        kind = "dynamic"
        address = None
        parameter = None
        caveats = []
        samples: List[Tuple[float, complex]] = []
        residuals: List[float] = []
        from .addresses import parse_address

        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if body.startswith("caveat:"):
                    caveats.append(body[len("caveat:") :].strip())
                    continue
                for tok in body.split():
                    if tok.startswith("kind="):
                        kind = tok[5:]
                    elif tok.startswith("address="):
                        pass  # address spans several tokens, handled below
                    elif tok.startswith("c="):
                        parameter = complex(tok[2:].replace("i", "j"))
                if "address=" in body:
                    frag = body.split("address=", 1)[1]
                    if " c=" in frag:
                        frag = frag.split(" c=", 1)[0]
                    address = parse_address(frag.strip())
                continue
            parts = line.split()
            if len(parts) < 3:
                raise PreconditionError(f"bad trace line: {line!r}")
            t, re_z, im_z = float(parts[0]), float(parts[1]), float(parts[2])
            samples.append((t, complex(re_z, im_z)))
            residuals.append(float(parts[3]) if len(parts) > 3 else 0.0)
        if address is None or not samples:
            raise PreconditionError("trace text lacks a header or samples")
        return cls(kind, address, parameter, samples, residuals, None, tuple(caveats))


def _singular_orbit(c: complex, max_len: int = 64) -> Tuple[List[complex], bool]:
    """Forward orbit of the singular value, stopping once it leaves the
    escape-test halfplane.  The flag reports whether it left."""
    orbit = [c]
    z = c
    for _ in range(max_len - 1):
        if z.real > 50.0:
            return orbit, True
        z = cmath.exp(z) + c
        orbit.append(z)
    return orbit, z.real > 50.0


def _dynamic_sample(c: complex, s: ExternalAddress, t: float) -> complex:
    """One ray point with a small deterministic retry ladder for branch cuts."""
    bump = 0.0
    for attempt in range(4):
        try:
            return point_on_dynamic_ray(c, s, t * (1.0 + bump))
        except BranchCut:
            bump = 1e-9 * 3.0 ** attempt
    raise BranchCut(f"persistent branch cut near t={t} for {s}")


def trace_dynamic_ray(
    c: complex,
    s: ExternalAddress,
    t_lo: float,
    t_hi: float,
    tol: float = 1e-8,
    *,
    samples: int = 120,
    collision_radius: float = 0.0,
) -> RayTrace:
    """Sample the dynamic ray of s from potential t_hi down to t_lo.

    Residuals compare exp(z(t)) + c against the companion trace of the
    shifted address at the pushed-forward potential, normalized by the
    companion's magnitude.  A positive ``collision_radius`` truncates the
    trace when it comes that close to the singular orbit (the ray may not
    continue past such a point); the check is off by default because rays
    that legitimately land on the postsingular orbit approach it fast.
    """
    ts = geometric_grid(t_lo, t_hi, samples)
    orbit, escaping = _singular_orbit(c)
    caveats: List[str] = []
    if escaping:
        caveats.append("singular value appears to escape; landing unchecked")
    shifted = s.shift()
    pts: List[Tuple[float, complex]] = []
    resid: List[float] = []
    truncated_at: Optional[float] = None
    for t in ts:
        try:
            z = _dynamic_sample(c, s, t)
        except BranchCut:
            if not pts:
                raise
            truncated_at = t
            caveats.append(f"branch cut stopped the trace at t={t:.6g}")
            break
        companion = _dynamic_sample(c, shifted, math.expm1(t))
        r = abs(cmath.exp(z) + c - companion) / (1.0 + abs(companion))
        if collision_radius > 0.0:
            gap = min(abs(z - w) for w in orbit)
            if gap < collision_radius:
                if not pts:
                    raise PostsingularCollision(
                        f"ray point at t={t:.6g} is within {collision_radius} "
                        "of the singular orbit"
                    )
                truncated_at = t
                caveats.append(
                    f"singular orbit within {collision_radius} at t={t:.6g}"
                )
                break
        pts.append((t, z))
        resid.append(r)
    if max(resid) > tol:
        caveats.append(f"max residual {max(resid):.3g} above tolerance {tol:.3g}")
    return RayTrace("dynamic", s, c, pts, resid, truncated_at, tuple(caveats))


def _march_family(
    c: complex,
    s: ExternalAddress,
    t_land: float,
    t_top: float,
    dk_cap: float,
    want_derivative: bool = False,
) -> Tuple[List[float], List[List[complex]], Optional[List[List[complex]]], float]:
    """One marching pass over the whole shift family of s.

    The ray of the j-th shift at potential t is a logarithm of (ray of
    the next shift at exp(t) - 1) minus c, so all rays of the family are
    computed together on one decreasing potential grid; exp(t) - 1 > t
    guarantees the value needed on the right hand side sits higher up
    the grid, where it is interpolated linearly in log t from rows
    already finished.  The logarithm branch is chosen by continuity:
    whatever multiple of 2 pi i puts the new point nearest the previous
    row.  That choice is only trustworthy while consecutive rows stay
    well under half a turn apart, so the step ratio is capped to advance
    the pullback depth by at most dk_cap levels per row (depth grows
    like 2/t as t falls) and the largest observed row-to-row jump is
    returned for the caller to judge.

    With want_derivative the c-derivative of every ray point is marched
    alongside through d/dc log(w - c) = (w' - 1)/(w - c), started from 0
    at the top of the grid; the start error is of order e^{-t_top} and
    contracts under the pullback, which is plenty for Newton steps.

    Returns (ts, cols, dcols, max_step) with cols[j][i] the point of the
    j-th shift's ray at ts[i]; dcols is None unless want_derivative.
    """
    if not (0.0 < t_land < t_top):
        raise PreconditionError(f"need 0 < t_land < t_top, got {t_land}, {t_top}")
    k, m = s.preperiod_length, s.period_length
    n = k + m
    shifts = [s]
    for _ in range(n - 1):
        shifts.append(shifts[-1].shift())
    ts = [float(t_top)]
    while ts[-1] > t_land:
        t = ts[-1]
        # depth change per row is about (2/t) * (relative t step); the
        # 0.4 t guard keeps exp(t) - 1 above the previous row for any cap
        delta = min(0.01, 0.5 * dk_cap * t, 0.4 * t)
        ts.append(max(t * (1.0 - delta), t_land))
    logts = [math.log(t) for t in ts]
    neg = [-t for t in ts]
    cols: List[List[complex]] = [[_dynamic_sample(c, a, ts[0])] for a in shifts]
    dcols: Optional[List[List[complex]]] = None
    if want_derivative:
        dcols = [[0.0 + 0.0j] for _ in shifts]

    def locate(tau: float) -> Tuple[int, float]:
        idx = bisect.bisect_left(neg, -tau)
        u = (math.log(tau) - logts[idx - 1]) / (logts[idx] - logts[idx - 1])
        return idx, u

    def value_at(j: int, tau: float) -> complex:
        if tau >= ts[0]:
            return _dynamic_sample(c, shifts[j], tau)
        idx, u = locate(tau)
        z_hi, z_lo = cols[j][idx - 1], cols[j][idx]
        return z_hi + (z_lo - z_hi) * u

    max_step = 0.0
    for i in range(1, len(ts)):
        tau = math.expm1(ts[i])
        for j in range(n):
            j_next = j + 1 if j + 1 < n else k
            w = value_at(j_next, tau) - c
            if w == 0:
                raise Divergence("pullback hit the logarithmic singularity")
            base = cmath.log(w)
            prev = cols[j][i - 1]
            b = round((prev.imag - base.imag) / TWO_PI)
            z = base + complex(0.0, TWO_PI * b)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise Divergence(
                    f"marched ray left the finite plane at t={ts[i]:.6g}"
                )
            step = abs(z - prev)
            if step > max_step:
                max_step = step
            cols[j].append(z)
            if dcols is not None:
                if tau >= ts[0]:
                    dv = 0.0 + 0.0j
                else:
                    idx, u = locate(tau)
                    d_hi, d_lo = dcols[j_next][idx - 1], dcols[j_next][idx]
                    dv = d_hi + (d_lo - d_hi) * u
                dcols[j].append((dv - 1.0) / w)
    return ts, cols, dcols, max_step


def _march_rays(
    c: complex,
    s: ExternalAddress,
    t_land: float,
    t_top: float = 4.0,
    dk_cap: float = 0.25,
    want_derivative: bool = False,
) -> Tuple[List[float], List[List[complex]], Optional[List[List[complex]]]]:
    """March the shift family of s down to t_land, refining the grid when
    a row-to-row jump comes close enough to half a turn that the branch
    choice loses its safety margin."""
    cap = dk_cap
    for _ in range(3):
        ts, cols, dcols, max_step = _march_family(
            c, s, t_land, t_top, cap, want_derivative
        )
        if max_step <= 2.4:
            return ts, cols, dcols
        cap *= 0.5
    raise Divergence(
        f"branch continuity not certified for {s}: rows still jump by "
        f"{max_step:.3g} at depth cap {cap * 2:.3g}"
    )


def landing_point(
    c: complex,
    s: ExternalAddress,
    *,
    t_land: float = 1e-3,
    t_top: float = 4.0,
) -> complex:
    """Landing point of the dynamic ray of s, marched down to potential
    t_land with logarithm branches chosen by continuity along the ray.

    Fixed-strip pullback (point_on_dynamic_ray) pins every level to the
    strip named by its address entry.  A ray landing at an orbit point
    with non-real repelling multiplier spirals, crossing strip
    boundaries infinitely often on final approach, so the fixed-strip
    chain eventually follows a preimage of the ray instead and its limit
    is off by a sheet.  Marching in t is immune and costs one family
    sweep.

    At a repelling landing the march is converged to rounding long
    before t_land (the remaining pullback contracts geometrically); at a
    parabolic landing the error decays only like t itself, so the result
    is within a small multiple of t_land of the true point.
    """
    ts, cols, _ = _march_rays(c, s, t_land, t_top)
    return cols[0][-1]


def _marched_parameter_point(
    s: ExternalAddress,
    t: float,
    seed: complex,
    *,
    t_top: float = 4.0,
    dk_cap: float = 0.25,
    step_tol: float = 1e-11,
    max_iter: int = 30,
) -> Tuple[complex, float]:
    """Parameter-ray point at potential t by Newton on the marched ray
    value, with its marched c-derivative.

    Near a parabolic root the fixed-strip evaluator behind
    point_on_parameter_ray stops converging (the dynamic ray creeps
    through the parabolic gate and the chain loses the landing sheet),
    while the marched value stays smooth in c.  Its c-derivative grows
    like 1/t^2 there, so the defining residual g - c bottoms out at
    derivative * rounding; convergence is therefore judged on the Newton
    step, which measures the error of c itself.

    Returns (c, residual) with residual the last |g(c) - c| seen.
    """
    def evaluate(at: complex) -> Tuple[complex, complex]:
        cap = dk_cap
        for _ in range(3):
            ts, cols, dcols, max_step = _march_family(at, s, t, t_top, cap, True)
            if max_step <= 2.4:
                assert dcols is not None
                return cols[0][-1], dcols[0][-1]
            cap *= 0.5
        raise NewtonDivergence(
            f"marched branch continuity lost near t={t:.3g} for {s}"
        )

    c = complex(seed)
    g, u = evaluate(c)
    r = g - c
    for _ in range(max_iter):
        scale = 1.0 + abs(c)
        d = u - 1.0
        if d == 0 or not (math.isfinite(d.real) and math.isfinite(d.imag)):
            raise NewtonDivergence(f"flat marched derivative at t={t}")
        step = r / d
        if abs(step) <= step_tol * scale:
            return c - step, abs(r)
        if abs(step) > 0.25 * scale:
            raise NewtonDivergence(
                f"marched parameter Newton step {abs(step):.3g} exceeds "
                f"trust region at t={t}"
            )
        # full steps two-cycle across regions of strong curvature (a ray
        # skirting a parabolic parameter); halve until the defect drops
        lam = 1.0
        for _ in range(8):
            c_try = c - lam * step
            if not (math.isfinite(c_try.real) and math.isfinite(c_try.imag)):
                raise NewtonDivergence(
                    f"marched parameter Newton escaped at t={t}"
                )
            g_try, u_try = evaluate(c_try)
            r_try = g_try - c_try
            if abs(r_try) < abs(r):
                c, g, u, r = c_try, g_try, u_try, r_try
                break
            lam *= 0.5
        else:
            raise NewtonDivergence(
                f"marched parameter Newton cannot reduce the defect at t={t}"
            )
    raise NewtonDivergence(f"marched parameter Newton stalled at t={t} for {s}")


def _marched_defect(
    s: ExternalAddress,
    t: float,
    c: complex,
    t_top: float = 4.0,
) -> Optional[float]:
    """|marched ray value - c| at potential t, or None when the march
    cannot be completed at this parameter."""
    cap = 0.25
    for _ in range(3):
        try:
            ts, cols, _, max_step = _march_family(c, s, t, t_top, cap, False)
        except (Divergence, BranchCut):
            return None
        if max_step <= 2.4:
            return abs(cols[0][-1] - c)
        cap *= 0.5
    return None


def trace_parameter_ray(
    s: ExternalAddress,
    t_lo: float,
    t_hi: float,
    tol: float = 1e-8,
    *,
    samples: int = 120,
    max_subdivisions: int = 24,
    verify_below: float = 0.25,
) -> RayTrace:
    """Sample the parameter ray of s from potential t_hi down to t_lo by
    Newton continuation.

    A parameter already on the ray at potential t0 poisons the ray map at
    any potential below t0 (the pullback runs past the singular value and
    changes sheets), so each step is seeded by linear extrapolation from
    the last two solutions, never by the previous solution alone.

    The fixed-strip evaluator can also converge to a point on the wrong
    sheet without any residual symptom when the ray skirts a parabolic
    parameter, so every sample below ``verify_below`` is cross-checked
    against the marched ray value (branch chosen by continuity along the
    ray, immune to sheet capture); a mismatch re-solves the sample by
    Newton on the marched value.  When the fixed-strip Newton fails
    outright, the marched evaluator takes over for that and all deeper
    samples.  A step failing under both is bisected in potential until
    Newton converges or the subdivision budget runs out; only then is
    the trace truncated, with a caveat, keeping the progress made.  A
    failure on the very first sample raises instead.

    Deep samples near a parabolic root carry defining residuals around
    derivative-times-rounding rather than machine precision (the ray map
    is ill conditioned there); the residual caveat then reports it."""
    ts = geometric_grid(t_lo, t_hi, samples)
    pts: List[Tuple[float, complex]] = []
    resid: List[float] = []
    caveats: List[str] = []
    truncated_at: Optional[float] = None
    cur: Optional[Tuple[float, complex]] = None
    slope: Optional[complex] = None
    marching = False
    cross_tol = 1e-6

    def solve_at(t_next: float, seed: Optional[complex]) -> Tuple[complex, Optional[float]]:
        nonlocal marching
        if seed is None:
            seed = complex(t_next, TWO_PI * s.symbol(0))
        if not marching:
            try:
                c_fb = point_on_parameter_ray(s, t_next, seed=seed)
            except (NewtonDivergence, BranchCut, Divergence):
                c_m, res = _marched_parameter_point(s, t_next, seed)
                marching = True
                return c_m, res
            if t_next >= verify_below:
                return c_fb, None
            defect = _marched_defect(s, t_next, c_fb)
            if defect is not None and defect <= cross_tol * (1.0 + abs(c_fb)):
                return c_fb, defect
            return _marched_parameter_point(s, t_next, seed)
        return _marched_parameter_point(s, t_next, seed)

    for t in ts:
        pending = [t]
        budget = max_subdivisions
        failed = False
        res: Optional[float] = None
        while pending:
            t_next = pending[-1]
            if cur is None:
                seed = None
            elif slope is None:
                seed = cur[1]
            else:
                seed = cur[1] + slope * (t_next - cur[0])
            try:
                c_next, res = solve_at(t_next, seed)
            except (NewtonDivergence, BranchCut, Divergence):
                if cur is None:
                    raise
                budget -= 1
                if budget < 0:
                    failed = True
                    break
                pending.append(0.5 * (cur[0] + t_next))
                continue
            if cur is not None and t_next != cur[0]:
                slope = (c_next - cur[1]) / (t_next - cur[0])
            cur = (t_next, c_next)
            pending.pop()
        if failed:
            truncated_at = t
            caveats.append(f"parameter Newton failed at t={t:.6g}")
            break
        assert cur is not None
        c = cur[1]
        r = res if res is not None else abs(point_on_dynamic_ray(c, s, t) - c)
        pts.append((t, c))
        resid.append(r)
    if max(resid) > tol:
        caveats.append(f"max residual {max(resid):.3g} above tolerance {tol:.3g}")
    return RayTrace("parameter", s, None, pts, resid, truncated_at, tuple(caveats))


def verify_landing(trace: RayTrace, p: complex, tol: float) -> bool:
    """Check that the trace tail approaches p: over the last quarter of the
    samples (at least four) the distances to p never increase beyond
    rounding slack, and the final distance is below tol."""
    if len(trace.samples) < 4:
        raise PreconditionError("landing check needs at least four samples")
    count = max(4, len(trace.samples) // 4)
    tail = trace.samples[-count:]
    dists = [abs(z - p) for (_, z) in tail]
    slack = 1e-13 * (1.0 + abs(p))
    for a, b in zip(dists, dists[1:]):
        if b > a * (1.0 + 1e-9) + slack:
            return False
    return dists[-1] < tol
