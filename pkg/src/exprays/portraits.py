"""Landing classes of periodic addresses and characteristic pairs.

Grouping all periodic addresses of one exact period by their itinerary
(relative to a strictly preperiodic base) partitions them into landing
classes; the shift permutes the classes in cycles, and one cycle of
classes is an orbit portrait.  A characteristic pair is a two-ray
configuration (the boundary of a wake): two periodic addresses of the same
exact period whose forward orbit stays out of the open interval they
bound, whose orbit chords are pairwise non-crossing, whose period words
differ by exactly one symbol step in the last position, and (over the
unbounded alphabet) whose orbit admits a preperiodic witness address
keeping both members in one partition sector at every depth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .addresses import (
    Alphabet,
    ExternalAddress,
    compare,
    cyclic_between,
    primitive_root,
)
from .errors import (
    AlphabetMismatch,
    InvalidAddress,
    PeriodMismatch,
    PortraitInvariant,
    ResourceBound,
)
from .itineraries import Itinerary, _require_base, itinerary


def _strictly_inside(
    x: ExternalAddress, lo: ExternalAddress, hi: ExternalAddress
) -> bool:
    if lo.alphabet.is_cyclic:
        return cyclic_between(lo, x, hi)
    return lo < x < hi


def _chords_cross(
    a: Tuple[ExternalAddress, ExternalAddress],
    b: Tuple[ExternalAddress, ExternalAddress],
) -> bool:
    """Whether the chords with endpoint pairs a and b cross.

    Crossing means the endpoints of b separate the endpoints of a (one
    strictly inside each of the two arcs cut by a).  Chords sharing an
    endpoint never cross.
    """
    a1, a2 = a
    b1, b2 = b
    if a1.alphabet.is_cyclic:
        return (cyclic_between(a1, b1, a2) and cyclic_between(a2, b2, a1)) or (
            cyclic_between(a1, b2, a2) and cyclic_between(a2, b1, a1)
        )
    lo, hi = (a1, a2) if a1 < a2 else (a2, a1)
    for x, y in ((b1, b2), (b2, b1)):
        if lo < x < hi and (y < lo or y > hi):
            return True
    return False


def _label_changes(labels: List[int], cyclic: bool) -> int:
    changes = sum(1 for i in range(1, len(labels)) if labels[i] != labels[i - 1])
    if cyclic and labels and labels[0] != labels[-1]:
        changes += 1
    return changes


def _unlinked(
    cls_a: Tuple[ExternalAddress, ...],
    cls_b: Tuple[ExternalAddress, ...],
    cyclic: bool,
) -> bool:
    """Two address sets are unlinked when neither separates the other: the
    merged sorted run of members splits into at most two blocks."""
    tagged = sorted([(a, 0) for a in cls_a] + [(b, 1) for b in cls_b])
    return _label_changes([t for (_, t) in tagged], cyclic) <= 2


@dataclass(frozen=True)
class OrbitPortrait:
    """One shift cycle of landing classes.

    ``classes`` follows the shift cycle: applying the shift to every member
    of classes[i] gives exactly classes[i+1 mod orbit_period].  The first
    class is the one containing the smallest address of the portrait.
    """

    classes: Tuple[Tuple[ExternalAddress, ...], ...]
    orbit_period: int
    rays_per_point: int
    address_period: int

    def __post_init__(self) -> None:
        if not self.classes or any(not c for c in self.classes):
            raise PortraitInvariant("portrait needs nonempty classes")
        n = len(self.classes)
        if n != self.orbit_period:
            raise PortraitInvariant("orbit_period must equal the number of classes")
        p = self.address_period
        q = self.rays_per_point
        for cls in self.classes:
            if len(cls) != q:
                raise PortraitInvariant("classes must share one size")
            for a in cls:
                if not a.is_periodic or a.period_length != p:
                    raise PortraitInvariant(
                        f"member {a} is not periodic of exact period {p}"
                    )
        for i in range(n):
            image = {a.shift() for a in self.classes[i]}
            if image != set(self.classes[(i + 1) % n]):
                raise PortraitInvariant(
                    "shift does not map each class onto the next one"
                )
        cyclic = self.classes[0][0].alphabet.is_cyclic
        for i, j in itertools.combinations(range(n), 2):
            if not _unlinked(self.classes[i], self.classes[j], cyclic):
                raise PortraitInvariant(f"classes {i} and {j} are linked")

    @property
    def addresses(self) -> Tuple[ExternalAddress, ...]:
        return tuple(a for cls in self.classes for a in cls)


def periodic_addresses(
    alphabet: Alphabet, period: int, lo: int, hi: int
):
    """All purely periodic addresses of the given exact period whose entries
    lie in [lo, hi].  Distinct primitive words give distinct addresses."""
    for word in itertools.product(range(lo, hi + 1), repeat=period):
        if primitive_root(word) != word:
            continue
        yield ExternalAddress(alphabet, (), word)


def portrait_classes(
    period: int,
    entry_bound: int,
    base: ExternalAddress,
    *,
    cap: int = 200_000,
) -> List[OrbitPortrait]:
    """Group all periodic addresses of one exact period into orbit portraits.

    Enumerates every purely periodic address of exact period ``period``
    with entries in [-entry_bound, entry_bound] (clipped to the alphabet),
    groups them by itinerary relative to ``base``, and closes each group
    under the shift.  Addresses whose orbit meets a partition boundary are
    skipped: they land nowhere a class could live.
    """
    _require_base(base)
    p = int(period)
    bound = int(entry_bound)
    if p < 1:
        raise InvalidAddress(f"period must be positive, got {period}")
    if bound < 0:
        raise InvalidAddress(f"entry bound must be >= 0, got {entry_bound}")
    alpha = base.alphabet
    if alpha.is_cyclic:
        lo = max(alpha.min_symbol, -bound)
        hi = min(alpha.max_symbol, bound)
    else:
        lo, hi = -bound, bound
    if (hi - lo + 1) ** p > cap:
        raise ResourceBound(
            f"{(hi - lo + 1) ** p} candidate words exceed the cap of {cap}"
        )

    groups: Dict[Itinerary, List[ExternalAddress]] = {}
    for addr in periodic_addresses(alpha, p, lo, hi):
        itin = itinerary(addr, base)
        if not itin.defined:
            continue
        groups.setdefault(itin, []).append(addr)

    portraits: List[OrbitPortrait] = []
    remaining = {k: sorted(v) for k, v in groups.items()}
    while remaining:
        start = min(remaining, key=lambda kk: remaining[kk][0])
        n = start.period_length
        cycle = []
        key = start
        for _ in range(n):
            if key not in remaining:
                raise PortraitInvariant(
                    "shift cycle of itineraries left the enumerated family"
                )
            cycle.append(tuple(remaining.pop(key)))
            key = key.shifted()
        portraits.append(
            OrbitPortrait(
                classes=tuple(cycle),
                orbit_period=n,
                rays_per_point=len(cycle[0]),
                address_period=p,
            )
        )
    portraits.sort(key=lambda pt: pt.classes[0][0].period_word)
    return portraits


def _has_landing_witness(
    orbit_lo: List[ExternalAddress], orbit_hi: List[ExternalAddress]
) -> bool:
    """Whether some strictly preperiodic address can witness the pair.

    A witness is an address whose partition (boundaries: the witness with
    one symbol prepended, see itineraries) keeps shift^k
    lower and shift^k upper in the same sector for every k, which is what
    ties the two rays to one landing point.  Working out which witnesses
    survive position k gives exact interval arithmetic on addresses: where
    the k-th symbols of the pair agree, witnesses inside the interval
    spanned by the (k+1)-st shifts are cut out; where they differ by one
    step, witnesses are confined between those shifts in reversed order;
    a gap of two or more steps kills every witness.  The pair is viable
    exactly when the confinement interval is not fully covered by the
    cuts.  Cuts are closed here, which at worst rejects hairline cases.
    """
    p = len(orbit_lo)
    low = high = None
    cuts: List[Tuple[ExternalAddress, ExternalAddress]] = []
    for k in range(p):
        u = orbit_lo[k].symbol(0)
        v = orbit_hi[k].symbol(0)
        ja = orbit_lo[(k + 1) % p]
        jb = orbit_hi[(k + 1) % p]
        if u == v:
            cuts.append((ja, jb) if compare(ja, jb) < 0 else (jb, ja))
            continue
        if abs(u - v) != 1:
            return False
        lo_im, hi_im = (jb, ja) if u < v else (ja, jb)
        if low is None or compare(lo_im, low) > 0:
            low = lo_im
        if high is None or compare(hi_im, high) < 0:
            high = hi_im
    if low is None or compare(low, high) >= 0:
        return False
    window = [c for c in cuts if c[1] > low and c[0] < high]
    window.sort()
    cursor = low
    for c1, c2 in window:
        if c1 > cursor:
            return True
        if c2 > cursor:
            cursor = c2
    return cursor < high


def is_characteristic_pair(lower: ExternalAddress, upper: ExternalAddress) -> bool:
    """Test whether the ordered pair (lower, upper) bounds a wake.

    Preconditions (violations raise): same alphabet, both purely periodic
    with one common exact period, and lower strictly below upper.  A pair
    of period one never qualifies (single rays at distinct fixed points).

    The test has four parts: no forward image of either address falls
    strictly inside the open interval (lower, upper); the orbit chords
    {shift^k lower, shift^k upper} are pairwise non-crossing; the period
    words differ by exactly one symbol step in their last position (one
    step around the digit circle for finite degree); and, over the
    unbounded alphabet, a strictly preperiodic witness address in the
    sense of _has_landing_witness must exist.  Orbit chords that pass the
    first three parts can still interleave the pair in a way no landing
    point supports; the witness test screens those out.
    """
    if lower.alphabet != upper.alphabet:
        raise AlphabetMismatch(
            f"mixed alphabets {lower.alphabet} and {upper.alphabet}"
        )
    if not (lower.is_periodic and upper.is_periodic):
        raise PeriodMismatch("both addresses must be purely periodic")
    p = lower.period_length
    if upper.period_length != p:
        raise PeriodMismatch(
            f"periods differ: {p} vs {upper.period_length}"
        )
    if compare(lower, upper) >= 0:
        raise PeriodMismatch("pair must be strictly ordered and distinct")
    if p == 1:
        return False

    orbit_lo = [lower]
    orbit_hi = [upper]
    for _ in range(p - 1):
        orbit_lo.append(orbit_lo[-1].shift())
        orbit_hi.append(orbit_hi[-1].shift())

    for k in range(1, p):
        if _strictly_inside(orbit_lo[k], lower, upper):
            return False
        if _strictly_inside(orbit_hi[k], lower, upper):
            return False

    chords = list(zip(orbit_lo, orbit_hi))
    for i, j in itertools.combinations(range(p), 2):
        if _chords_cross(chords[i], chords[j]):
            return False

    a = lower.symbol(p - 1)
    b = upper.symbol(p - 1)
    if lower.alphabet.is_cyclic:
        return (a - b) % lower.alphabet.degree in (1, lower.alphabet.degree - 1)
    if abs(a - b) != 1:
        return False
    return _has_landing_witness(orbit_lo, orbit_hi)


@dataclass(frozen=True)
class CharacteristicPair:
    """A validated wake boundary: construction runs the full pair test."""

    lower: ExternalAddress
    upper: ExternalAddress
    period: int

    def __post_init__(self) -> None:
        if not is_characteristic_pair(self.lower, self.upper):
            raise InvalidAddress(
                f"({self.lower}, {self.upper}) is not a characteristic pair"
            )
        if self.period != self.lower.period_length:
            raise PeriodMismatch(
                f"stated period {self.period} differs from the address period "
                f"{self.lower.period_length}"
            )

    @classmethod
    def of(
        cls, lower: ExternalAddress, upper: ExternalAddress
    ) -> "CharacteristicPair":
        return cls(lower, upper, lower.period_length)

    def __str__(self) -> str:
        return f"({self.lower} , {self.upper})"
