"""Sector partitions and itineraries relative to a preperiodic base address.

A strictly preperiodic base address r0 cuts the space of addresses into
sectors: the boundaries are the addresses j r0 (r0 with one symbol j
prepended), one per symbol j.  Each address off the boundaries gets the
integer label of its sector, with the sector containing r0 itself labelled
0 and consecutive integers following the (cyclic) order of sectors.  The
itinerary of an address is the sequence of sector labels along its shift
orbit; it is eventually periodic and is stored in the same canonical
preperiod/period form as an address.

Two addresses whose forward orbits avoid the boundaries land together
exactly when their itineraries agree, which makes the itinerary the
equality test for landing classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .addresses import ExternalAddress, compare, normalize_words
from .errors import BoundaryHit, BoundaryOrbit, InvalidBase


def _require_base(base: ExternalAddress) -> None:
    if not base.is_preperiodic:
        raise InvalidBase(f"partition base must be strictly preperiodic, got {base}")


def _raw_sector(r: ExternalAddress, base: ExternalAddress) -> int:
    # Index j of the boundary directly below r: the boundary j(base) starts
    # with symbol j and continues with base, so r sits above it iff the
    # first entry of r exceeds j, or equals j with shift(r) above base.
    s = r.shift()
    c = compare(s, base)
    if c == 0:
        raise BoundaryHit(f"{r} is a one-symbol preimage of the base {base}")
    j = r.symbol(0) if c > 0 else r.symbol(0) - 1
    if r.alphabet.is_cyclic and j < r.alphabet.min_symbol:
        # below the bottom boundary means inside the wrap-around sector
        j = r.alphabet.max_symbol
    return j


def sector_index(r: ExternalAddress, base: ExternalAddress) -> int:
    """Label of the partition sector containing r, 0 on the base's sector."""
    _require_base(base)
    return _raw_sector(r, base) - _raw_sector(base, base)


@dataclass(frozen=True)
class Itinerary:
    """Eventually periodic sequence of sector labels.

    ``defined`` is False when some forward image of the input address hits a
    partition boundary; the label words are then empty.
    """

    base: ExternalAddress
    preperiod_word: Tuple[int, ...]
    period_word: Tuple[int, ...]
    defined: bool = True

    def __post_init__(self) -> None:
        if not self.defined:
            object.__setattr__(self, "preperiod_word", ())
            object.__setattr__(self, "period_word", ())
            return
        pre, per = normalize_words(self.preperiod_word, self.period_word)
        object.__setattr__(self, "preperiod_word", pre)
        object.__setattr__(self, "period_word", per)

    @property
    def preperiod_length(self) -> int:
        return len(self.preperiod_word)

    @property
    def period_length(self) -> int:
        return len(self.period_word)

    def symbol(self, i: int) -> int:
        if not self.defined:
            raise BoundaryOrbit("itinerary is undefined (boundary orbit)")
        k = len(self.preperiod_word)
        if i < k:
            return self.preperiod_word[i]
        return self.period_word[(i - k) % len(self.period_word)]

    def shifted(self) -> "Itinerary":
        """Itinerary with the first label dropped."""
        if not self.defined:
            return self
        if self.preperiod_word:
            return Itinerary(self.base, self.preperiod_word[1:], self.period_word)
        p = self.period_word
        return Itinerary(self.base, (), p[1:] + p[:1])

    def words(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """The label words alone, for comparisons across different bases."""
        return (self.preperiod_word, self.period_word)

    def __str__(self) -> str:
        if not self.defined:
            return "undefined"
        head = " ".join(str(e) for e in self.preperiod_word)
        tail = " ".join(str(e) for e in self.period_word)
        return f"{head} | {tail}" if head else f"| {tail}"


def itinerary(r: ExternalAddress, base: ExternalAddress) -> Itinerary:
    """Sector labels along the shift orbit of r.

    Labels depend only on the current shift of r, so the sequence inherits
    r's preperiod and a period dividing r's period; computing one pass of
    preperiod plus period determines it.
    """
    _require_base(base)
    base_raw = _raw_sector(base, base)
    k, m = r.preperiod_length, r.period_length
    entries = []
    cur = r
    try:
        for _ in range(k + m):
            entries.append(_raw_sector(cur, base) - base_raw)
            cur = cur.shift()
    except BoundaryHit:
        return Itinerary(base, (), (), defined=False)
    return Itinerary(base, tuple(entries[:k]), tuple(entries[k:]))


def same_landing_class(
    r1: ExternalAddress, r2: ExternalAddress, base: ExternalAddress
) -> bool:
    """Whether r1 and r2 carry the same itinerary relative to base.

    Raises BoundaryOrbit when either orbit meets a partition boundary, since
    the verdict would then be meaningless.
    """
    i1 = itinerary(r1, base)
    if not i1.defined:
        raise BoundaryOrbit(f"orbit of {r1} hits a partition boundary of {base}")
    i2 = itinerary(r2, base)
    if not i2.defined:
        raise BoundaryOrbit(f"orbit of {r2} hits a partition boundary of {base}")
    return i1 == i2
