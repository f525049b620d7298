"""Combinatorics of preperiodic parameters and their periodic approximations.

A strictly preperiodic address singles out a parameter whose singular orbit
becomes periodic after finitely many steps.  The full set of parameter
rays landing there is recovered combinatorially: every strictly
preperiodic address with the same preperiod and period whose itinerary
(relative to the target address itself) matches lands at the same
parameter.  Around such a parameter, wakes bounded by characteristic
pairs of periodic addresses shrink down to it; this module searches for
such pairs at a prescribed dyadic accuracy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .addresses import ExternalAddress, compare, dist, primitive_root
from .errors import PreconditionError, ResourceBound, SearchExhausted
from .itineraries import itinerary, same_landing_class
from .portraits import CharacteristicPair, is_characteristic_pair


@dataclass(frozen=True)
class MisiurewiczCombinatorics:
    """The sorted family of strictly preperiodic addresses landing together.

    All members share the preperiod and the exact period; any member works
    as the partition base for the others, and they are pairwise in the
    same landing class.
    """

    addresses: Tuple[ExternalAddress, ...]
    preperiod: int
    period: int

    def __post_init__(self) -> None:
        addrs = tuple(self.addresses)
        if not addrs:
            raise PreconditionError("empty address family")
        for a in addrs:
            if not a.is_preperiodic:
                raise PreconditionError(f"{a} is not strictly preperiodic")
            if a.preperiod_length != self.preperiod or a.period_length != self.period:
                raise PreconditionError(
                    f"{a} does not have preperiod {self.preperiod} and period "
                    f"{self.period}"
                )
        for x, y in zip(addrs, addrs[1:]):
            if compare(x, y) >= 0:
                raise PreconditionError("addresses must be sorted and distinct")
        base = addrs[0]
        for a in addrs[1:]:
            if not same_landing_class(base, a, base):
                raise PreconditionError(f"{a} does not share the landing class")
        object.__setattr__(self, "addresses", addrs)

    @property
    def ray_count(self) -> int:
        return len(self.addresses)

    @property
    def entry_bound(self) -> int:
        return max(a.entry_bound for a in self.addresses)


def classify_misiurewicz(
    s: ExternalAddress, entry_bound: int, *, cap: int = 200_000
) -> MisiurewiczCombinatorics:
    """Find every address that co-lands with s, searching entries in
    [-entry_bound, entry_bound].

    Candidates share s's preperiod and exact period; the matching ones are
    exactly those whose itinerary relative to s equals the itinerary of s
    relative to itself.  The result is independent of the bound once the
    bound covers the family (enlarging it only adds candidates that fail).
    """
    if not s.is_preperiodic:
        raise PreconditionError(f"{s} is not strictly preperiodic")
    bound = int(entry_bound)
    k, m = s.preperiod_length, s.period_length
    alpha = s.alphabet
    if alpha.is_cyclic:
        lo = max(alpha.min_symbol, -bound)
        hi = min(alpha.max_symbol, bound)
    else:
        lo, hi = -bound, bound
    width = hi - lo + 1
    if width**k * width**m > cap:
        raise ResourceBound(
            f"{width ** (k + m)} candidate words exceed the cap of {cap}"
        )
    target = itinerary(s, s)
    found: List[ExternalAddress] = []
    for per in itertools.product(range(lo, hi + 1), repeat=m):
        if primitive_root(per) != per:
            continue
        for pre in itertools.product(range(lo, hi + 1), repeat=k):
            if pre[-1] == per[-1]:
                continue  # canonical form would have a shorter preperiod
            r = ExternalAddress(alpha, pre, per)
            if itinerary(r, s) == target:
                found.append(r)
    found.sort()
    return MisiurewiczCombinatorics(tuple(found), k, m)


def _as_dyadic(epsilon) -> Tuple[Fraction, int]:
    try:
        f = Fraction(epsilon)
    except (TypeError, ValueError) as exc:
        raise PreconditionError(f"bad accuracy value {epsilon!r}") from exc
    if f <= 0 or f.numerator != 1 or f.denominator & (f.denominator - 1):
        raise PreconditionError(
            f"accuracy must be a dyadic unit fraction 2^-N with N >= 1, got {f}"
        )
    n = f.denominator.bit_length() - 1
    if n < 1:
        raise PreconditionError("accuracy must be at most 1/2")
    return f, n


@dataclass(frozen=True)
class ApproximationResult:
    """Characteristic pairs pinching down on a preperiodic parameter.

    ``external_pair`` straddles the whole landing family; ``internal_pairs``
    fill the gaps between consecutive family members.  ``achieved`` lists
    the exact distances (lower-to-target, upper-to-target) per pair, in the
    order external pair first, then the internal pairs.
    """

    combinatorics: MisiurewiczCombinatorics
    external_pair: CharacteristicPair
    internal_pairs: Tuple[CharacteristicPair, ...]
    epsilon: Fraction
    achieved: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        s = self.combinatorics.addresses
        ext = self.external_pair
        if not (ext.lower < s[0] and s[-1] < ext.upper):
            raise PreconditionError("external pair must straddle the family")
        for i, pr in enumerate(self.internal_pairs):
            if not (s[i] < pr.lower and pr.upper < s[i + 1]):
                raise PreconditionError(
                    f"internal pair {i} must sit between family members {i} "
                    f"and {i + 1}"
                )
        for d_lo, d_hi in self.achieved:
            if d_lo >= self.epsilon or d_hi >= self.epsilon:
                raise PreconditionError("achieved distance not below epsilon")

    @property
    def pairs(self) -> Tuple[CharacteristicPair, ...]:
        return (self.external_pair,) + self.internal_pairs

    def lines(self) -> List[str]:
        out = []
        for pr, (d_lo, d_hi) in zip(self.pairs, self.achieved):
            out.append(
                f'pair "{pr.lower}" "{pr.upper}" dist_lo={d_lo} dist_hi={d_hi} '
                f"period={pr.period}"
            )
        return out


def _approximants(
    target: ExternalAddress,
    side: int,
    period: int,
    n_sym: int,
    eps: Fraction,
    pad_lo: int,
    pad_hi: int,
    max_closing: int,
) -> List[ExternalAddress]:
    """Purely periodic addresses of one exact period that copy at least
    n_sym + 1 leading symbols of target, sit strictly on the given side of
    it, and are closer than eps.  Deterministic order: whole period word,
    lexicographically."""
    seen = set()
    out: List[ExternalAddress] = []
    lo_l = max(n_sym + 1, period - max_closing)
    for copy_len in range(lo_l, period + 1):
        prefix = target.prefix(copy_len)
        for pad in itertools.product(range(pad_lo, pad_hi + 1), repeat=period - copy_len):
            word = prefix + pad
            if primitive_root(word) != word:
                continue
            if word in seen:
                continue
            seen.add(word)
            cand = ExternalAddress(target.alphabet, (), word)
            c = compare(cand, target)
            if c == 0 or (c < 0) != (side < 0):
                continue
            if dist(cand, target) >= eps:
                continue
            out.append(cand)
    out.sort(key=lambda a: a.period_word)
    return out


def _find_pair(
    left: ExternalAddress,
    left_side: int,
    right: ExternalAddress,
    right_side: int,
    n_sym: int,
    eps: Fraction,
    period_budget: int,
    pad_lo: int,
    pad_hi: int,
    max_closing: int,
) -> CharacteristicPair:
    """First pair passing the full characteristic test, searched in
    (period, lexicographic) order."""
    for p in range(n_sym + 1, period_budget + 1):
        lows = _approximants(left, left_side, p, n_sym, eps, pad_lo, pad_hi, max_closing)
        highs = _approximants(
            right, right_side, p, n_sym, eps, pad_lo, pad_hi, max_closing
        )
        if not lows or not highs:
            continue
        for a in lows:
            for b in highs:
                if compare(a, b) >= 0:
                    continue
                # cheap last-position screen before the full pair test
                x, y = a.symbol(p - 1), b.symbol(p - 1)
                if a.alphabet.is_cyclic:
                    if (x - y) % a.alphabet.degree not in (1, a.alphabet.degree - 1):
                        continue
                elif abs(x - y) != 1:
                    continue
                if is_characteristic_pair(a, b):
                    return CharacteristicPair(a, b, p)
    raise SearchExhausted(
        f"no characteristic pair around ({left}, {right}) up to period "
        f"{period_budget}"
    )


def approximate_misiurewicz(
    combinatorics: MisiurewiczCombinatorics,
    epsilon,
    *,
    max_closing: int = 3,
) -> ApproximationResult:
    """Surround a preperiodic landing family with characteristic pairs.

    ``epsilon`` must be a dyadic unit fraction 2^-N.  The search considers
    periodic addresses that copy more than N leading symbols of a family
    member and then close up with a short word over the family's entries
    widened by one in each direction; periods grow up to 4N.  Candidates
    are tried in increasing period, then lexicographically, so the result
    is deterministic.  Exhausting the budget raises SearchExhausted rather
    than relaxing any requirement.
    """
    eps, n_sym = _as_dyadic(epsilon)
    s = combinatorics.addresses
    period_budget = 4 * n_sym
    pad_lo = min(min(a.preperiod_word + a.period_word) for a in s) - 1
    pad_hi = max(max(a.preperiod_word + a.period_word) for a in s) + 1
    if s[0].alphabet.is_cyclic:
        pad_lo = max(pad_lo, s[0].alphabet.min_symbol)
        pad_hi = min(pad_hi, s[0].alphabet.max_symbol)

    slots = [(s[0], -1, s[-1], 1)]
    for i in range(len(s) - 1):
        slots.append((s[i], 1, s[i + 1], -1))

    pairs: List[CharacteristicPair] = []
    achieved: List[Tuple[Fraction, Fraction]] = []
    for left, left_side, right, right_side in slots:
        pr = _find_pair(
            left,
            left_side,
            right,
            right_side,
            n_sym,
            eps,
            period_budget,
            pad_lo,
            pad_hi,
            max_closing,
        )
        pairs.append(pr)
        achieved.append((dist(pr.lower, left), dist(pr.upper, right)))

    return ApproximationResult(
        combinatorics=combinatorics,
        external_pair=pairs[0],
        internal_pairs=tuple(pairs[1:]),
        epsilon=eps,
        achieved=tuple(achieved),
    )
