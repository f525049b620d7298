"""Eventually periodic symbol sequences and their exact arithmetic.

An external address is an infinite integer sequence of the form

    p_1 p_2 .. p_k  (q_1 q_2 .. q_m) (q_1 q_2 .. q_m) ...

stored as a finite preperiod word plus an infinitely repeated period word.
Construction normalizes the representation (primitive period, shortest
preperiod), so two values describe the same sequence exactly when they are
equal as dataclasses.  Everything in this module is exact: comparison, the
binary-weighted distance, angle values and the finite-degree recoding all
work on the words themselves with integer or rational arithmetic.

Two symbol sets are supported.  The default alphabet admits every integer
entry and carries a linear (lexicographic) order.  A finite alphabet of
a given degree D uses the balanced digit set (for odd D the symbols are
-(D-1)/2 .. (D-1)/2, for even D they are -(D-2)/2 .. D/2) and its order is
cyclic; see :func:`cyclic_between`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence, Tuple

from .errors import AlphabetMismatch, DegreeTooSmall, InvalidAddress


@dataclass(frozen=True)
class Alphabet:
    """Symbol set for external addresses.

    ``degree is None`` selects the unrestricted integer alphabet.  A finite
    ``degree`` D >= 2 selects the balanced digit set of that degree.
    """

    degree: Optional[int] = None

    def __post_init__(self) -> None:
        if self.degree is not None and self.degree < 2:
            raise InvalidAddress(f"alphabet degree must be >= 2, got {self.degree}")

    @property
    def is_cyclic(self) -> bool:
        return self.degree is not None

    @property
    def min_symbol(self) -> int:
        if self.degree is None:
            raise InvalidAddress("the integer alphabet has no smallest symbol")
        d = self.degree
        return -((d - 1) // 2) if d % 2 else -((d - 2) // 2)

    @property
    def max_symbol(self) -> int:
        if self.degree is None:
            raise InvalidAddress("the integer alphabet has no largest symbol")
        d = self.degree
        return (d - 1) // 2 if d % 2 else d // 2

    def contains(self, entry: int) -> bool:
        if self.degree is None:
            return True
        return self.min_symbol <= entry <= self.max_symbol

    def __str__(self) -> str:
        return "Z" if self.degree is None else f"deg{self.degree}"


#: The unrestricted integer alphabet.
EXPONENTIAL = Alphabet()


def primitive_root(word: Tuple[int, ...]) -> Tuple[int, ...]:
    """Shortest word whose repetition gives ``word``."""
    m = len(word)
    for d in range(1, m):
        if m % d == 0 and word[:d] * (m // d) == word:
            return word[:d]
    return word


def normalize_words(
    pre: Sequence[int], per: Sequence[int]
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Canonical (preperiod, period) words for an eventually periodic sequence.

    The period is reduced to its primitive root, then trailing preperiod
    symbols that merely repeat the period are absorbed into a rotation of
    the period word.  The result is the unique shortest representation.
    """
    per_t = primitive_root(tuple(per))
    pre_l = list(pre)
    per_l = list(per_t)
    while pre_l and pre_l[-1] == per_l[-1]:
        pre_l.pop()
        per_l = [per_l[-1]] + per_l[:-1]
    return tuple(pre_l), tuple(per_l)


def _as_entries(word: Iterable) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in word)
    except (TypeError, ValueError) as exc:
        raise InvalidAddress(f"non-integer entry in {word!r}") from exc


@dataclass(frozen=True)
class ExternalAddress:
    """An eventually periodic integer sequence s_1 s_2 s_3 ...

    ``preperiod_word`` may be empty (a purely periodic address);
    ``period_word`` is never empty.  The stored words are canonical, see
    :func:`normalize_words`.
    """

    alphabet: Alphabet
    preperiod_word: Tuple[int, ...]
    period_word: Tuple[int, ...]

    def __post_init__(self) -> None:
        pre = _as_entries(self.preperiod_word)
        per = _as_entries(self.period_word)
        if not per:
            raise InvalidAddress("period word must be nonempty")
        for e in pre + per:
            if not self.alphabet.contains(e):
                raise InvalidAddress(f"entry {e} outside alphabet {self.alphabet}")
        pre, per = normalize_words(pre, per)
        object.__setattr__(self, "preperiod_word", pre)
        object.__setattr__(self, "period_word", per)

    # -- basic structure ---------------------------------------------------

    @property
    def preperiod_length(self) -> int:
        return len(self.preperiod_word)

    @property
    def period_length(self) -> int:
        """Exact period of the tail (the period word is primitive)."""
        return len(self.period_word)

    @property
    def is_periodic(self) -> bool:
        return not self.preperiod_word

    @property
    def is_preperiodic(self) -> bool:
        """Strictly preperiodic: the sequence is not periodic from the start."""
        return bool(self.preperiod_word)

    @property
    def entry_bound(self) -> int:
        return max(abs(e) for e in self.preperiod_word + self.period_word)

    def symbol(self, i: int) -> int:
        """Entry s_{i+1} of the sequence (0-based index)."""
        if i < 0:
            raise InvalidAddress(f"negative sequence index {i}")
        k = len(self.preperiod_word)
        if i < k:
            return self.preperiod_word[i]
        return self.period_word[(i - k) % len(self.period_word)]

    def prefix(self, n: int) -> Tuple[int, ...]:
        return tuple(self.symbol(i) for i in range(n))

    # -- serialization -----------------------------------------------------

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet = EXPONENTIAL) -> "ExternalAddress":
        """Parse ``"p1 p2 | q1 q2"`` (entries space separated, bar before the
        period word).  A purely periodic address reads ``"| q1 q2"``."""
        if text.count("|") != 1:
            raise InvalidAddress(f"address text needs exactly one bar: {text!r}")
        head, _, tail = text.partition("|")
        try:
            pre = tuple(int(tok) for tok in head.split())
            per = tuple(int(tok) for tok in tail.split())
        except ValueError as exc:
            raise InvalidAddress(f"bad entry in address text {text!r}") from exc
        return cls(alphabet, pre, per)

    def __str__(self) -> str:
        head = " ".join(str(e) for e in self.preperiod_word)
        tail = " ".join(str(e) for e in self.period_word)
        return f"{head} | {tail}" if head else f"| {tail}"

    def __repr__(self) -> str:
        if self.alphabet.is_cyclic:
            return f"ExternalAddress({str(self)!r}, degree={self.alphabet.degree})"
        return f"ExternalAddress({str(self)!r})"

    # -- dynamics and order ------------------------------------------------

    def shift(self) -> "ExternalAddress":
        """Drop the first entry of the sequence."""
        if self.preperiod_word:
            return ExternalAddress(self.alphabet, self.preperiod_word[1:], self.period_word)
        p = self.period_word
        return ExternalAddress(self.alphabet, (), p[1:] + p[:1])

    def compare(self, other: "ExternalAddress") -> int:
        return compare(self, other)

    def dist(self, other: "ExternalAddress") -> Fraction:
        return dist(self, other)

    def minimal_potential(self) -> float:
        """Infimum of potentials at which a ray with this address exists.

        Entries of an eventually periodic address are bounded, and bounded
        entries lose against the iterated growth map at every positive
        potential, so the infimum is always zero.
        """
        return 0.0

    def angle(self) -> Fraction:
        """Value of the digit expansion sum s_i / D^i (mod 1), for finite degree."""
        if self.alphabet.degree is None:
            raise AlphabetMismatch("angles are defined only for finite-degree alphabets")
        d = self.alphabet.degree
        k, m = self.preperiod_length, self.period_length
        head = sum(Fraction(s, d ** (i + 1)) for i, s in enumerate(self.preperiod_word))
        block = sum(Fraction(s, d ** (j + 1)) for j, s in enumerate(self.period_word))
        tail = block * Fraction(d**m, d**m - 1) / d**k
        return (head + tail) % 1

    def __lt__(self, other: "ExternalAddress") -> bool:
        return compare(self, other) < 0

    def __le__(self, other: "ExternalAddress") -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other: "ExternalAddress") -> bool:
        return compare(self, other) > 0

    def __ge__(self, other: "ExternalAddress") -> bool:
        return compare(self, other) >= 0


def parse_address(text: str, degree: Optional[int] = None) -> ExternalAddress:
    """Convenience wrapper: parse an address over the integer alphabet, or
    over the balanced digit set of ``degree`` when one is given."""
    return ExternalAddress.parse(text, Alphabet(degree))


def _require_same_alphabet(a: ExternalAddress, b: ExternalAddress) -> None:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"mixed alphabets {a.alphabet} and {b.alphabet}")


def shift(a: ExternalAddress) -> ExternalAddress:
    return a.shift()


def compare(a: ExternalAddress, b: ExternalAddress) -> int:
    """Lexicographic verdict -1, 0, or +1.

    Two eventually periodic sequences that agree through the longer
    preperiod plus one least common multiple of the periods agree
    everywhere (pigeonhole on the joint state), so that horizon decides.
    """
    _require_same_alphabet(a, b)
    horizon = max(a.preperiod_length, b.preperiod_length) + lcm(
        a.period_length, b.period_length
    )
    for j in range(horizon):
        x, y = a.symbol(j), b.symbol(j)
        if x != y:
            return -1 if x < y else 1
    return 0


def dist(a: ExternalAddress, b: ExternalAddress) -> Fraction:
    """Exact value of sum(2^-k over positions k >= 1 where the entries differ).

    Splits the sum at the joint preperiod horizon; beyond it the pattern of
    disagreement repeats with period lcm(m_a, m_b), giving a geometric tail
    that is summed in closed form.
    """
    _require_same_alphabet(a, b)
    k = max(a.preperiod_length, b.preperiod_length)
    block = lcm(a.period_length, b.period_length)
    total = Fraction(0)
    for j in range(k):
        if a.symbol(j) != b.symbol(j):
            total += Fraction(1, 2 ** (j + 1))
    tail = Fraction(0)
    for j in range(k, k + block):
        if a.symbol(j) != b.symbol(j):
            tail += Fraction(1, 2 ** (j + 1))
    total += tail * Fraction(2**block, 2**block - 1)
    return total


def minimal_potential(a: ExternalAddress) -> float:
    return a.minimal_potential()


def cyclic_between(a: ExternalAddress, b: ExternalAddress, c: ExternalAddress) -> bool:
    """True iff b lies strictly inside the arc that runs from a to c in the
    increasing direction, wrapping once between the largest and smallest
    sequences.  For finite-degree alphabets this is the cyclic order; the
    same predicate is well defined (if rarely wrapped) over the integers.
    """
    ab = compare(a, b)
    bc = compare(b, c)
    ac = compare(a, c)
    if ab == 0 or bc == 0:
        return False
    if ac < 0:
        return ab < 0 and bc < 0
    if ac > 0:
        return ab < 0 or bc < 0
    return False


def embed(a: ExternalAddress, degree: int) -> ExternalAddress:
    """Recode an integer-alphabet address over the balanced digit set of the
    given degree.  Entries are copied unchanged; the degree must exceed
    2*N + 2 for N the largest absolute entry, which keeps every entry (and
    every partition computation on such addresses) inside the digit set.
    """
    if a.alphabet.is_cyclic:
        raise AlphabetMismatch("embed expects an integer-alphabet address")
    n = a.entry_bound
    if degree <= 2 * n + 2:
        raise DegreeTooSmall(
            f"degree {degree} too small for entry bound {n}: need degree > {2 * n + 2}"
        )
    return ExternalAddress(Alphabet(degree), a.preperiod_word, a.period_word)


def project(a: ExternalAddress) -> ExternalAddress:
    """Inverse of :func:`embed`: read the digits as plain integers."""
    if not a.alphabet.is_cyclic:
        raise AlphabetMismatch("project expects a finite-degree address")
    return ExternalAddress(EXPONENTIAL, a.preperiod_word, a.period_word)
