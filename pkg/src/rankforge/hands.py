"""Cards, 7-card hands and inclusive hand-class containment.

A deck has ``r`` ranks (0-indexed) and 4 suits. A hand *contains* a class
when some 5-card subset of its 7 cards forms that class, so a single hand
usually contains several classes at once.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, Iterable, Mapping, Optional, Tuple

import numba

MIN_RANKS = 5
NUM_SUITS = 4
HAND_SIZE = 7


class HandClass(str, enum.Enum):
    HC = "HC"
    P1 = "1P"
    P2 = "2P"
    X3 = "3X"
    ST = "ST"
    FL = "FL"
    FH = "FH"
    X4 = "4X"
    SF = "SF"

    @property
    def index(self) -> int:
        return _INDEX[self]

    @classmethod
    def parse(cls, text: str) -> "HandClass":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ValueError(f"unknown hand class {text!r}") from None

    def __str__(self) -> str:
        return self.value


# Canonical declaration order; used for serialization and tie-breaking only.
CLASSES: Tuple[HandClass, ...] = tuple(HandClass)
_INDEX = {h: i for i, h in enumerate(CLASSES)}


def check_ranks(r: int) -> int:
    if isinstance(r, bool) or not isinstance(r, int):
        raise TypeError(f"rank count must be an int, got {r!r}")
    if r < MIN_RANKS:
        raise ValueError(f"rank count must be at least {MIN_RANKS}, got {r}")
    return r


@dataclass(frozen=True, order=True)
class Card:
    rank: int
    suit: int

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError(f"negative rank {self.rank}")
        if not 0 <= self.suit < NUM_SUITS:
            raise ValueError(f"suit must be in [0, 4), got {self.suit}")

    @property
    def index(self) -> int:
        """Position of the card in a rank-major deck (``4 * rank + suit``)."""
        return NUM_SUITS * self.rank + self.suit

    @classmethod
    def from_index(cls, i: int) -> "Card":
        return cls(i // NUM_SUITS, i % NUM_SUITS)


@dataclass(frozen=True)
class HandSet:
    cards: FrozenSet[Card]

    def __init__(self, cards: Iterable[Card]):
        cards = tuple(cards)
        unique = frozenset(cards)
        if len(unique) != len(cards):
            raise ValueError("hand contains duplicate cards")
        if len(unique) != HAND_SIZE:
            raise ValueError(f"a hand has exactly {HAND_SIZE} cards, got {len(unique)}")
        object.__setattr__(self, "cards", unique)

    @classmethod
    def of(cls, *pairs: Tuple[int, int]) -> "HandSet":
        return cls(Card(rank, suit) for rank, suit in pairs)

    def suit_masks(self) -> Tuple[int, int, int, int]:
        masks = [0, 0, 0, 0]
        for c in self.cards:
            masks[c.suit] |= 1 << c.rank
        return tuple(masks)  # type: ignore[return-value]

    def check_deck(self, r: int) -> None:
        check_ranks(r)
        for c in self.cards:
            if c.rank >= r:
                raise ValueError(f"card rank {c.rank} outside a deck of {r} ranks")


# Direct containment test on the four per-suit rank masks, compiled so the
# sweep kernels can inline it.
_jit = numba.njit(cache=True, nogil=True)


@_jit
def straight_in(mask, r):
    """True if ``mask`` holds 5 consecutive ranks or the wheel (top rank low)."""
    if mask & (mask >> 1) & (mask >> 2) & (mask >> 3) & (mask >> 4):
        return True
    wheel = (1 << (r - 1)) | 15
    return (mask & wheel) == wheel


@_jit
def popcount(x):
    n = 0
    while x:
        x &= x - 1
        n += 1
    return n


@_jit
def profile_bits(a, b, c, d, r):
    """Bitset of contained classes (bit i = ``CLASSES[i]``) for suit masks a..d."""
    ab = a | b
    cd = c | d
    ge2 = (a & b) | (c & d) | (ab & cd)
    ge3 = (a & b & cd) | (c & d & ab)
    ge4 = a & b & c & d
    bits = 1
    if ge2:
        bits |= 2
        npairs = popcount(ge2)
        if npairs >= 2 or ge4:
            bits |= 4
        if ge3:
            bits |= 8
            if npairs >= 2:
                bits |= 64
            if ge4:
                bits |= 128
    if straight_in(ab | cd, r):
        bits |= 16
    for m in (a, b, c, d):
        if popcount(m) >= 5:
            bits |= 32
            if straight_in(m, r):
                bits |= 256
    return bits


@dataclass(frozen=True)
class ContainmentProfile:
    present: FrozenSet[HandClass]

    def __post_init__(self) -> None:
        p = self.present
        if HandClass.HC not in p:
            raise ValueError("every profile contains HC")
        implied = {
            HandClass.SF: (HandClass.ST, HandClass.FL),
            HandClass.X4: (HandClass.X3, HandClass.P2),
            HandClass.FH: (HandClass.X3, HandClass.P2),
            HandClass.X3: (HandClass.P1,),
            HandClass.P2: (HandClass.P1,),
        }
        for h, needs in implied.items():
            if h in p and not all(n in p for n in needs):
                raise ValueError(f"profile has {h} without {', '.join(map(str, needs))}")

    @classmethod
    def from_bits(cls, bits: int) -> "ContainmentProfile":
        return cls(frozenset(h for h in CLASSES if bits >> h.index & 1))

    @property
    def bits(self) -> int:
        return sum(1 << h.index for h in self.present)

    def __contains__(self, h: object) -> bool:
        return h in self.present

    def __iter__(self):
        return (h for h in CLASSES if h in self.present)

    def __str__(self) -> str:
        return "{" + ",".join(str(h) for h in self) + "}"


def is_straight_ranks(ranks: Iterable[int], r: int) -> bool:
    ranks = set(ranks)
    check_ranks(r)
    if len(ranks) != 5:
        raise ValueError(f"need 5 distinct ranks, got {sorted(ranks)}")
    if any(not 0 <= x < r for x in ranks):
        raise ValueError(f"ranks {sorted(ranks)} outside [0, {r})")
    lo = min(ranks)
    if ranks == set(range(lo, lo + 5)):
        return True
    return ranks == {r - 1, 0, 1, 2, 3}


def classify(hand: HandSet, r: int) -> ContainmentProfile:
    hand.check_deck(r)
    return ContainmentProfile.from_bits(profile_bits(*hand.suit_masks(), r))


def five_card_classes(cards: Iterable[Card], r: int) -> FrozenSet[HandClass]:
    """Classes formed by exactly these five cards, without any ranking."""
    cards = tuple(cards)
    counts = sorted(Counter(c.rank for c in cards).values(), reverse=True)
    found = {HandClass.HC}
    if counts[0] >= 2:
        found.add(HandClass.P1)
    if counts[0] == 4 or counts[:2] == [2, 2] or counts[:2] == [3, 2]:
        found.add(HandClass.P2)
    if counts[0] >= 3:
        found.add(HandClass.X3)
    if counts[0] == 4:
        found.add(HandClass.X4)
    if counts == [3, 2]:
        found.add(HandClass.FH)
    straight = len(counts) == 5 and is_straight_ranks((c.rank for c in cards), r)
    flush = len({c.suit for c in cards}) == 1
    if straight:
        found.add(HandClass.ST)
    if flush:
        found.add(HandClass.FL)
    if straight and flush:
        found.add(HandClass.SF)
    return frozenset(found)


def classify_by_subsets(hand: HandSet, r: int) -> ContainmentProfile:
    """Reference containment: union over all 21 five-card subsets."""
    hand.check_deck(r)
    present: set = set()
    for five in combinations(sorted(hand.cards), 5):
        present |= five_card_classes(five, r)
    return ContainmentProfile(frozenset(present))


@dataclass(frozen=True)
class Ranking:
    """Strict order over tie groups, lowest rank first.

    ``levels[i]`` is a tuple of classes sharing rank ``i`` (a tie when it
    holds more than one class). Classes inside a level are kept in
    declaration order, so equality ignores the order a tie was written in.
    """

    levels: Tuple[Tuple[HandClass, ...], ...]

    def __post_init__(self) -> None:
        levels = tuple(tuple(sorted(lv, key=lambda h: h.index)) for lv in self.levels)
        flat = [h for lv in levels for h in lv]
        if any(not lv for lv in levels) or sorted(flat, key=lambda h: h.index) != list(CLASSES):
            raise ValueError("a ranking must place each of the nine classes exactly once")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "_level", {h: i for i, lv in enumerate(levels) for h in lv})

    @classmethod
    def from_order(cls, order: Iterable[HandClass]) -> "Ranking":
        return cls(tuple((h,) for h in order))

    @classmethod
    def from_counts(cls, counts: Mapping[HandClass, int]) -> "Ranking":
        """Rarer ranks higher; equal counts form a tie group."""
        by_count: dict = {}
        for h in CLASSES:
            by_count.setdefault(counts[h], []).append(h)
        return cls(tuple(tuple(by_count[c]) for c in sorted(by_count, reverse=True)))

    @classmethod
    def canonical(cls) -> "Ranking":
        return cls.from_order(CLASSES)

    def level_of(self, h: HandClass) -> int:
        return self._level[h]  # type: ignore[attr-defined]

    @property
    def order(self) -> Tuple[HandClass, ...]:
        return tuple(h for lv in self.levels for h in lv)

    @property
    def ties(self) -> Tuple[Tuple[HandClass, ...], ...]:
        return tuple(lv for lv in self.levels if len(lv) > 1)

    def restrict(self, keep: Iterable[HandClass]) -> Tuple[Tuple[HandClass, ...], ...]:
        """Induced order on a subset of classes, as tie groups lowest first."""
        keep = set(keep)
        return tuple(t for t in (tuple(h for h in lv if h in keep) for lv in self.levels) if t)

    def __str__(self) -> str:
        return " < ".join("=".join(map(str, lv)) for lv in self.levels)


def best_class(
    profile: ContainmentProfile, ranking: Ranking
) -> Tuple[HandClass, Optional[Tuple[HandClass, ...]]]:
    """Highest-ranked class present in ``profile``.

    Returns ``(class, tied)`` where ``tied`` lists the present classes sharing
    the top tie group (``None`` when the winner is unique). Within a tie the
    class later in declaration order is declared.
    """
    top_level = max(ranking.level_of(h) for h in profile.present)
    top = tuple(h for h in CLASSES if h in profile.present and ranking.level_of(h) == top_level)
    return top[-1], (top if len(top) > 1 else None)

