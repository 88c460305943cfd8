"""Closed-form inclusive frequencies as sums of products of binomials.

Each class's count is written as the same addends a hand-count derivation
produces (one per rank/suit pattern), so each term can be checked on its
own. A factor ``(a, b, k)`` stands for ``binom(a*r + b, k)``. ``bold`` marks
the addends that carry the leading-order growth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

from .exact import Polynomial, binom, binom_poly, poly_sum
from .hands import MIN_RANKS, HandClass, check_ranks

H = HandClass


class OutOfValidityError(ValueError):
    """Closed form requested below the rank count where it is valid."""

    def __init__(self, h: HandClass, r: int, min_r: int):
        super().__init__(
            f"closed form for {h} is valid only for r >= {min_r} (got r={r}); use enumeration"
        )
        self.hand_class = h
        self.r = r
        self.min_r = min_r


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    binoms: Tuple[Tuple[int, int, int], ...]
    bold: bool = False

    def value(self, r: int) -> Fraction:
        v = Fraction(self.coeff)
        for a, b, k in self.binoms:
            v *= binom(a * r + b, k)
        return v

    def polynomial(self) -> Polynomial:
        p = Polynomial.const(self.coeff)
        for a, b, k in self.binoms:
            p = p * binom_poly(a, b, k)
        return p


def T(coeff, *binoms, bold: bool = False) -> Term:
    return Term(Fraction(coeff), tuple(binoms), bold)


R1 = (1, 0, 1)  # r


def _rm(k: int) -> Tuple[int, int, int]:
    """binom(r - k, 1)"""
    return (1, -k, 1)


def _rc(k: int) -> Tuple[int, int, int]:
    """binom(r, k)"""
    return (1, 0, k)


HALF = Fraction(1, 2)

# Counting constants are kept in the factored form they arise in, e.g. 4*2 is
# (choice of suit) * (two edge windows).
TERMS: Dict[HandClass, Tuple[Term, ...]] = {
    H.SF: (
        T(4 * 2, (4, -6, 2)),
        T(4, _rm(5), (4, -7, 2), bold=True),
        T(4 * 2, (4, -7, 1)),
        T(4, _rm(6), (4, -8, 1)),
        T(4, _rm(5)),
    ),
    H.ST: (
        T(4**5, _rm(5), (4, -28, 2), bold=True),
        T(2 * 4**5, (4, -24, 2)),
        T(5 * 6 * 4**4, _rm(5), (4, -28, 1)),
        T(2 * 5 * 6 * 4**4, (4, -24, 1)),
        T(10 * 6**2 * 4**3, _rm(5)),
        T(2 * 10 * 6**2 * 4**3),
        T(5 * 4 * 4**4, _rm(3)),
        T(4**6, _rm(6), (4, -32, 1)),
        T(2 * 4**6, (4, -28, 1)),
        T(6 * 6 * 4**5, _rm(6)),
        T(2 * 6 * 6 * 4**5),
        T(4**7, _rm(7)),
        T(2 * 4**7),
    ),
    H.X4: (T(1, R1, (4, -4, 3), bold=True),),
    H.FH: (
        T(6 * 4, R1, _rm(1), _rm(2)),
        T(HALF * 4 * 4 * 4, R1, _rm(1), _rm(2)),
        T(HALF * 4 * 6 * 6, R1, _rm(1), _rm(2)),
        T(HALF * 4 * 6 * 4 * 4, R1, _rm(1), _rm(2), _rm(3), bold=True),
        T(4, R1, _rm(1)),
    ),
    H.X3: (
        T(2 * 4, _rc(2)),
        T(3 * 4 * 4 * 4, _rc(3)),
        T(6 * 2 * 4 * 6 * 4 * 4, _rc(4)),
        T(3 * 4 * 6 * 6, _rc(3)),
        T(5 * 4**5, _rc(5), bold=True),
        T(6 * 6 * 4, _rc(3)),
        T(4 * 4**3, _rc(4)),
    ),
    H.P2: (
        T(2 * 4, _rc(2)),
        T(3 * 4 * 4 * 4, _rc(3)),
        T(6 * 2 * 4 * 6 * 4 * 4, _rc(4)),
        T(3 * 4 * 6 * 6, _rc(3)),
        T(6 * 6 * 4, _rc(3)),
        T(4 * 4**3, _rc(4)),
        T(4 * 6**3 * 4, _rc(4)),
        T(10 * 6**2 * 4**3, _rc(5), bold=True),
    ),
    H.P1: (
        T(1, (4, 0, 7), bold=True),
        T(-(4**7), _rc(7), bold=True),
    ),
    H.FL: (
        T(4, _rc(5), (3, 0, 2), bold=True),
        T(4, _rc(6), (3, 0, 1), bold=True),
        T(4, _rc(7), bold=True),
    ),
    H.HC: (T(1, (4, 0, 7), bold=True),),
}

MIN_VALID_R: Dict[HandClass, int] = {h: MIN_RANKS for h in HandClass}
MIN_VALID_R[H.SF] = 6
MIN_VALID_R[H.ST] = 8

# Leading terms as published alongside the formulas.
PUBLISHED_LEADING: Dict[HandClass, Tuple[Fraction, int]] = {
    H.SF: (Fraction(32), 3),
    H.ST: (Fraction(8192), 3),
    H.X4: (Fraction(32, 3), 4),
    H.FH: (Fraction(192), 4),
    H.X3: (Fraction(128, 3), 5),
    H.P2: (Fraction(192), 5),
    H.P1: (Fraction(256, 5), 6),
    H.FL: (Fraction(211, 1260), 7),
}


@dataclass(frozen=True)
class FormulaEntry:
    hand_class: HandClass
    polynomial: Polynomial
    min_valid_r: int
    leading: Tuple[Fraction, int]
    terms: Tuple[Term, ...]

    def bold_polynomial(self) -> Polynomial:
        return poly_sum([t.polynomial() for t in self.terms if t.bold])


def freq_closed(h: HandClass, r: int) -> int:
    h = HandClass(h)
    check_ranks(r)
    if r < MIN_VALID_R[h]:
        raise OutOfValidityError(h, r, MIN_VALID_R[h])
    total = sum((t.value(r) for t in TERMS[h]), Fraction(0))
    if total.denominator != 1:
        raise ArithmeticError(f"{h} formula gave a non-integer count at r={r}: {total}")
    return total.numerator


@lru_cache(maxsize=None)
def freq_poly(h: HandClass) -> FormulaEntry:
    h = HandClass(h)
    p = poly_sum([t.polynomial() for t in TERMS[h]])
    return FormulaEntry(h, p, MIN_VALID_R[h], p.leading, TERMS[h])


def closed_counts(r: int) -> Dict[HandClass, int]:
    """All nine inclusive counts at ``r``; every class must be in its valid range."""
    return {h: freq_closed(h, r) for h in HandClass}
