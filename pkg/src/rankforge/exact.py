"""Exact binomials, polynomials over the rationals, and sign certificates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

Number = Union[int, Fraction]


def binom(n: int, k: int) -> int:
    """Binomial coefficient with ``binom(n, k) == 0`` whenever n < k or n < 0."""
    if k < 0:
        raise ValueError(f"binom: k must be nonnegative, got {k}")
    if n < 0 or n < k:
        return 0
    return math.comb(n, k)


class Polynomial:
    """Univariate polynomial with exact rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def const(cls, c: Number) -> "Polynomial":
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Tuple[Fraction, int]:
        if not self.coeffs:
            return Fraction(0), -1
        return self.coeffs[-1], self.degree

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            var = "" if i == 0 else ("r" if i == 1 else f"r^{i}")
            if not var:
                body = str(mag)
            elif mag == 1:
                body = var
            else:
                body = f"({mag})*{var}" if mag.denominator != 1 else f"{mag}*{var}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative exponent")
        out = Polynomial.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_int(self, x: int) -> int:
        """Evaluate at an integer, requiring an integer result."""
        v = self(x)
        if v.denominator != 1:
            raise ValueError(f"polynomial is not integer-valued at {x}: {v}")
        return v.numerator

    def shift(self, x0: Number) -> "Polynomial":
        """The polynomial ``q(x) = p(x + x0)`` (Taylor shift)."""
        cs = list(self.coeffs)
        n = len(cs)
        # repeated synthetic division by (x - x0)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                cs[j] += x0 * cs[j + 1]
        return Polynomial(cs)

    def integer_scaled(self) -> Tuple[int, ...]:
        """Integer coefficients of ``L * p`` for the positive lcm ``L`` of denominators."""
        lcm = 1
        for c in self.coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        return tuple((c * lcm).numerator for c in self.coeffs)


def binom_poly(a: int, b: int, k: int) -> Polynomial:
    """Polynomial p with ``p(r) == binom(a*r + b, k)`` whenever ``a*r + b >= k``."""
    if k < 0:
        raise ValueError(f"binom_poly: k must be nonnegative, got {k}")
    p = Polynomial.const(Fraction(1, math.factorial(k)))
    for i in range(k):
        p = p * Polynomial((b - i, a))
    return p


def _sign(v) -> int:
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class SignCertificate:
    """Outcome of :func:`certify_sign_permanence`.

    ``certified`` is true when ``p`` keeps ``sign`` on ``[x0, inf)``.
    ``criterion`` is ``"shifted-coefficients"`` (holds on all reals >= x0) or
    ``"integer-sweep"`` (holds on all integers >= x0). On failure ``witness``
    is the first integer >= x0 where the sign departs from ``p(x0)``'s.
    """

    certified: bool
    sign: int
    x0: int
    criterion: Optional[str] = None
    witness: Optional[int] = None
    bound: Optional[int] = None

    def __bool__(self) -> bool:
        return self.certified


def cauchy_bound(p: Polynomial) -> Fraction:
    """Every complex root of ``p`` has modulus below ``1 + max |a_i / a_d|``."""
    lead = p.coeffs[-1]
    return 1 + max((abs(c / lead) for c in p.coeffs[:-1]), default=Fraction(0))


def certify_sign_permanence(p: Polynomial, x0: int) -> SignCertificate:
    if not p:
        raise ValueError("cannot certify the sign of the zero polynomial")
    shifted = p.shift(x0)
    signs = {_sign(c) for c in shifted.coeffs if c}
    if len(signs) == 1 and shifted.coeffs[0] != 0:
        return SignCertificate(True, signs.pop(), x0, "shifted-coefficients")

    ints = p.integer_scaled()
    lead_sign = _sign(ints[-1])

    def value(n: int) -> int:
        acc = 0
        for c in reversed(ints):
            acc = acc * n + c
        return acc

    bound = math.ceil(cauchy_bound(p))
    s0 = _sign(value(x0))
    if s0 == 0:
        return SignCertificate(False, 0, x0, witness=x0, bound=bound)
    for n in range(x0 + 1, max(x0, bound) + 1):
        if _sign(value(n)) != s0:
            return SignCertificate(False, s0, x0, witness=n, bound=bound)
    # past the root bound the sign is the leading coefficient's
    if s0 != lead_sign:
        return SignCertificate(False, s0, x0, witness=max(x0, bound) + 1, bound=bound)
    return SignCertificate(True, s0, x0, "integer-sweep", bound=bound)


def poly_sum(terms: Sequence[Polynomial]) -> Polynomial:
    out = Polynomial()
    for t in terms:
        out = out + t
    return out
