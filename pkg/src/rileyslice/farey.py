"""Rational slopes, Farey/Stern-Brocot combinatorics and cutting-sequence words.

The slope p/q indexes a word of length 2q in the generators X, Y: letter i is
Y for odd i and X for even i, with exponent (-1)^floor(i p / q).  These are
the words whose traces cut out the pleating rays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ValidationError

__all__ = [
    "APEX",
    "FareyWord",
    "Slope",
    "farey_neighbors",
    "farey_sequence",
    "farey_word",
    "make_slope",
    "stern_brocot",
]


@dataclass(frozen=True, order=False)
class Slope:
    """Reduced rational p/q in [0, 1], or the Farey apex 1/0."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 0 or (self.q == 0 and self.p != 1):
            raise ValidationError(f"invalid slope {self.p}/{self.q}")

    @property
    def is_apex(self):
        return self.q == 0

    def value(self):
        return math.inf if self.q == 0 else self.p / self.q

    def mirror(self):
        """The reflection p/q -> (q-p)/q."""
        if self.is_apex:
            return self
        return Slope(self.q - self.p, self.q)

    def __lt__(self, other):
        return self.p * other.q < other.p * self.q if 0 not in (self.q, other.q) \
            else self.value() < other.value()

    def __le__(self, other):
        return self == other or self < other

    def __str__(self):
        return f"{self.p}/{self.q}"

    @staticmethod
    def parse(text):
        parts = text.strip().split("/")
        if len(parts) != 2:
            raise ValidationError(f"slope must look like 'p/q', got {text!r}")
        try:
            p, q = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValidationError(f"slope must be integer/integer, got {text!r}") from None
        return make_slope(p, q)


APEX = Slope(1, 0)


def make_slope(p, q):
    """Reduce and canonicalise; only [0,1] and the apex 1/0 are accepted.

    Other angles of the slice are reached through the conjugation and
    negation symmetries, so callers never need slopes outside [0,1].
    """
    if (p, q) == (0, 0):
        raise ValidationError("0/0 is not a slope")
    if q < 0:
        p, q = -p, -q
    if q == 0:
        return APEX
    g = math.gcd(abs(p), q)
    p, q = p // g, q // g
    if not 0 <= p <= q:
        raise ValidationError(f"slope {p}/{q} outside [0,1]")
    return Slope(p, q)


def farey_neighbors(s):
    """Farey parents (left, right) of s: mediant(left, right) = s, det = +-1."""
    if s.is_apex or s.q < 2:
        raise ValidationError(f"slope {s} has no Farey parents in [0,1]")
    b = pow(s.p, -1, s.q)          # p*b = 1 (mod q), 0 < b < q
    a = (s.p * b - 1) // s.q
    left = Slope(a, b)
    right = Slope(s.p - a, s.q - b)
    return left, right


def farey_sequence(max_q):
    """All reduced p/q with 0 <= p <= q <= max_q, ascending."""
    if max_q < 1:
        raise ValidationError("max_q must be >= 1")
    out = [Slope(0, 1), Slope(1, 1)]
    for q in range(2, max_q + 1):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                out.append(Slope(p, q))
    out.sort(key=lambda s: Fraction(s.p, s.q))
    return out


def stern_brocot(max_q):
    """Slopes in Stern-Brocot (mediant-generation) order, endpoints first.

    Yields 0/1, 1/1, then each generation's mediants left to right, skipping
    denominators above max_q.  Every reduced slope in [0,1] with q <= max_q
    appears exactly once.
    """
    yield Slope(0, 1)
    yield Slope(1, 1)
    level = [(Slope(0, 1), Slope(1, 1))]
    while level:
        nxt = []
        for left, right in level:
            med = Slope(left.p + right.p, left.q + right.q)
            if med.q > max_q:
                continue
            yield med
            nxt.append((left, med))
            nxt.append((med, right))
        level = nxt


@dataclass(frozen=True)
class FareyWord:
    """Alternating word in X, Y with +-1 exponents, first letter Y."""

    letters: tuple  # of (generator 'X'|'Y', exponent +-1)
    slope: Slope

    def __len__(self):
        return len(self.letters)

    def inverse_letters(self):
        return tuple((g, -e) for g, e in reversed(self.letters))

    def __str__(self):
        def shard(g, e):
            return g if e == 1 else f"{g}^-1"
        return " ".join(shard(g, e) for g, e in self.letters)


@lru_cache(maxsize=4096)
def farey_word(s):
    """Cutting-sequence word of slope s: length 2q, exponents (-1)^floor(ip/q)."""
    if s.is_apex:
        raise ValidationError("the apex 1/0 has no Farey word; its trace only "
                              "seeds the recursion")
    p, q = s.p, s.q
    letters = tuple(
        ("Y" if i % 2 == 1 else "X", -1 if ((i * p) // q) % 2 else 1)
        for i in range(1, 2 * q + 1)
    )
    return FareyWord(letters=letters, slope=s)
