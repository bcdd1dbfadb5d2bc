"""Complex 2x2 matrix algebra and the Mobius action on the Riemann sphere.

Everything downstream (trace polynomials, rays, limit sets) is built on the
two-generator groups

    X = [[e^{i pi/a}, 1], [0, e^{-i pi/a}]],   Y = [[e^{i pi/b}, 0], [rho, e^{-i pi/b}]]

with cone orders a, b in {2, 3, ...} or infinity (where e^{i pi/inf} := 1,
giving the classical parabolic pair).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import NumericRangeError, ValidationError

__all__ = [
    "INF",
    "ConeOrders",
    "MapClass",
    "MapKind",
    "MoebiusMap",
    "chordal_distance",
    "classify",
    "fixed_points",
    "generator_pair",
    "jorgensen_value",
]

_ENTRY_LIMIT = 1e150


class _Infinity:
    """The distinguished point at infinity on the Riemann sphere."""

    __slots__ = ()

    def __repr__(self):
        return "INF"


INF = _Infinity()

# A sphere point is either a complex number or INF.
SpherePoint = "complex | _Infinity"


def chordal_distance(u, v):
    """Chordal metric on the Riemann sphere (diameter 2)."""
    if u is INF and v is INF:
        return 0.0
    if u is INF:
        return 2.0 / math.sqrt(1.0 + abs(v) ** 2)
    if v is INF:
        return 2.0 / math.sqrt(1.0 + abs(u) ** 2)
    return 2.0 * abs(u - v) / math.sqrt((1.0 + abs(u) ** 2) * (1.0 + abs(v) ** 2))


@dataclass(frozen=True)
class ConeOrders:
    """Cone point orders (a, b); math.inf marks a puncture (parabolic generator).

    max(a, b) >= 3 is required except for the degenerate pair (2, 2), which is
    accepted but flagged: that slice collapses to an interval.
    """

    a: float
    b: float

    def __post_init__(self):
        for n in (self.a, self.b):
            if n == math.inf:
                continue
            if not isinstance(n, int) or n < 2:
                raise ValidationError(f"cone order must be an integer >= 2 or inf, got {n!r}")
        if max(self.a, self.b) < 3 and not self.degenerate:
            raise ValidationError(f"cone orders need max(a,b) >= 3, got ({self.a},{self.b})")

    @property
    def degenerate(self):
        return self.a == 2 and self.b == 2

    @property
    def parabolic(self):
        return self.a == math.inf and self.b == math.inf

    @staticmethod
    def parse(text):
        """Parse "a,b" where each part is an integer or the literal "inf"."""
        parts = text.split(",")
        if len(parts) != 2:
            raise ValidationError(f"orders must look like 'a,b', got {text!r}")
        vals = []
        for part in parts:
            part = part.strip()
            if part == "inf":
                vals.append(math.inf)
            else:
                try:
                    vals.append(int(part))
                except ValueError:
                    raise ValidationError(f"bad cone order {part!r}") from None
        return ConeOrders(vals[0], vals[1])

    def __str__(self):
        fmt = lambda n: "inf" if n == math.inf else str(n)
        return f"{fmt(self.a)},{fmt(self.b)}"

    def json_pair(self):
        return ["inf" if n == math.inf else n for n in (self.a, self.b)]


PARABOLIC_ORDERS = ConeOrders(math.inf, math.inf)


class MapKind(Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    STRICTLY_LOXODROMIC = "strictly-loxodromic"


@dataclass(frozen=True)
class MapClass:
    kind: MapKind
    order: int | None = None  # rotation order, elliptic only, None if undetected

    def __str__(self):
        if self.kind is MapKind.ELLIPTIC and self.order:
            return f"elliptic (order {self.order})"
        return self.kind.value


class MoebiusMap:
    """Determinant-1 complex 2x2 matrix acting on the Riemann sphere.

    The public constructor rescales arbitrary nonsingular entries to
    determinant 1 and fixes the sign of the square root so that the entry of
    largest magnitude has non-negative real part (imaginary part breaking
    ties at zero).  Group operations (compose, inverse, words) bypass the
    sign rule and preserve the literal matrix product, so that traces of
    words in fixed generator matrices are reproducible.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if det == 0:
            raise ValidationError("matrix is singular")
        if abs(det - 1.0) > 1e-12:
            s = cmath.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        entries = (a, b, c, d)
        lead = max(entries, key=abs)
        if lead.real < 0 or (lead.real == 0 and lead.imag < 0):
            a, b, c, d = -a, -b, -c, -d
        self._store(a, b, c, d)

    def _store(self, a, b, c, d):
        for x in (a, b, c, d):
            if abs(x) > _ENTRY_LIMIT:
                raise NumericRangeError(f"matrix entry {x!r} exceeds {_ENTRY_LIMIT:g}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def _raw(cls, a, b, c, d):
        """Build without the sign rule; entries must already have det ~ 1."""
        m = object.__new__(cls)
        m._store(complex(a), complex(b), complex(c), complex(d))
        return m

    @classmethod
    def identity(cls):
        return cls._raw(1, 0, 0, 1)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def compose(self, other):
        """Matrix product self*other (acts as self after other), rescaled to det 1.

        For det-1 inputs the rescale is a no-op up to rounding; the sign of
        the product is preserved.
        """
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        det = a * d - b * c
        if det == 0:
            raise NumericRangeError("product became singular (underflow)")
        if abs(det - 1.0) > 1e-15:
            s = cmath.sqrt(det)  # near 1, principal branch keeps the sign
            a, b, c, d = a / s, b / s, c / s, d / s
        return MoebiusMap._raw(a, b, c, d)

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self):
        return MoebiusMap._raw(self.d, -self.b, -self.c, self.a)

    def apply(self, z):
        """Fractional-linear action; f(-d/c) = INF and f(INF) = a/c."""
        if z is INF:
            if self.c == 0:
                return INF
            return self.a / self.c
        z = complex(z)
        den = self.c * z + self.d
        if den == 0:
            return INF
        return (self.a * z + self.b) / den

    def __call__(self, z):
        return self.apply(z)

    def is_identity(self, tol=1e-9):
        """True for +-identity (the same element of PSL(2,C))."""
        for sign in (1, -1):
            if (abs(self.a - sign) <= tol and abs(self.d - sign) <= tol
                    and abs(self.b) <= tol and abs(self.c) <= tol):
                return True
        return False

    def __repr__(self):
        return f"MoebiusMap({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


def compose(f, g):
    return f.compose(g)


def inverse(f):
    return f.inverse()


def apply(f, z):
    return f.apply(z)


def classify(f, tol=1e-9):
    """Conjugacy class of a Mobius map from tr^2.

    tr^2 = 4 parabolic, tr^2 in [0,4) elliptic, tr^2 in (4,oo) hyperbolic,
    anything off the ray [0,oo) strictly loxodromic.  The tolerance band
    around the boundary values 0 and 4 resolves toward the closed class
    (4 -> parabolic, 0 -> elliptic).  +-identity reports Identity.
    """
    if f.is_identity(tol):
        return MapClass(MapKind.IDENTITY)
    t2 = f.trace() ** 2
    if abs(t2 - 4.0) <= tol:
        return MapClass(MapKind.PARABOLIC)
    if abs(t2.imag) <= tol:
        x = t2.real
        if -tol <= x < 4.0:
            return MapClass(MapKind.ELLIPTIC, order=_elliptic_order(max(x, 0.0)))
        if x > 4.0:
            return MapClass(MapKind.HYPERBOLIC)
    return MapClass(MapKind.STRICTLY_LOXODROMIC)


def _elliptic_order(t2, tol=1e-6, max_order=1000):
    """Smallest n <= max_order with tr^2 = 4 cos^2(k pi / n), gcd(k, n) = 1."""
    theta = math.acos(min(1.0, math.sqrt(t2) / 2.0))  # in (0, pi/2]
    for n in range(2, max_order + 1):
        k = round(n * theta / math.pi)
        if k < 1 or math.gcd(k, n) != 1:
            continue
        if abs(t2 - 4.0 * math.cos(k * math.pi / n) ** 2) <= tol:
            return n
    return None


def fixed_points(f):
    """Fixed points on the sphere: one for parabolics, two otherwise.

    Raises ValidationError for the identity (everything is fixed).  The
    residual |f(z) - z| is at machine level by construction.
    """
    if f.is_identity():
        raise ValidationError("identity fixes every point")
    a, b, c, d = f.entries
    if c == 0:
        # INF is fixed; second point b/(d-a) unless the map is a translation
        if abs(a - d) <= 1e-14 * (abs(a) + abs(d)):
            return [INF]
        return [b / (d - a), INF]
    t2 = f.trace() ** 2
    disc = cmath.sqrt(t2 - 4.0)
    if abs(t2 - 4.0) <= 1e-9:
        return [(a - d) / (2 * c)]
    z1 = (a - d + disc) / (2 * c)
    z2 = (a - d - disc) / (2 * c)
    return [z1, z2]


def jorgensen_value(A, B):
    """|tr^2 A - 4| + |tr(ABA^-1B^-1) - 2|.

    A value below 1 certifies that <A,B> is not both discrete and
    non-elementary (Jorgensen's inequality).
    """
    comm = A @ B @ A.inverse() @ B.inverse()
    return abs(A.trace() ** 2 - 4.0) + abs(comm.trace() - 2.0)


def _unit_phase(order):
    """exp(i pi / order) with the convention pi/inf := 0."""
    if order == math.inf:
        return 1.0 + 0.0j
    return cmath.exp(1j * math.pi / order)


def generator_pair(rho, orders=PARABOLIC_ORDERS):
    """The slice generators (X, Y_rho) for the given cone orders.

    X is upper triangular with unit off-diagonal, Y_rho lower triangular
    with rho below the diagonal; both are returned as written (no sign
    normalisation), so generator traces are 2 cos(pi/a) and 2 cos(pi/b).
    """
    rho = complex(rho)
    if not (math.isfinite(rho.real) and math.isfinite(rho.imag)):
        raise ValidationError("rho must be finite")
    al = _unit_phase(orders.a)
    be = _unit_phase(orders.b)
    X = MoebiusMap._raw(al, 1.0, 0.0, al.conjugate())
    Y = MoebiusMap._raw(be, 0.0, rho, be.conjugate())
    return X, Y
