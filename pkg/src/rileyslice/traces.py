"""Farey trace polynomials: exact construction, recursion, evaluation, roots.

The trace of the slope-p/q word in the slice generators is a degree-q
polynomial in rho.  For two parabolic generators the coefficients are exact
integers (they grow superpolynomially in q, so Python's big ints matter);
for finite cone orders they are complex doubles built from exp(+-i pi/a),
exp(+-i pi/b).

Two independent construction routes are kept:

* ``farey_polynomial_direct`` multiplies the 2q generator matrices over the
  polynomial ring -- the authoritative definition.
* ``farey_polynomial_recursive`` walks the Stern-Brocot tree.  Under the
  cutting-sequence convention used here, the half word U of the mediant of
  neighbouring slopes a/b < c/d factors as U_l * phi(U_r) where phi flips
  all exponents iff a is odd and swaps X<->Y iff b is odd, and the full word
  is U * phi'(U) with phi' given by the slope's own parities.  A plain
  trace-level three-term recursion is *false* for this convention (checked
  symbolically), so the recursion carries the four twisted half-word
  matrices instead; it reproduces the direct product exactly and is
  verified against it once per cone-order pair.

Root finding for the cusp equations p(rho) = -2 uses Aberth-Ehrlich in
double precision with Newton-polygon initial guesses, then Newton-polishes
in extended precision against the exact coefficients (the parabolic
polynomials are far too ill-conditioned near q = 40 for double-precision
residuals).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from .errors import NumericRangeError, RileySliceError, RootConvergenceError, ValidationError
from .farey import Slope, farey_neighbors, farey_word
from .moebius import PARABOLIC_ORDERS, ConeOrders, MoebiusMap, generator_pair

__all__ = [
    "TracePolynomial",
    "farey_polynomial_direct",
    "farey_polynomial_recursive",
    "farey_trace",
    "poly_eval",
    "poly_roots",
    "word_matrix",
]

_MAX_Q = 2000
_RHO_LIMIT = 1e70


# ---------------------------------------------------------------------------
# dense polynomial helpers (ascending coefficients; int or complex entries)

def _pmul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


def _padd(f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, b in enumerate(g):
        out[i] += b
    return out


def _ptrim(f):
    n = len(f)
    while n > 1 and f[n - 1] == 0:
        n -= 1
    return tuple(f[:n])


# polynomial 2x2 matrices are 4-tuples (a, b, c, d) of coefficient lists

def _pm_mul(A, B):
    a1, b1, c1, d1 = A
    a2, b2, c2, d2 = B
    return (
        _padd(_pmul(a1, a2), _pmul(b1, c2)),
        _padd(_pmul(a1, b2), _pmul(b1, d2)),
        _padd(_pmul(c1, a2), _pmul(d1, c2)),
        _padd(_pmul(c1, b2), _pmul(d1, d2)),
    )


def _pm_trace_of_product(A, B):
    a1, b1, c1, d1 = A
    a2, b2, c2, d2 = B
    return _padd(_padd(_pmul(a1, a2), _pmul(b1, c2)),
                 _padd(_pmul(c1, b2), _pmul(d1, d2)))


def _phase(order):
    """exp(i pi / order); exact int 1 for a puncture so parabolic stays in Z."""
    if order == math.inf:
        return 1
    return cmath.exp(1j * math.pi / order)


def _gen_poly_matrices(orders):
    """Polynomial matrices for X, X^-1, Y, Y^-1 keyed by ('X'|'Y', exponent)."""
    al = _phase(orders.a)
    be = _phase(orders.b)
    alc = 1 if al == 1 else al.conjugate()
    bec = 1 if be == 1 else be.conjugate()
    return {
        ("X", 1): ([al], [1], [0], [alc]),
        ("X", -1): ([alc], [-1], [0], [al]),
        ("Y", 1): ([be], [0], [0, 1], [bec]),
        ("Y", -1): ([bec], [0], [0, -1], [be]),
    }


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TracePolynomial:
    """Trace of the slope-p/q Farey word as a polynomial in rho.

    Coefficients ascend; they are exact ints when both orders are infinite
    and complex floats otherwise.  degree == q and |leading| == 1.
    """

    slope: Slope
    orders: ConeOrders
    coefficients: tuple

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def exact(self):
        return self.orders.parabolic

    def derivative_coefficients(self):
        return tuple(k * c for k, c in enumerate(self.coefficients) if k > 0)

    def __call__(self, rho):
        return poly_eval(self, rho)[0]

    def to_json_dict(self):
        coeffs = []
        for c in self.coefficients:
            if isinstance(c, int):
                coeffs.append([c, 0])
            else:
                c = complex(c)
                coeffs.append([c.real, c.imag])
        return {
            "slope": str(self.slope),
            "orders": self.orders.json_pair(),
            "coefficients": coeffs,
        }


def _check_slope(s):
    if s.is_apex:
        raise ValidationError("the apex 1/0 has no Farey polynomial")
    if s.q > _MAX_Q:
        raise ValidationError(f"denominator {s.q} beyond the supported {_MAX_Q}")


@lru_cache(maxsize=4096)
def farey_polynomial_direct(s, orders=PARABOLIC_ORDERS):
    """Trace of the symbolic generator-matrix product for slope s."""
    _check_slope(s)
    gens = _gen_poly_matrices(orders)
    word = farey_word(s).letters
    mat = ([1], [0], [0], [1])
    for letter in word[:-1]:
        mat = _pm_mul(mat, gens[letter])
    coeffs = _ptrim(_pm_trace_of_product(mat, gens[word[-1]]))
    if len(coeffs) - 1 != s.q or abs(abs(complex(coeffs[-1])) - 1.0) > 1e-9:
        raise RileySliceError(f"direct construction broken at {s}")  # pragma: no cover
    return TracePolynomial(slope=s, orders=orders, coefficients=coeffs)


# -- recursion over twisted half-word matrices ------------------------------

def _twist_seed(gens, letter):
    """The four twisted variants of a single-letter half word."""
    gen, e = letter
    out = {}
    for flip in (0, 1):
        for swap in (0, 1):
            g = ("X" if gen == "Y" else "Y") if swap else gen
            out[(flip, swap)] = gens[(g, -e if flip else e)]
    return out


@lru_cache(maxsize=4096)
def _half_word_node(s, orders):
    """Twisted half-word matrices for slope s, built along the Stern-Brocot path."""
    gens = _gen_poly_matrices(orders)
    if s == Slope(0, 1):
        return _twist_seed(gens, ("Y", 1))
    if s == Slope(1, 1):
        return _twist_seed(gens, ("Y", -1))
    left, right = farey_neighbors(s)
    ln = _half_word_node(left, orders)
    rn = _half_word_node(right, orders)
    a, b = left.p, left.q
    return {
        (flip, swap): _pm_mul(ln[(flip, swap)], rn[((flip + a) % 2, (swap + b) % 2)])
        for flip in (0, 1)
        for swap in (0, 1)
    }


def _recursive_raw(s, orders):
    if s.q > 1:
        # Populate the memo along the Stern-Brocot path root-first so the
        # recursive lookups never nest more than one level deep.
        left, right = Slope(0, 1), Slope(1, 1)
        while True:
            med = Slope(left.p + right.p, left.q + right.q)
            _half_word_node(med, orders)
            if med == s:
                break
            if s < med:
                right = med
            else:
                left = med
    node = _half_word_node(s, orders)
    coeffs = _ptrim(_pm_trace_of_product(node[(0, 0)], node[(s.p % 2, s.q % 2)]))
    return TracePolynomial(slope=s, orders=orders, coefficients=coeffs)


@lru_cache(maxsize=64)
def _verify_recursion(orders):
    """One-time seed/twist calibration against the direct oracle (fails loudly)."""
    for q in range(1, 9):
        for p in range(q + 1):
            if math.gcd(p, q) != 1:
                continue
            s = Slope(p, q)
            got = _recursive_raw(s, orders).coefficients
            want = farey_polynomial_direct(s, orders).coefficients
            if len(got) != len(want):
                raise RileySliceError(f"recursion degree mismatch at {s}, orders {orders}")
            scale = max(max(abs(complex(c)) for c in want), 1.0)
            for x, y in zip(got, want):
                if isinstance(x, int) and isinstance(y, int):
                    if x != y:
                        raise RileySliceError(
                            f"recursion seed/sign mismatch at {s}, orders {orders}")
                elif abs(complex(x) - complex(y)) > 1e-9 * scale:
                    raise RileySliceError(
                        f"recursion seed/sign mismatch at {s}, orders {orders}")
    return True


def farey_polynomial_recursive(s, orders=PARABOLIC_ORDERS):
    """Stern-Brocot recursion for the Farey polynomial of slope s.

    Coefficientwise equal to ``farey_polynomial_direct``: exactly in the
    parabolic case, to 1e-9 relative otherwise.  The twist table is checked
    against the direct oracle once per cone-order pair.
    """
    _check_slope(s)
    _verify_recursion(orders)
    return _recursive_raw(s, orders)


# ---------------------------------------------------------------------------
# numeric evaluation

def word_matrix(word, rho, orders=PARABOLIC_ORDERS):
    """Left-to-right numeric product of generator matrices for a word.

    ``word`` is a FareyWord or any iterable of ('X'|'Y', exponent) pairs.
    """
    if abs(rho) > _RHO_LIMIT:
        raise NumericRangeError(f"|rho| = {abs(rho):g} too large for word products")
    letters = getattr(word, "letters", word)
    X, Y = generator_pair(rho, orders)
    table = {("X", 1): X, ("X", -1): X.inverse(),
             ("Y", 1): Y, ("Y", -1): Y.inverse()}
    out = MoebiusMap.identity()
    for letter in letters:
        out = out @ table[letter]
    return out


@lru_cache(maxsize=8192)
def _compiled_word(s):
    """Letters of the slope word as opcodes 0..3: X, X^-1, Y, Y^-1."""
    codes = {("X", 1): 0, ("X", -1): 1, ("Y", 1): 2, ("Y", -1): 3}
    return tuple(codes[letter] for letter in farey_word(s).letters)


def farey_trace(s, orders, rho):
    """(p(rho), p'(rho)) via the matrix product with a product-rule derivative.

    Numerically stable where the Horner form is hopeless: on pleating rays
    the coefficient form suffers catastrophic cancellation for q around 40
    while intermediate matrix norms stay moderate.  This is the evaluator
    every continuation step leans on, hence the flattened hot loop.
    """
    rho = complex(rho)
    al = complex(_phase(orders.a))
    be = complex(_phase(orders.b))
    alc, bec = al.conjugate(), be.conjugate()
    nrho = -rho
    ma, mb, mc, md = 1 + 0j, 0j, 0j, 1 + 0j
    da, db, dc, dd = 0j, 0j, 0j, 0j
    for code in _compiled_word(s):
        if code == 0:  # X: [[al, 1], [0, alc]]
            ma, mb = ma * al, ma + mb * alc
            mc, md = mc * al, mc + md * alc
            da, db = da * al, da + db * alc
            dc, dd = dc * al, dc + dd * alc
        elif code == 1:  # X^-1: [[alc, -1], [0, al]]
            ma, mb = ma * alc, mb * al - ma
            mc, md = mc * alc, md * al - mc
            da, db = da * alc, db * al - da
            dc, dd = dc * alc, dd * al - dc
        elif code == 2:  # Y: [[be, 0], [rho, bec]]; dY lower-left = 1
            da, db = da * be + db * rho + mb, db * bec
            dc, dd = dc * be + dd * rho + md, dd * bec
            ma, mb = ma * be + mb * rho, mb * bec
            mc, md = mc * be + md * rho, md * bec
        else:  # Y^-1: [[bec, 0], [-rho, be]]; derivative entry -1
            da, db = da * bec + db * nrho - mb, db * be
            dc, dd = dc * bec + dd * nrho - md, dd * be
            ma, mb = ma * bec + mb * nrho, mb * be
            mc, md = mc * bec + md * nrho, md * be
    return ma + md, da + dd


def poly_eval(P, rho):
    """Horner evaluation: (value, derivative) at rho.

    Backward error is machine epsilon times degree times the evaluation
    condition number; for the severely ill-conditioned parabolic
    polynomials near q = 40 prefer ``farey_trace``.
    """
    rho = complex(rho)
    v = 0j
    dv = 0j
    try:
        for c in reversed(P.coefficients):
            dv = dv * rho + v
            v = v * rho + c
    except OverflowError as exc:  # ints beyond float range
        raise NumericRangeError("coefficients exceed double range") from exc
    return v, dv


# ---------------------------------------------------------------------------
# Aberth-Ehrlich roots

def _newton_polygon_init(c):
    """Initial guesses from the Newton polygon of |coefficients| (Bini 1996).

    The upper convex hull of (k, log|c_k|) splits the degree into annuli,
    one radius per hull edge; angles are spread per annulus with a fixed
    irrational offset so no starting point sits on a symmetry axis.
    """
    n = len(c) - 1
    logs = [math.log(abs(x)) if x != 0 else -1e300 for x in c]
    hull = [(0, logs[0])]
    for k in range(1, n + 1):
        while len(hull) >= 2:
            (k1, v1), (k2, v2) = hull[-2], hull[-1]
            if (v2 - v1) * (k - k2) <= (logs[k] - v2) * (k2 - k1):
                hull.pop()
            else:
                break
        hull.append((k, logs[k]))
    guesses = []
    for edge, ((k1, v1), (k2, v2)) in enumerate(zip(hull, hull[1:])):
        m = k2 - k1
        r = math.exp((v1 - v2) / m)
        for j in range(m):
            theta = 2 * math.pi * j / m + 0.4 + 0.5 * edge + 0.01 * len(guesses)
            guesses.append(r * cmath.exp(1j * theta))
    return guesses


def _horner_pair(c, z):
    v = 0j
    dv = 0j
    for a in reversed(c):
        dv = dv * z + v
        v = v * z + a
    return v, dv


def _aberth_double(c, tol, max_sweeps):
    """Gauss-Seidel Ehrlich-Aberth sweeps in double precision."""
    n = len(c) - 1
    z = _newton_polygon_init(c)
    clamp = 2.0 * (1.0 + max(abs(x) for x in c[:-1]) / abs(c[-1]))
    converged = [False] * n
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        moved = False
        for k in range(n):
            zk = z[k]
            v, dv = _horner_pair(c, zk)
            if v == 0:
                converged[k] = True
                continue
            w = v / dv if dv != 0 else 0.5 + 0.5j
            acc = 0j
            for j in range(n):
                if j != k:
                    d = zk - z[j]
                    if d != 0:
                        acc += 1.0 / d
            den = 1.0 - w * acc
            corr = w / den if den != 0 else w
            if corr != corr or abs(corr) > 1e100:  # NaN / blow-up guard
                corr = w
            zk = zk - corr
            if abs(zk) > clamp:
                zk = zk / abs(zk) * clamp * 0.5
                moved = True
            z[k] = zk
            ok = abs(corr) <= tol * (1.0 + abs(zk))
            converged[k] = ok
            moved = moved or not ok
        if not moved:
            break
    return z, converged, sweeps


def _mp_polish(exact, z, steps, dps):
    """Newton polish against exact coefficients at elevated precision."""
    with mp.workdps(dps):
        cs = [mp.mpc(c) for c in exact]
        zz = mp.mpc(z)
        for _ in range(steps):
            v = mp.mpc(0)
            dv = mp.mpc(0)
            for a in reversed(cs):
                dv = dv * zz + v
                v = v * zz + a
            if dv == 0:
                break
            zz = zz - v / dv
        return complex(zz)


def _mp_residual(exact, z, dps):
    with mp.workdps(dps):
        zz = mp.mpc(z)
        v = mp.mpc(0)
        for a in reversed(exact):
            v = v * zz + a
        return float(abs(v))


def poly_roots(P, target=0.0, max_sweeps=500, tol=1e-13):
    """All degree-many roots of P(rho) = target, Aberth-Ehrlich + polish.

    Iterates in double precision from Newton-polygon starting points, then
    runs three Newton polish steps in extended precision against the exact
    coefficients (this is what makes the residual bound 1e-8 * (1 + sum|c|)
    reachable for the large-q parabolic polynomials).  Roots are returned
    sorted by (real, imag).  Raises RootConvergenceError with partial
    results when sweeps run out.
    """
    if P.degree < 1:
        raise ValidationError("need degree >= 1")
    exact = list(P.coefficients)
    t = complex(target)
    if isinstance(exact[0], int) and t.imag == 0 and t.real.is_integer():
        exact[0] -= int(t.real)
    else:
        exact[0] = complex(exact[0]) - t
    c = [complex(x) for x in exact]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
        exact.pop()
    n = len(c) - 1
    if n == 0:
        raise ValidationError("polynomial is constant after deflation")
    csum = sum(abs(x) for x in c)
    bound = 1e-8 * (1.0 + csum)
    dps = max(40, 25 + int(math.log10(1.0 + csum)) + n // 3)
    if n == 1:
        root = _mp_polish(exact, -c[0] / c[1], 3, dps)
        return [root]

    z, converged, sweeps = _aberth_double(c, tol, max_sweeps)
    roots = [_mp_polish(exact, zk, 3, dps) for zk in z]
    bad = [k for k, r in enumerate(roots) if _mp_residual(exact, r, dps) > bound]
    if bad:
        # extended-precision Aberth rescue for ill-conditioned clusters
        roots = _aberth_mp(exact, roots, dps)
        bad = [k for k, r in enumerate(roots) if _mp_residual(exact, r, dps) > bound]
    if bad or not all(converged):
        unconv = sorted(set(bad) | {k for k, ok in enumerate(converged) if not ok})
        if bad:
            raise RootConvergenceError(
                f"{len(unconv)} roots unconverged after {sweeps} sweeps",
                roots=[complex(r) for r in roots], unconverged=unconv)
    return sorted((complex(r) for r in roots), key=lambda w: (w.real, w.imag))


def _aberth_mp(exact, start, dps, max_sweeps=60):
    with mp.workdps(dps):
        cs = [mp.mpc(x) for x in exact]
        n = len(cs) - 1
        z = [mp.mpc(s) for s in start]
        stop = mp.mpf(10) ** (-(dps - 8))
        for _ in range(max_sweeps):
            moved = False
            for k in range(n):
                zk = z[k]
                v = mp.mpc(0)
                dv = mp.mpc(0)
                for a in reversed(cs):
                    dv = dv * zk + v
                    v = v * zk + a
                if v == 0:
                    continue
                w = v / dv if dv != 0 else mp.mpc(0.5, 0.5)
                acc = mp.mpc(0)
                for j in range(n):
                    if j != k:
                        d = zk - z[j]
                        if d != 0:
                            acc += 1 / d
                den = 1 - w * acc
                corr = w / den if den != 0 else w
                z[k] = zk - corr
                if abs(corr) > stop * (1 + abs(z[k])):
                    moved = True
            if not moved:
                break
        return [complex(zz) for zz in z]
