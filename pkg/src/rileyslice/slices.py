"""Whole-slice operations: classical bounds, point certification, cusp clouds.

The certification logic layers proof-backed tests (Shimizu-Leutbecher,
the ray-neighbourhood theorem) above numerical evidence (Jorgensen
violations), in a fixed priority order, and always attaches a witness that
can be re-verified by direct evaluation.
"""

from __future__ import annotations

import cmath
import concurrent.futures
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import RileySliceError, ValidationError
from .farey import Slope, farey_sequence, stern_brocot
from .limitset import enumerate_reduced
from .moebius import (PARABOLIC_ORDERS, ConeOrders, chordal_distance,
                      fixed_points, generator_pair)
from .pleating import (CuspPoint, _continue_segment, cached_ray, cusp_point,
                       neighborhood_check)
from .raster import Raster, Viewport
from .traces import farey_trace

__all__ = [
    "BoundReport",
    "SlicePoint",
    "Verdict",
    "classical_bounds",
    "classify_point",
    "cusp_cloud",
    "render_slice",
]

log = logging.getLogger(__name__)

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class SlicePoint:
    rho: complex
    orders: ConeOrders = PARABOLIC_ORDERS


@dataclass(frozen=True)
class BoundReport:
    """Classical necessary/sufficient bounds for the parabolic slice.

    shimizu_leutbecher_ok: |rho| >= 1 (necessary for membership).
    cjr_interior: outside all three radius-2 circles at -2, 0, 2 (sufficient).
    lu_excluded: strictly inside the open Lyndon-Ullman hull (excluded).
    """

    shimizu_leutbecher_ok: bool
    cjr_interior: bool
    lu_excluded: bool


def in_open_lu_hull(rho):
    """Interior of the convex hull of the circle |z| = 2 and the points +-4.

    The boundary is two arcs of |z| = 2 (over |Re z| <= 1) and four
    segments tangent from +-4, touching the circle at +-1 +- i sqrt(3);
    the segments satisfy |x| + sqrt(3) |y| = 4.
    """
    x, y = abs(rho.real), abs(rho.imag)
    if abs(rho) < 2.0:
        return True
    return x > 1.0 and x + _SQRT3 * y < 4.0


def classical_bounds(rho):
    """Exact geometric predicates of the three classical parabolic bounds."""
    rho = complex(rho)
    return BoundReport(
        shimizu_leutbecher_ok=abs(rho) >= 1.0,
        cjr_interior=min(abs(rho + 2), abs(rho), abs(rho - 2)) > 2.0,
        lu_excluded=in_open_lu_hull(rho),
    )


@dataclass(frozen=True)
class Verdict:
    """Classification of a slice point with a re-verifiable witness."""

    tag: str  # interior-certified | on-ray | cusp-near | exterior-relator |
    #           nondiscrete-evidence | outside-necessary-bound | unknown
    slope: Slope | None = None
    t: float | None = None
    distance: float | None = None
    trace: complex | None = None
    words: tuple | None = None
    jorgensen: float | None = None
    bound: str | None = None

    def witness_dict(self):
        w = {}
        if self.slope is not None:
            w["slope"] = str(self.slope)
        if self.t is not None:
            w["t"] = self.t
        if self.distance is not None:
            w["distance"] = self.distance
        if self.trace is not None:
            w["trace"] = [self.trace.real, self.trace.imag]
        if self.words is not None:
            w["words"] = list(self.words)
        if self.jorgensen is not None:
            w["jorgensen"] = self.jorgensen
        if self.bound is not None:
            w["bound"] = self.bound
        return w

    def to_json_dict(self, rho, orders):
        return {
            "rho": [rho.real, rho.imag],
            "orders": orders.json_pair(),
            "verdict": self.tag,
            "witness": self.witness_dict(),
        }


def _syllable_matrices(orders, rho, depth):
    """Powers g^e for every syllable exponent reachable within ``depth`` steps."""
    X, Y = generator_pair(rho, orders)
    table = {}
    for gen, m in (("X", X), ("Y", Y)):
        order = orders.a if gen == "X" else orders.b
        top = depth if order == math.inf else int(order) - 1
        acc = m
        for e in range(1, top + 1):
            table[(gen, e)] = acc
            acc = acc @ m
        inv = m.inverse()
        acc = inv
        for e in range(1, top + 1):
            table[(gen, -e)] = acc
            acc = acc @ inv
    return table


def _word_matrix_from_syllables(word, table):
    out = None
    for gen, e in word.syllables:
        m = table[(gen, e)]
        out = m if out is None else out @ m
    return out


def _jorgensen_scan(rho, orders, word_depth, fp_tol=1e-6):
    """First word pair with Jorgensen value < 1 and disjoint fixed-point sets."""
    words = list(enumerate_reduced(orders, word_depth))
    if not words:
        return None
    table = _syllable_matrices(orders, rho, word_depth)
    mats = [_word_matrix_from_syllables(w, table) for w in words]
    n = len(words)
    U = np.empty((n, 2, 2), dtype=complex)
    for i, m in enumerate(mats):
        U[i, 0, 0], U[i, 0, 1], U[i, 1, 0], U[i, 1, 1] = m.a, m.b, m.c, m.d
    Uinv = np.empty_like(U)
    Uinv[:, 0, 0] = U[:, 1, 1]
    Uinv[:, 0, 1] = -U[:, 0, 1]
    Uinv[:, 1, 0] = -U[:, 1, 0]
    Uinv[:, 1, 1] = U[:, 0, 0]
    tr2gap = np.abs((U[:, 0, 0] + U[:, 1, 1]) ** 2 - 4.0)
    UV = np.einsum("iab,jbc->ijac", U, U)
    T = np.einsum("ijab,ibc->ijac", UV, Uinv)
    C = np.einsum("ijab,jbc->ijac", T, Uinv)
    commgap = np.abs(C[:, :, 0, 0] + C[:, :, 1, 1] - 2.0)
    value = np.minimum(tr2gap[:, None], tr2gap[None, :]) + commgap
    ii, jj = np.triu_indices(n, k=1)
    hits = value[ii, jj] < 1.0
    for i, j in zip(ii[hits], jj[hits]):
        mu, mv = mats[i], mats[j]
        if mu.is_identity() or mv.is_identity():
            continue
        fu = fixed_points(mu)
        fv = fixed_points(mv)
        if any(chordal_distance(zu, zv) <= fp_tol for zu in fu for zv in fv):
            continue  # possibly elementary: shared fixed point
        return Verdict(tag="nondiscrete-evidence",
                       words=(str(words[i]), str(words[j])),
                       jorgensen=float(value[i, j]))
    return None


def _extended_ray_match(rho, s, orders, t_real, match_tol=1e-6):
    """Does rho sit on the slope-s extended ray at trace t_real in (-2, 2)?"""
    ray = cached_ray(s, orders)
    z = _continue_segment(s, orders, ray.cusp, -2.0, float(t_real))
    if z is None:
        return False
    return abs(z - rho) <= match_tol or abs(z.conjugate() - rho) <= match_tol


def classify_point(pt, max_denominator=20, word_depth=4, tol=1e-9):
    """Priority-ordered verdict for a slice point.

    1. outside the Shimizu-Leutbecher bound (parabolic orders only);
    2. interior certificate / on-ray via the ray-neighbourhood theorem,
       slopes searched in Stern-Brocot order;
    3. near a computed cusp;
    4. relator evidence: slope word with |trace| = 2, or real trace in
       (-2, 2) verified to sit on an extended ray;
    5. Jorgensen evidence from short word pairs (non-elementary pairs only);
    6. unknown (budgets exhausted).
    """
    if max_denominator < 1 or word_depth < 1:
        raise ValidationError("budgets must be >= 1")
    rho = complex(pt.rho)
    orders = pt.orders
    if orders.parabolic and abs(rho) < 1.0:
        return Verdict(tag="outside-necessary-bound", bound="shimizu-leutbecher")

    slopes = list(stern_brocot(max_denominator))
    traces = {}
    for s in slopes:
        t, _ = farey_trace(s, orders, rho)
        traces[s] = t
        if t.real <= -2.0 and (t.imag != 0.0 or t.real < -2.0):
            ok, _why = neighborhood_check(rho, s, orders)
            if ok:
                if abs(t.imag) <= tol * (1.0 + abs(t)):
                    return Verdict(tag="on-ray", slope=s, t=t.real)
                return Verdict(tag="interior-certified", slope=s)

    for s in slopes:
        try:
            c = cusp_point(s, orders).rho
        except RileySliceError:
            continue
        d = min(abs(rho - c), abs(rho - c.conjugate()))
        if d <= tol:
            return Verdict(tag="cusp-near", slope=s, distance=d)

    for s in slopes:
        t = traces[s]
        if abs(abs(t) - 2.0) <= tol:
            return Verdict(tag="exterior-relator", slope=s, trace=t)
        if abs(t.imag) <= tol * (1.0 + abs(t)) and -2.0 < t.real < 2.0:
            if _extended_ray_match(rho, s, orders, t.real):
                return Verdict(tag="exterior-relator", slope=s, trace=t)

    verdict = _jorgensen_scan(rho, orders, word_depth)
    if verdict is not None:
        return verdict
    return Verdict(tag="unknown")


# ---------------------------------------------------------------------------
# cusp clouds

def _cusp_task(args):
    p, q, a, b = args
    orders = ConeOrders(a, b)
    s = Slope(p, q)
    try:
        cp = cusp_point(s, orders)
        return (p, q, cp.rho, cp.residual, None)
    except RileySliceError as exc:
        return (p, q, None, None, f"{type(exc).__name__}: {exc}")


def _mirror_candidates(c, orders):
    """Branch points to emit for one canonical cusp, in deterministic order."""
    cands = [("canonical", c)]
    if abs(c.imag) > 1e-12:
        cands.append(("conjugate", c.conjugate()))
    if orders.a == orders.b:
        negs = [("negated-conjugate", -c.conjugate())]
        if abs(c.imag) > 1e-12:
            negs.append(("negated", -c))
        cands.extend(negs)
    return cands


def cusp_cloud(max_q, orders=PARABOLIC_ORDERS, workers=1, failures=None):
    """Cusp points for every slope with q <= max_q, plus mirror images.

    Conjugate images are always cusps (the trace polynomials have real
    coefficients); negated images are only meaningful for a = b and are
    re-verified against the trace residual before being emitted, since the
    finite-order slices turn out not to be negation-symmetric slope by
    slope.  Output order is deterministic: by slope, then branch; global
    duplicates (endpoint cusps shared between mirror slopes) are dropped.
    Per-slope failures are appended to ``failures`` when given, else logged.
    """
    slopes = farey_sequence(max_q)
    tasks = [(s.p, s.q, orders.a, orders.b) for s in slopes]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_cusp_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        raw = [_cusp_task(t) for t in tasks]

    out = []
    seen = []
    for (p, q, rho, residual, err) in raw:
        s = Slope(p, q)
        if err is not None:
            if failures is not None:
                failures.append((s, err))
            log.warning("cusp %s failed: %s", s, err)
            continue
        for branch, cand in _mirror_candidates(rho, orders):
            if branch.startswith("negated"):
                v, _ = farey_trace(s, orders, cand)
                res = abs(v + 2.0)
                if res > 1e-8:
                    continue  # not a cusp of this slice
            else:
                res = residual
            if any(abs(cand - w) <= 1e-10 for w in seen):
                continue
            seen.append(cand)
            out.append(CuspPoint(slope=s, orders=orders, rho=cand, residual=res))
    return out


# ---------------------------------------------------------------------------
# rendering

_COLOR_BG = (0, 0, 0)
_COLOR_CRUDE = (200, 60, 60)     # |rho| = 1 and |rho| = 4 circles
_COLOR_CJR = (70, 100, 220)      # three radius-2 circles
_COLOR_LU = (70, 180, 90)        # Lyndon-Ullman hull boundary
_COLOR_RAY = (130, 130, 130)
_COLOR_CUSP = (255, 255, 255)
_COLOR_INTERVAL = (230, 190, 60)


def _draw_lu_hull(raster):
    for sign in (1.0, -1.0):
        # tangent segments +-4 -> (+-1, +-sqrt3)
        raster.draw_segment(complex(4, 0), complex(1, sign * _SQRT3), _COLOR_LU)
        raster.draw_segment(complex(-4, 0), complex(-1, sign * _SQRT3), _COLOR_LU)
    # arcs of |z| = 2 over |Re| <= 1
    for k in range(0, 721):
        ang = math.pi / 3 + (math.pi / 3) * k / 720
        raster.mark(2 * cmath.exp(1j * ang), _COLOR_LU)
        raster.mark(2 * cmath.exp(-1j * ang), _COLOR_LU)


def render_slice(orders, max_q, viewport, size, workers=1):
    """Raster portrait of a slice: bound curves, pleating rays, cusp cloud.

    Rays are drawn for denominators up to min(max_q, 12); cusps for all
    q <= max_q; the classical bound curves only exist for the parabolic
    slice.  max_q = 0 draws bounds alone.  The degenerate (2,2) slice
    renders as an interval with a warning.
    """
    width, height = size
    raster = Raster(width, height, viewport)

    if orders.degenerate:
        raster.warn("degenerate (2,2) slice: the discreteness locus is an interval")
        try:
            c0 = cusp_point(Slope(0, 1), orders).rho
            c1 = cusp_point(Slope(1, 1), orders).rho
            raster.draw_segment(c0, c1, _COLOR_INTERVAL)
            raster.mark(c0, _COLOR_CUSP, radius=1)
            raster.mark(c1, _COLOR_CUSP, radius=1)
        except RileySliceError as exc:
            raster.warn(f"endpoint cusps failed: {exc}")
        return raster

    if orders.parabolic:
        raster.draw_circle(0j, 1.0, _COLOR_CRUDE)
        raster.draw_circle(0j, 4.0, _COLOR_CRUDE)
        for center in (-2.0, 0.0, 2.0):
            raster.draw_circle(complex(center, 0), 2.0, _COLOR_CJR)
        _draw_lu_hull(raster)

    if max_q >= 1:
        for s in farey_sequence(min(max_q, 12)):
            try:
                ray = cached_ray(s, orders)
            except RileySliceError as exc:
                raster.warn(f"ray {s} failed: {exc}")
                log.warning("ray %s failed: %s", s, exc)
                continue
            pts = [z for (_t, z) in ray.samples]
            raster.draw_polyline(pts, _COLOR_RAY)
            raster.draw_polyline([z.conjugate() for z in pts], _COLOR_RAY)

        failures = []
        for cp in cusp_cloud(max_q, orders, workers=workers, failures=failures):
            raster.mark(cp.rho, _COLOR_CUSP, radius=1)
        for s, err in failures:
            raster.warn(f"cusp {s} failed: {err}")
    return raster
