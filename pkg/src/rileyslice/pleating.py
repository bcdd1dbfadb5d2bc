"""Rational pleating rays: continuation, cusp points, ray neighbourhoods.

A slope-p/q ray is the branch of p_{p/q}^{-1}((-oo, -2]) that enters the
closed upper half-plane; its endpoint at trace -2 is a cusp group on the
slice boundary.  Rays are traced by predictor-corrector continuation in the
trace plane.  Far from the origin the branch is pinned by the asymptotics
p(rho) ~ L rho^q, so the tracer seeds itself at a trace value deep enough
that the leading term dominates (|rho| beyond the Fujiwara root bound) and
walks back to the requested window; at moderate |t| the branches of
small-numerator slopes crowd the negative real axis and a seed at t = -100
routinely lands on the wrong branch.

Membership in the open neighbourhood p^{-1}(H), H = {x + iy : x <= -2,
y != 0}, is certified by lifting a path in the trace plane back to the
traced ray: drop from p(rho) to the real axis (capped at -2 - delta), then
run along the axis to the ray's start, Newton-correcting the lift at every
substep.  The lift is conservative: any failure reports "not certified".
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass

from .errors import ContinuationError, SeedFailureError, BranchTrackingError, ValidationError
from .farey import Slope
from .moebius import PARABOLIC_ORDERS, ConeOrders
from .traces import farey_polynomial_direct, farey_trace

__all__ = [
    "CuspPoint",
    "ExtendedRayPoint",
    "RayTrace",
    "cached_ray",
    "cusp_point",
    "elliptic_ray_points",
    "in_neighborhood",
    "neighborhood_check",
    "ray_seed",
    "trace_ray",
]

_LIFT_DELTA = 1e-3
_LIFT_SUBSTEPS = 64
_LIFT_MATCH_TOL = 1e-6
_DEFAULT_T_START = -100.0
_DEFAULT_SAMPLES = 33


@dataclass(frozen=True)
class RayTrace:
    """Samples (t, rho) along a pleating ray, t increasing to -2."""

    slope: Slope
    orders: ConeOrders
    samples: tuple  # of (t, rho)
    cusp: complex

    def start(self):
        return self.samples[0]

    def csv_rows(self):
        yield "slope,t,re,im"
        for t, z in self.samples:
            yield f"{self.slope},{t!r},{z.real!r},{z.imag!r}"


@dataclass(frozen=True)
class CuspPoint:
    """Boundary point where the slope's Farey word becomes parabolic."""

    slope: Slope
    orders: ConeOrders
    rho: complex
    residual: float

    @staticmethod
    def csv_header():
        return "p,q,re,im,residual"

    def csv_row(self):
        return (f"{self.slope.p},{self.slope.q},"
                f"{self.rho.real!r},{self.rho.imag!r},{self.residual!r}")


@dataclass(frozen=True)
class ExtendedRayPoint:
    """Point past the cusp where the Farey word is elliptic of order n."""

    n: int
    trace_target: float
    rho: complex | None
    error: str | None = None


def _newton(s, orders, z, t, tol_rel=1e-12, iters=60):
    """Newton for p(z) = t with the stable product evaluator; None on failure."""
    for _ in range(iters):
        v, dv = farey_trace(s, orders, z)
        v -= t
        if abs(v) <= tol_rel * (1.0 + abs(t)):
            return z
        if dv == 0:
            return None
        z = z - v / dv
    v, _ = farey_trace(s, orders, z)
    if abs(v - t) <= 1e-9 * (1.0 + abs(t)):
        return z
    return None


def _continue_segment(s, orders, z, t_from, t_to, max_halvings=20):
    """Track the branch p(rho(t)) = t along the straight segment t_from -> t_to.

    Tangent predictor, Newton corrector, step halving with regrowth.  A
    corrector result far from its prediction means a branch jump, and is
    rejected like a divergence.  Returns None when the step underflows.
    """
    span = t_to - t_from
    if span == 0:
        return z
    sigma = 0.0  # progress along the segment in [0, 1]
    dsig = 1.0
    halvings = 0
    while sigma < 1.0:
        step = min(dsig, 1.0 - sigma)
        t_next = t_from + (sigma + step) * span
        _, dv = farey_trace(s, orders, z)
        pred = z + (step * span / dv if dv != 0 else 0.0)
        zn = _newton(s, orders, pred, t_next)
        if zn is not None:
            drift = abs(zn - pred)
            move = abs(pred - z)
            if drift > 4.0 * move + 1e-7 * (1.0 + abs(zn)):
                zn = None  # corrector left the predicted branch
        if zn is None:
            dsig /= 2.0
            halvings += 1
            if halvings > max_halvings or dsig * abs(span) < 1e-12:
                return None
            continue
        z = zn
        sigma += step
        if dsig < 1.0:
            dsig = min(1.0, dsig * 1.9)
    return z


def _poly_meta(s, orders):
    P = farey_polynomial_direct(s, orders)
    c = [complex(x) for x in P.coefficients]
    lead = c[-1]
    n = len(c) - 1
    fuji = 2.0 * max((abs(c[k]) / abs(lead)) ** (1.0 / (n - k))
                     for k in range(n) if c[k] != 0)
    return lead, fuji


def _asymptotic_angle(s, lead):
    """Asymptotic ray direction nearest the heuristic angle pi (1 - p/q)."""
    base = math.pi * (1.0 - s.p / s.q)
    arg_lead = cmath.phase(lead)
    best = min(range(-1, s.q + 1),
               key=lambda k: abs((math.pi - arg_lead + 2 * math.pi * k) / s.q - base))
    return (math.pi - arg_lead + 2 * math.pi * best) / s.q


def ray_seed(s, orders=PARABOLIC_ORDERS, t0=_DEFAULT_T_START):
    """A point of the canonical branch with p(rho) = t0, t0 <= -10.

    Newton from the asymptotic guess |t0|^{1/q} exp(i pi (1 - p/q)), retried
    over widening angle perturbations; the result is then cross-checked
    against the deep-seeded branch walk so crowded branches near the
    negative real axis cannot silently swap rays.
    """
    if t0 > -10:
        raise ValidationError("seed trace must satisfy t0 <= -10")
    _check_ray_slope(s)
    z = _branch_point(s, orders, float(t0))
    if z is None:
        raise SeedFailureError(f"no convergent seed for {s} at t0={t0}")
    return z


def _check_ray_slope(s):
    if s.is_apex:
        raise ValidationError("the apex has no pleating ray")


def _branch_point(s, orders, t0):
    """Deep-asymptotic walk to the canonical-branch point with p = t0."""
    lead, fuji = _poly_meta(s, orders)
    radius = max(2.0, 1.3 * fuji)
    t_deep = -max(abs(t0), min(radius ** s.q, 1e250))
    ang = _asymptotic_angle(s, lead)
    guess = abs(t_deep) ** (1.0 / s.q) * cmath.exp(1j * ang)
    z = _newton(s, orders, guess, t_deep)
    pert = 1
    while z is None and pert <= 32:
        delta = ((-1) ** pert) * ((pert + 1) // 2) * (math.pi / (8 * s.q))
        z = _newton(s, orders,
                    abs(t_deep) ** (1.0 / s.q) * cmath.exp(1j * (ang + delta)), t_deep)
        pert += 1
    if z is None:
        return None
    if t_deep < t0:
        # geometric walk of the trace magnitude back to t0
        steps = max(2, int(math.ceil(1.4 * math.log(t_deep / t0))) + 1)
        t_cur = t_deep
        for k in range(1, steps + 1):
            lg = math.log(-t_deep) + (math.log(-t0) - math.log(-t_deep)) * k / steps
            t_next = -math.exp(lg)
            z = _continue_segment(s, orders, z, t_cur, t_next, max_halvings=26)
            if z is None:
                return None
            t_cur = t_next
    return z


def trace_ray(s, orders=PARABOLIC_ORDERS, t_start=_DEFAULT_T_START,
              n_samples=_DEFAULT_SAMPLES):
    """Path-lift [t_start, -2] through the Farey polynomial of slope s.

    Returns a RayTrace whose samples are the n_samples trace values spaced
    linearly from t_start to -2, each satisfying |p(rho) - t| <= 1e-9 (1+|t|),
    ending at the cusp.
    """
    if t_start > -10:
        raise ValidationError("t_start must satisfy t_start <= -10")
    if n_samples < 2:
        raise ValidationError("need n_samples >= 2")
    _check_ray_slope(s)
    z = _branch_point(s, orders, float(t_start))
    if z is None:
        raise SeedFailureError(f"no convergent seed for {s} at t_start={t_start}")
    ts = [t_start + (-2.0 - t_start) * k / (n_samples - 1) for k in range(n_samples)]
    samples = [(ts[0], z)]
    for t_next in ts[1:]:
        zn = _continue_segment(s, orders, z, samples[-1][0], t_next)
        if zn is None:
            raise BranchTrackingError(
                f"branch tracking failed for {s} near t={t_next:g}",
                last_t=samples[-1][0], last_rho=samples[-1][1])
        z = zn
        samples.append((t_next, z))
    cusp = _newton(s, orders, z, -2.0, tol_rel=1e-13) or z
    samples[-1] = (-2.0, cusp)
    return RayTrace(slope=s, orders=orders, samples=tuple(samples), cusp=cusp)


_ray_cache = {}
_ray_lock = threading.Lock()


def cached_ray(s, orders=PARABOLIC_ORDERS, t_start=_DEFAULT_T_START,
               n_samples=_DEFAULT_SAMPLES):
    """Memoised trace_ray; population is single-writer-per-key."""
    key = (s, orders, t_start, n_samples)
    ray = _ray_cache.get(key)
    if ray is None:
        ray = trace_ray(s, orders, t_start, n_samples)
        with _ray_lock:
            _ray_cache.setdefault(key, ray)
            ray = _ray_cache[key]
    return ray


def cusp_point(s, orders=PARABOLIC_ORDERS):
    """Endpoint of the slope-s pleating ray, canonical branch Im >= 0."""
    ray = cached_ray(s, orders)
    rho = ray.cusp
    if rho.imag < 0:
        rho = rho.conjugate()  # coefficients are real: stays a root
    v, _ = farey_trace(s, orders, rho)
    return CuspPoint(slope=s, orders=orders, rho=rho, residual=abs(v + 2.0))


def _ray_point_at(ray, t_target):
    """Point of a traced ray at trace value t_target (Newton from nearest sample)."""
    s, orders = ray.slope, ray.orders
    t_near, z_near = min(ray.samples, key=lambda tz: abs(tz[0] - t_target))
    z = _continue_segment(s, orders, z_near, t_near, t_target, max_halvings=12)
    return z


def neighborhood_check(rho, s, orders=PARABOLIC_ORDERS):
    """(certified, diagnostic) for membership in the slope-s ray neighbourhood.

    Certification requires p(rho) in H u (-oo, -2) *and* a successful lift
    of rho back to the traced ray of slope s (or its conjugate mirror when
    Im rho < 0): drop the trace to the real axis (capped at -2 - delta) in
    64 Newton-corrected substeps; by uniqueness of continuation the lift
    coincides with the ray from there on, so it suffices to match the ray's
    own point at the landing trace.  Lift failures never certify.
    """
    rho = complex(rho)
    t, _ = farey_trace(s, orders, rho)
    in_h = t.real <= -2.0 and (t.imag != 0.0 or t.real < -2.0)
    if not in_h:
        return False, "trace-outside-H"
    ray = cached_ray(s, orders)
    mirror = rho.imag < 0
    t_land = complex(min(t.real, -2.0 - _LIFT_DELTA), 0.0)
    z = rho
    span = t_land - t
    if span != 0:
        for k in range(1, _LIFT_SUBSTEPS + 1):
            z = _continue_segment(s, orders, z, t + span * ((k - 1) / _LIFT_SUBSTEPS),
                                  t + span * (k / _LIFT_SUBSTEPS), max_halvings=8)
            if z is None:
                return False, "lift-failed"
    anchor = _ray_point_at(ray, t_land.real)
    if anchor is None:
        return False, "lift-failed"
    if mirror:
        anchor = anchor.conjugate()
    if abs(z - anchor) <= _LIFT_MATCH_TOL:
        return True, "on-ray" if t.imag == 0.0 else "in-H"
    return False, "lift-landed-off-ray"


def in_neighborhood(rho, s, orders=PARABOLIC_ORDERS):
    """True iff rho is certified inside the slope-s ray neighbourhood."""
    ok, _ = neighborhood_check(rho, s, orders)
    return ok


def elliptic_ray_points(s, orders=PARABOLIC_ORDERS, n_values=()):
    """Extended-ray points where the slope word is elliptic of order n.

    The trace target for order n is -2 cos(pi/n), recovering the cusp as
    n -> oo.  Continuation past a critical point records per-n errors
    rather than raising.
    """
    ns = sorted({int(n) for n in n_values}, reverse=True)
    if any(n < 2 for n in ns):
        raise ValidationError("elliptic orders must be >= 2")
    results = []
    ray = cached_ray(s, orders)
    z = ray.cusp
    t_cur = -2.0
    failed = None
    for n in ns:  # targets ascend from -2 toward 0
        target = -2.0 * math.cos(math.pi / n)
        if failed is None:
            zn = _continue_segment(s, orders, z, t_cur, target)
            if zn is None:
                failed = f"continuation failed between t={t_cur:g} and t={target:g}"
            else:
                z, t_cur = zn, target
        if failed is not None:
            results.append(ExtendedRayPoint(n=n, trace_target=target, rho=None,
                                            error=failed))
        else:
            rho = z.conjugate() if z.imag < 0 else z
            results.append(ExtendedRayPoint(n=n, trace_target=target, rho=rho))
    results.sort(key=lambda e: e.n)
    return results
