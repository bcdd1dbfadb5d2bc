"""Limit-set point clouds by pruned depth-first enumeration of Z_a * Z_b.

Reduced words alternate syllables in the two generators.  A finite-order
generator contributes whole syllables g^e, 1 <= e < order, per step; an
infinite-order generator is walked letter by letter with exponents +-1 (no
immediate cancellation), so its syllables grow along a branch.

Seeds are the generator fixed points, padded with fixed points of XY (also
limit points) so a reference triple always exists; every visited word
pushes the seeds onto the cloud.  Descent stops once the image of the
reference triple has planar (Euclidean) diameter below epsilon, with any
image at infinity counting as infinitely wide; parabolic runs therefore
shrink slowly and dominate the deep tree, which is what makes the clouds
dense enough to draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RileySliceError, ValidationError
from .moebius import (INF, PARABOLIC_ORDERS, ConeOrders, chordal_distance,
                      fixed_points, generator_pair)
from .raster import Raster

__all__ = ["GroupWord", "LimitSetCloud", "enumerate_reduced", "limit_set", "rasterize"]

DEFAULT_EPSILON = 1e-3
DEFAULT_DEPTH_CAP = 40
DEFAULT_POINT_CAP = 5_000_000


@dataclass(frozen=True)
class GroupWord:
    """Reduced word in Z_a * Z_b: alternating syllables (generator, exponent)."""

    syllables: tuple  # of ('X'|'Y', nonzero int)

    def __str__(self):
        if not self.syllables:
            return "<empty>"
        out = []
        for g, e in self.syllables:
            out.append(g if e == 1 else f"{g}^{e}")
        return " ".join(out)

    def syllable_length(self):
        return len(self.syllables)


def _order_of(orders, gen):
    return orders.a if gen == "X" else orders.b


def _steps_from(orders, last_gen, last_sign):
    """Child steps in fixed order: X before Y, exponents ascending.

    A step is (gen, exp, merges_into_previous_syllable).
    """
    out = []
    for gen in ("X", "Y"):
        order = _order_of(orders, gen)
        if order == math.inf:
            if gen == last_gen:
                # extend the current syllable; sign flips would cancel
                out.append((gen, last_sign, True))
            else:
                out.append((gen, 1, False))
                out.append((gen, -1, False))
        else:
            if gen == last_gen:
                continue  # adjacent syllables must alternate generators
            for e in range(1, int(order)):
                out.append((gen, e, False))
    return out


def enumerate_reduced(orders=PARABOLIC_ORDERS, depth=1):
    """Every reduced word reachable in <= depth steps, depth-first, once each.

    For infinite-order generators a step appends one letter (+-1); for
    finite orders a step appends a whole syllable with exponent in
    [1, order).  Depth 0 yields nothing.
    """
    if depth < 0:
        raise ValidationError("depth must be >= 0")

    def descend(syllables, last_gen, last_sign, remaining):
        if remaining == 0:
            return
        for gen, e, merge in _steps_from(orders, last_gen, last_sign):
            if merge:
                new_syll = syllables[:-1] + ((gen, syllables[-1][1] + e),)
            else:
                new_syll = syllables + ((gen, e),)
            word = GroupWord(new_syll)
            yield word
            yield from descend(new_syll, gen, e if e in (1, -1) else 0, remaining - 1)

    yield from descend((), None, 0, depth)


@dataclass(frozen=True)
class LimitSetCloud:
    points: tuple  # complex, INF dropped
    rho: complex
    orders: ConeOrders
    depth: int
    epsilon: float
    truncated: bool = False

    def csv_rows(self):
        yield "re,im"
        for z in self.points:
            yield f"{z.real!r},{z.imag!r}"


def _matrix_tuple(m):
    return (m.a, m.b, m.c, m.d)


def _apply(mat, z):
    a, b, c, d = mat
    if z is INF:
        return (a / c) if c != 0 else INF
    den = c * z + d
    if den == 0:
        return INF
    return (a * z + b) / den


def _mul(m1, m2):
    a, b, c, d = m1
    e, f, g, h = m2
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _seed_points(X, Y):
    """Distinct fixed points of X and Y, padded to a triple with fix(XY...)."""
    seeds = []
    for m in (X, Y):
        for z in fixed_points(m):
            if all(chordal_distance(z, w) > 1e-12 for w in seeds):
                seeds.append(z)
    extra = X @ Y
    for _ in range(8):
        if len(seeds) >= 3:
            break
        if not extra.is_identity():
            for z in fixed_points(extra):
                if all(chordal_distance(z, w) > 1e-12 for w in seeds):
                    seeds.append(z)
                    break
        extra = extra @ Y
    if len(seeds) < 3:
        raise RileySliceError("could not build a reference triple (elementary group?)")
    return seeds


def limit_set(rho, orders=PARABOLIC_ORDERS, depth=DEFAULT_DEPTH_CAP,
              epsilon=DEFAULT_EPSILON, cap=DEFAULT_POINT_CAP):
    """Limit-set cloud of the slice group at rho.

    Depth-first over the reduced words, pushing the seed points through
    every word visited; a branch stops descending once the image of the
    reference triple has planar diameter below epsilon (or at the depth
    cap).  Emission is capped at ``cap`` points, setting ``truncated``.
    """
    if depth < 0:
        raise ValidationError("depth must be >= 0")
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    rho = complex(rho)
    X, Y = generator_pair(rho, orders)
    seeds = _seed_points(X, Y)
    points = [z for z in seeds if z is not INF]
    truncated = False

    base = {}
    for gen, mat in (("X", X), ("Y", Y)):
        order = _order_of(orders, gen)
        if order == math.inf:
            base[(gen, 1)] = _matrix_tuple(mat)
            base[(gen, -1)] = _matrix_tuple(mat.inverse())
        else:
            acc = mat
            for e in range(1, int(order)):
                base[(gen, e)] = _matrix_tuple(acc)
                acc = acc @ mat

    # stack of (matrix, last_gen, last_sign, depth); children pushed in
    # reverse so they pop in the fixed enumeration order
    stack = []
    if depth >= 1:
        for gen, e, _ in reversed(_steps_from(orders, None, 0)):
            stack.append((base[(gen, e)], gen, e if e in (1, -1) else 0, 1))
    while stack:
        mat, gen, sign, d = stack.pop()
        imgs = [_apply(mat, z) for z in seeds]
        for z in imgs:
            if z is not INF:
                points.append(z)
        if len(points) >= cap:
            truncated = True
            points = points[:cap]
            break
        tri = imgs[:3]
        if INF in tri:
            diam = math.inf
        else:
            diam = max(abs(tri[0] - tri[1]), abs(tri[0] - tri[2]),
                       abs(tri[1] - tri[2]))
        if diam < epsilon or d >= depth:
            continue
        for g2, e2, merge in reversed(_steps_from(orders, gen, sign)):
            child = _mul(mat, base[(g2, e2)])
            stack.append((child, g2, e2 if e2 in (1, -1) else 0, d + 1))
    return LimitSetCloud(points=tuple(points), rho=rho, orders=orders,
                         depth=depth, epsilon=epsilon, truncated=truncated)


def rasterize(cloud, viewport, size):
    """Hit-count accumulation of a cloud, log-scaled to 8-bit grayscale."""
    w, h = size
    raster = Raster(w, h, viewport)
    if not cloud.points:
        return raster
    xs = np.fromiter((z.real for z in cloud.points), dtype=float,
                     count=len(cloud.points))
    ys = np.fromiter((z.imag for z in cloud.points), dtype=float,
                     count=len(cloud.points))
    v = viewport
    inside = (xs >= v.x0) & (xs <= v.x1) & (ys >= v.y0) & (ys <= v.y1)
    xs, ys = xs[inside], ys[inside]
    if xs.size == 0:
        return raster
    cols = np.minimum(((xs - v.x0) / (v.x1 - v.x0) * w).astype(int), w - 1)
    rows = np.minimum(((v.y1 - ys) / (v.y1 - v.y0) * h).astype(int), h - 1)
    counts = np.zeros((h, w), dtype=np.int64)
    np.add.at(counts, (rows, cols), 1)
    peak = counts.max()
    if peak > 0:
        scaled = (np.log1p(counts) / math.log1p(peak) * 255.0).astype(np.uint8)
        raster.pixels[:, :, 0] = scaled
        raster.pixels[:, :, 1] = scaled
        raster.pixels[:, :, 2] = scaled
    return raster
