import math

import numpy as np
import pytest

from rileyslice import (ConeOrders, GroupWord, PARABOLIC_ORDERS, Viewport,
                        chordal_distance, enumerate_reduced, generator_pair,
                        limit_set, rasterize)


def words(orders, depth):
    return list(enumerate_reduced(orders, depth))


def test_enumerate_depth1_parabolic():
    got = {str(w) for w in words(PARABOLIC_ORDERS, 1)}
    assert got == {"X", "X^-1", "Y", "Y^-1"}


def test_enumerate_depth2_count():
    ws = words(PARABOLIC_ORDERS, 2)
    assert len(ws) == 16  # 4 + 4*3
    assert len(set(ws)) == 16
    assert GroupWord((("X", 2),)) in ws  # merged syllable
    assert GroupWord((("X", 1), ("Y", -1))) in ws


def test_enumerate_finite_orders():
    got = {str(w) for w in words(ConeOrders(2, 3), 1)}
    assert got == {"X", "Y", "Y^2"}


def test_enumerate_syllable_invariants():
    for w in words(ConeOrders(3, 4), 3):
        gens = [g for g, _ in w.syllables]
        assert all(a != b for a, b in zip(gens, gens[1:]))  # alternation
        for g, e in w.syllables:
            order = 3 if g == "X" else 4
            assert 1 <= e <= order - 1


def test_enumerate_infinite_syllables_grow():
    ws = words(PARABOLIC_ORDERS, 3)
    assert GroupWord((("X", 3),)) in ws
    assert GroupWord((("X", -2), ("Y", 1))) in ws
    # no cancelling neighbours ever
    for w in ws:
        for (g1, e1), (g2, e2) in zip(w.syllables, w.syllables[1:]):
            assert g1 != g2 and e1 != 0 and e2 != 0


def test_limit_set_depth0_seeds_only():
    cloud = limit_set(5.0, PARABOLIC_ORDERS, depth=0, epsilon=1e-3)
    # seeds: fix(Y) = 0 and the finite fixed points of XY (fix(X) = inf dropped)
    assert len(cloud.points) == 2
    assert any(abs(z) < 1e-12 for z in cloud.points)


def test_limit_set_fuchsian_realness():
    cloud = limit_set(5.0, PARABOLIC_ORDERS, depth=10, epsilon=1e-3)
    assert len(cloud.points) > 1000
    assert max(abs(z.imag) for z in cloud.points) <= 1e-6


def test_limit_set_cap_truncates():
    cloud = limit_set(5.0, PARABOLIC_ORDERS, depth=10, epsilon=1e-3, cap=100)
    assert cloud.truncated and len(cloud.points) == 100


def test_limit_set_group_invariance():
    # applying X to the cloud lands within 2 eps of the cloud for >= 99% of points
    eps = 2e-3
    cloud = limit_set(3 + 2j, PARABOLIC_ORDERS, depth=9, epsilon=eps)
    X, _ = generator_pair(3 + 2j)
    pts = np.array(cloud.points, dtype=complex)
    moved = (X.a * pts + X.b) / (X.c * pts + X.d)
    # chordal nearest-neighbour distances via a coarse grid bucket index
    ok = 0
    cells = {}
    scale = 2 * eps
    for z in pts:
        cells.setdefault((round(z.real / scale), round(z.imag / scale)), []).append(z)
    for w in moved:
        key = (round(w.real / scale), round(w.imag / scale))
        best = math.inf
        for dk in range(-1, 2):
            for dl in range(-1, 2):
                for z in cells.get((key[0] + dk, key[1] + dl), ()):
                    best = min(best, chordal_distance(w, z))
        if best < 2 * eps:
            ok += 1
    assert ok >= 0.99 * len(moved)


def test_limit_set_conjugation_invariance():
    eps = 2e-3
    a = limit_set(3 + 2j, PARABOLIC_ORDERS, depth=8, epsilon=eps)
    b = limit_set(3 - 2j, PARABOLIC_ORDERS, depth=8, epsilon=eps)
    pa = np.array(a.points, dtype=complex)
    pb = np.conj(np.array(b.points, dtype=complex))
    # Hausdorff distance below 2 eps, via subsampling both directions
    for src, dst in ((pa, pb), (pb, pa)):
        sample = src[:: max(1, len(src) // 400)]
        d = np.abs(sample[:, None] - dst[None, :]).min(axis=1)
        # upper bound on the chordal distance (drops the second norm factor)
        chord = 2 * d / (1 + np.abs(sample) ** 2) ** 0.5
        assert chord.max() < 2 * eps


def test_rasterize_single_point():
    cloud = limit_set(5.0, PARABOLIC_ORDERS, depth=0, epsilon=1e-3)
    viewport = Viewport(-1, 1, -1, 1)

    class _Tiny:
        points = (0j,)

    r = rasterize(_Tiny, viewport, (8, 8))
    lit = np.argwhere((r.pixels != 0).any(axis=2))
    assert lit.tolist() == [[4, 4]]  # row h/2, col w/2


def test_rasterize_empty():
    class _Empty:
        points = ()

    r = rasterize(_Empty, Viewport(-1, 1, -1, 1), (8, 8))
    assert not r.pixels.any()


def test_rasterize_fuchsian_band():
    cloud = limit_set(5.0, PARABOLIC_ORDERS, depth=10, epsilon=1e-3)
    r = rasterize(cloud, Viewport(-3, 3, -3, 3), (64, 64))
    rows = np.argwhere((r.pixels != 0).any(axis=2))[:, 0]
    mid = 32
    assert rows.min() >= mid - 1 and rows.max() <= mid + 1
