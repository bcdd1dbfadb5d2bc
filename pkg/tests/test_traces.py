import cmath
import math
import random

import mpmath as mp
import numpy as np
import pytest

from rileyslice import (ConeOrders, PARABOLIC_ORDERS, Slope, ValidationError,
                        farey_polynomial_direct, farey_polynomial_recursive,
                        farey_trace, farey_word, make_slope, poly_eval,
                        poly_roots, word_matrix)

S = make_slope


def sympy_farey_poly(p, q):
    """Independent symbolic oracle: trace of the word product over Z[rho]."""
    import sympy

    rho = sympy.symbols("rho")
    X = sympy.Matrix([[1, 1], [0, 1]])
    Y = sympy.Matrix([[1, 0], [rho, 1]])
    mats = {("X", 1): X, ("X", -1): X.inv(), ("Y", 1): Y, ("Y", -1): Y.inv()}
    M = sympy.eye(2)
    for letter in farey_word(S(p, q)).letters:
        M = M * mats[letter]
    poly = sympy.Poly(sympy.expand(M.trace()), rho)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def test_direct_against_sympy_oracle():
    for (p, q) in [(0, 1), (1, 1), (1, 2), (1, 3), (2, 3), (2, 5), (3, 5), (3, 7)]:
        assert farey_polynomial_direct(S(p, q)).coefficients == sympy_farey_poly(p, q)


def test_direct_frozen_analytic():
    assert farey_polynomial_direct(S(0, 1)).coefficients == (2, 1)
    assert farey_polynomial_direct(S(1, 1)).coefficients == (2, -1)
    assert farey_polynomial_direct(S(1, 2)).coefficients == (2, 0, 1)


def test_direct_elliptic_constant_term():
    # p_{0/1}^{a,b} = rho + 2 cos(pi/a + pi/b)
    for (a, b) in [(2, 3), (3, 3), (4, 5)]:
        P = farey_polynomial_direct(S(0, 1), ConeOrders(a, b))
        want = 2 * math.cos(math.pi / a + math.pi / b)
        assert abs(complex(P.coefficients[0]) - want) < 1e-12
        assert abs(complex(P.coefficients[1]) - 1) < 1e-12


def test_parabolic_coefficients_are_integers():
    for (p, q) in [(2, 5), (3, 8), (7, 12), (11, 25)]:
        P = farey_polynomial_direct(S(p, q))
        assert all(isinstance(c, int) for c in P.coefficients)


def test_degree_and_leading_magnitude():
    for q in range(1, 26):
        for p in range(q + 1):
            if math.gcd(p, q) != 1:
                continue
            P = farey_polynomial_direct(S(p, q))
            assert P.degree == q
            assert abs(abs(complex(P.coefficients[-1])) - 1) < 1e-9


def test_recursive_matches_direct_small():
    for (p, q) in [(1, 2), (2, 5), (3, 7), (5, 12)]:
        got = farey_polynomial_recursive(S(p, q))
        want = farey_polynomial_direct(S(p, q))
        assert got.coefficients == want.coefficients
    P = farey_polynomial_recursive(S(1, 3), ConeOrders(2, 3))
    Q = farey_polynomial_direct(S(1, 3), ConeOrders(2, 3))
    scale = max(abs(complex(c)) for c in Q.coefficients)
    assert max(abs(complex(a) - complex(b))
               for a, b in zip(P.coefficients, Q.coefficients)) < 1e-9 * scale


def test_word_matrix_traces():
    m = word_matrix([("Y", 1), ("X", 1)], 2.0)
    assert abs(m.trace() - 4) < 1e-12
    m = word_matrix(farey_word(S(1, 2)), 1j)
    assert abs(m.trace() - 1) < 1e-12  # rho^2 + 2 at i
    assert word_matrix([], 1.7).is_identity()


def test_trace_well_definedness():
    # word, inverse and cyclic rotations share traces (scale-aware bound:
    # double precision loses eps * product-of-norms, so keep rho moderate)
    rng = random.Random(17)
    for (p, q) in [(1, 3), (2, 5), (3, 8)]:
        letters = farey_word(S(p, q)).letters
        for _ in range(34):
            rho = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            t = word_matrix(letters, rho).trace()
            inv = tuple((g, -e) for g, e in reversed(letters))
            assert abs(word_matrix(inv, rho).trace() - t) < 1e-9 * (1 + abs(t))
            for k in (1, q, 2 * q - 1):
                rot = letters[k:] + letters[:k]
                assert abs(word_matrix(rot, rho).trace() - t) < 1e-9 * (1 + abs(t))


def test_conjugation_symmetry_of_coefficients():
    # p(conj rho) = conj p(rho): coefficients are real for every order pair
    rng = random.Random(31)
    for orders in (PARABOLIC_ORDERS, ConeOrders(2, 3), ConeOrders(3, 3)):
        for (p, q) in [(1, 2), (2, 5)]:
            for _ in range(10):
                rho = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                v1, _ = farey_trace(S(p, q), orders, rho.conjugate())
                v2, _ = farey_trace(S(p, q), orders, rho)
                assert abs(v1 - v2.conjugate()) < 1e-9


def test_riley_figure8_relator():
    rho8 = (1 - 1j * math.sqrt(3)) / 2
    v, _ = farey_trace(S(3, 5), PARABOLIC_ORDERS, rho8)
    assert abs(abs(v) - 2) < 1e-9


def test_figure8_point_is_identity_double_root():
    # at the figure-8 parameter the slope-3/5 word is a relator: the trace
    # polynomial hits +2 with a double root (word = identity, not merely
    # parabolic)
    rho8 = (1 - 1j * math.sqrt(3)) / 2
    v, dv = farey_trace(S(3, 5), PARABOLIC_ORDERS, rho8)
    assert abs(v - 2) < 1e-9 and abs(dv) < 1e-9
    m = word_matrix(farey_word(S(3, 5)), rho8)
    assert m.is_identity(1e-9)


def test_trefoil_anchor():
    # the braid relation XYX = YXY for the parabolic pair forces rho = -1
    # (solve the matrix equation by hand); the slope-1/3 word must therefore
    # be a relator exactly there, giving an identity double root of p_{1/3}
    v, dv = farey_trace(S(1, 3), PARABOLIC_ORDERS, -1.0)
    assert abs(v - 2) < 1e-12 and abs(dv) < 1e-12
    assert word_matrix(farey_word(S(1, 3)), -1.0).is_identity(1e-12)


def test_farey_trace_matches_poly_eval():
    rng = random.Random(13)
    for (p, q) in [(1, 2), (2, 5), (3, 8)]:
        P = farey_polynomial_direct(S(p, q))
        for _ in range(20):
            rho = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            v, dv = farey_trace(S(p, q), PARABOLIC_ORDERS, rho)
            v2, dv2 = poly_eval(P, rho)
            assert abs(v - v2) < 1e-9 * (1 + abs(v2))
            assert abs(dv - dv2) < 1e-8 * (1 + abs(dv2))


def test_poly_eval_frozen():
    P = farey_polynomial_direct(S(1, 2))  # rho^2 + 2
    v, dv = poly_eval(P, 2j)
    assert abs(v + 2) < 1e-12 and abs(dv - 4j) < 1e-12
    P = farey_polynomial_direct(S(0, 1))  # rho + 2
    v, dv = poly_eval(P, -4)
    assert abs(v + 2) < 1e-12 and abs(dv - 1) < 1e-12
    P = farey_polynomial_direct(S(2, 5))
    v, dv = poly_eval(P, 0)
    assert v == P.coefficients[0] and dv == P.coefficients[1]


def test_poly_roots_frozen():
    P = farey_polynomial_direct(S(1, 2))  # rho^2 + 2 = -2  ->  +-2i
    roots = poly_roots(P, target=-2.0)
    assert sorted(z.imag for z in roots) == pytest.approx([-2.0, 2.0], abs=1e-10)
    assert all(abs(z.real) < 1e-10 for z in roots)
    P = farey_polynomial_direct(S(0, 1))
    assert poly_roots(P, target=-2.0) == pytest.approx([-4.0 + 0j], abs=1e-12)
    P = farey_polynomial_direct(S(1, 1))
    assert poly_roots(P, target=-2.0) == pytest.approx([4.0 + 0j], abs=1e-12)


def test_poly_roots_against_numpy_oracle():
    # companion-matrix eigenvalues are an independent root-finding method
    for (p, q) in [(1, 5), (2, 7), (4, 11), (5, 13)]:
        P = farey_polynomial_direct(S(p, q))
        mine = poly_roots(P, target=-2.0)
        cs = [complex(c) for c in P.coefficients]
        cs[0] += 2.0
        theirs = list(np.roots(cs[::-1]))
        assert len(mine) == q
        for a in mine:  # set match: pair each root with its nearest oracle root
            b = min(theirs, key=lambda z: abs(z - a))
            theirs.remove(b)
            assert abs(a - b) < 1e-6


def test_poly_roots_residuals_exact():
    for (p, q) in [(3, 10), (7, 16)]:
        P = farey_polynomial_direct(S(p, q))
        csum = sum(abs(complex(c)) for c in P.coefficients)
        with mp.workdps(50):
            for z in poly_roots(P, target=-2.0):
                acc = mp.mpc(0)
                for c in reversed(P.coefficients):
                    acc = acc * z + c
                assert abs(complex(acc + 2)) <= 1e-8 * (1 + csum)


def test_json_schema():
    d = farey_polynomial_direct(S(1, 2)).to_json_dict()
    assert d["slope"] == "1/2"
    assert d["orders"] == ["inf", "inf"]
    assert d["coefficients"] == [[2, 0], [0, 0], [1, 0]]


def test_apex_rejected():
    with pytest.raises(ValidationError):
        farey_polynomial_direct(make_slope(1, 0))
