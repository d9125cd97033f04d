"""Cotangent modules, involutive de Rham complexes, sign_fix, and the
HKR comparison for the two monogenic cases."""

from c2algebra.polyring import BaseRing, parse_poly
from c2algebra.tambara import (
    burnside_tambara,
    free_involutive_free,
    free_involutive_trivial,
)
from c2algebra.differentials import (
    InvolutiveCochainComplex,
    NotCohomological,
    NotSmoothPresentation,
    check_hkr,
    cotangent_module,
    de_rham_complex,
    hyperelliptic_presentation,
    inv_cochain_cohomology,
    lsym_weight_piece,
    sign_fix,
)
from c2algebra.mackey import isomorphic, zbar, zbar_c2, is_valid

import pytest


Z = BaseRing("Z")


def test_cotangent_trivial_generator():
    # L(k[x]) = (k[x], k[x]{dx})
    T = free_involutive_trivial(Z, ["x"])
    L = cotangent_module(T)
    assert L.gen_names == ["dx"]
    assert L.is_free()
    # sigma(dx) = dx
    assert L.sigma_on_gens[0] == {"dx": L.algebra.one_poly()}
    for w in range(1, 4):
        piece = L.mackey_piece(w)
        assert is_valid(piece)
        assert isomorphic(piece, zbar()), w


def test_cotangent_free_orbit():
    # L(k[x, x_s]) = (k[x, x_s], k[x, x_s] (x) C2 {dx, dx_s})
    T = free_involutive_free(Z)
    L = cotangent_module(T)
    assert L.gen_names == ["dx", "dx_s"]
    assert L.is_free()
    assert L.sigma_on_gens[0] == {"dx_s": L.algebra.one_poly()}
    assert L.sigma_on_gens[1] == {"dx": L.algebra.one_poly()}
    piece = L.mackey_piece(1)
    assert isomorphic(piece, zbar_c2())


def test_cotangent_needs_cohomological():
    with pytest.raises(NotCohomological):
        cotangent_module(burnside_tambara())


def test_hyperelliptic_cotangent():
    # f(x) = x^3 + 1, say: dw -> -y dy_s - y_s dy - f'(x) dx
    P = hyperelliptic_presentation([1, 0, 0, 1])
    L = cotangent_module(P)
    assert L.gen_names == ["dy", "dy_s", "dx"]
    names = [n for n, _ in L.relation_images]
    assert names == ["dz", "dw"]
    A = L.algebra
    dz = dict(L.relation_images[0][1])
    assert A.equal(dz["dy"], A.one_poly())
    assert A.equal(dz["dy_s"], A.one_poly())
    assert "dx" not in dz
    dw = dict(L.relation_images[1][1])
    # coefficients in A = C[x, y]/(y^2 - f): y_s = -y
    assert A.equal(dw["dy_s"], A.neg(parse_poly(A, "y")))   # -y dy_s
    assert A.equal(dw["dy"], parse_poly(A, "y"))            # -y_s dy = +y dy
    assert A.equal(dw["dx"], A.neg(parse_poly(A, "3x^2")))  # -f'(x) dx


def test_hyperelliptic_reduced_presentation():
    # eliminating dy_s via dz gives the displayed underlying diagram:
    # A{dx, dy} / (2y dy - f'(x) dx)
    P = hyperelliptic_presentation([1, 0, 0, 1])
    L = cotangent_module(P)
    gens, rels = L.reduced_presentation()
    assert gens == ["dy", "dx"]
    assert len(rels) == 1
    _, img = rels[0]
    A = L.algebra
    assert A.equal(img["dy"], parse_poly(A, "2y"))
    assert A.equal(img["dx"], A.neg(parse_poly(A, "3x^2")))


def test_hyperelliptic_other_polynomials():
    from fractions import Fraction
    from c2algebra.polyring import parse_poly
    # f = x^5 + 2x + 3: dw -> -y dy_s - y_s dy - (5x^4 + 2) dx
    P = hyperelliptic_presentation([3, 2, 0, 0, 0, 1])
    L = cotangent_module(P)
    A = L.algebra
    dw = dict(L.relation_images[1][1])
    assert A.equal(dw["dx"], A.neg(parse_poly(A, "5x^4 + 2")))
    gens, rels = L.reduced_presentation()
    assert gens == ["dy", "dx"]
    # rational coefficients: f = x/2
    P2 = hyperelliptic_presentation([0, Fraction(1, 2)])
    L2 = cotangent_module(P2)
    A2 = L2.algebra
    dw2 = dict(L2.relation_images[1][1])
    assert dw2["dx"] == {(0, 0): Fraction(-1, 2)}


def test_hyperelliptic_fixed_level_facts():
    # dx is invariant; y dy is invariant and congruent to f'(x) dx / 2
    P = hyperelliptic_presentation([1, 0, 0, 1])
    L = cotangent_module(P)
    A = L.algebra
    # sigma(dy) = dy_s which reduces to -dy after eliminating dy_s
    assert L.sigma_on_gens[0] == {"dy_s": A.one_poly()}
    assert L.sigma_on_gens[2] == {"dx": A.one_poly()}
    # sigma_quotient(y) = -y, so sigma(y dy) = (-y)(-dy) = y dy
    assert A.equal(P.sigma_quotient(parse_poly(A, "y")), A.neg(parse_poly(A, "y")))


# -- de Rham -------------------------------------------------------------------

def test_de_rham_trivial_generator():
    T = free_involutive_trivial(Z, ["x"])
    M = de_rham_complex(T, 1, max_weight=6)
    M.check()
    # Omega^0 weight w: one monomial; Omega^1 weight w: x^{w-1} dx
    for w in range(0, 5):
        assert M.dim(0, w) == 1
        assert M.dim(1, w) == (1 if w >= 1 else 0)
    # sigma(dx) = -dx at the twisted level (odd degree)
    assert M.sigmas[(1, 1)] == [[-1]]


def test_de_rham_constant():
    T = free_involutive_trivial(Z, [])
    M = de_rham_complex(T, 3, max_weight=2)
    for i in range(1, 4):
        for w in range(0, 3):
            assert M.dim(i, w) == 0


def test_de_rham_underlying_is_classical():
    # Leibniz rule d(x^w) = w x^{w-1} dx, degreewise
    T = free_involutive_trivial(Z, ["x"])
    M = de_rham_complex(T, 1, max_weight=6)
    for w in range(1, 6):
        assert M.diffs[(0, w)] == [[w]]
    # two variables: matches the classical de Rham complex of k[x, x_s]
    F = free_involutive_free(Z)
    N = de_rham_complex(F, 2, max_weight=4)
    N.check()
    # d on weight 1: dx, dx_s both hit with coefficient 1
    assert N.dim(0, 1) == 2 and N.dim(1, 1) == 2
    assert sorted(sum(row) for row in N.diffs[(0, 1)]) == [1, 1]


def test_sign_fix_involution_of_conventions():
    T = free_involutive_trivial(Z, ["x"])
    M = de_rham_complex(T, 1, max_weight=4)
    F = sign_fix(M)
    F.check()
    FF = sign_fix(F)
    assert FF.sigmas == M.sigmas
    # after the fix sigma(dx) = +dx and d sigma = sigma d
    assert F.sigmas[(1, 1)] == [[1]]


def test_sign_fix_flips_only_odd_degrees():
    F = free_involutive_free(Z)
    M = de_rham_complex(F, 2, max_weight=3)
    G = sign_fix(M)
    for (n, w), s in M.sigmas.items():
        if n % 2:
            assert G.sigmas[(n, w)] == [[-x for x in row] for row in s]
        else:
            assert G.sigmas[(n, w)] == s


def test_sign_fix_equivariance_through_degree_8():
    # d sigma = sigma d on every monomial block up to weight 8 (check() on
    # the sign-fixed complex asserts the identity matrixwise per block)
    for T in (free_involutive_trivial(Z, ["x"]), free_involutive_free(Z)):
        M = de_rham_complex(T, 2, max_weight=8)
        sign_fix(M).check()


def test_inv_cochain_cohomology_poincare():
    # de Rham of Q[x]: H^0 = Q, H^1 = 0 (per weight: only weight 0 survives)
    T = free_involutive_trivial(BaseRing("Q"), ["x"])
    M = de_rham_complex(T, 1, max_weight=5)
    H0, _ = inv_cochain_cohomology(M, 0, w=0)
    assert H0.invariant_factors() == (0,)
    for w in range(1, 5):
        H0w, _ = inv_cochain_cohomology(M, 0, w=w)
        H1w, _ = inv_cochain_cohomology(M, 1, w=w)
        assert H0w.is_trivial() and H1w.is_trivial(), w


def test_inv_cochain_cohomology_two_variables():
    # de Rham of Q[x, x_s]: H^0 = Q, H^1 = H^2 = 0
    F = free_involutive_free(BaseRing("Q"))
    M = de_rham_complex(F, 2, max_weight=4)
    H0, _ = inv_cochain_cohomology(M, 0, w=0)
    assert H0.invariant_factors() == (0,)
    for w in range(1, 4):
        for n in (0, 1, 2):
            H, _ = inv_cochain_cohomology(M, n, w=w)
            assert H.is_trivial(), (n, w)


def test_inv_cochain_cohomology_zero_complex():
    M = InvolutiveCochainComplex({}, {}, {})
    H, _ = inv_cochain_cohomology(M, 0, w=0)
    assert H.is_trivial()


def test_de_rham_rejects_non_smooth():
    P = hyperelliptic_presentation([1, 0, 0, 1])
    with pytest.raises(NotSmoothPresentation):
        de_rham_complex(P, 1)


# -- check_hkr -----------------------------------------------------------------

def test_check_hkr_trivial_case():
    report = check_hkr("trivial", i_values=(0, 1, 2, 3, 4), weights=(0, 1, 2, 3, 4))
    assert all(entry[-1] for entry in report)


def test_check_hkr_free_case():
    report = check_hkr("free", i_values=(0, 1, 2, 3, 4), weights=(0, 1, 2, 3, 4))
    assert all(entry[-1] for entry in report)


def test_lsym_weight_piece_shapes():
    # i = 1 trivial weight w: Sigma^sigma zbar
    C = lsym_weight_piece("trivial", 1, 2)
    from c2algebra.complexes import homology
    from c2algebra.mackey import zsign
    assert isomorphic(homology(C, 1), zsign())
