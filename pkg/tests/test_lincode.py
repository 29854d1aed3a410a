import numpy as np
import pytest

from agccz.curve import (
    CurveSpec,
    RRBasis,
    build_backend,
    build_places,
    dual_twist_vector,
    evaluate,
    monomials_for_bound,
    rr_basis,
)
from agccz.errors import AxiomViolation, ConfigError
from agccz.field import field
from agccz.lincode import (
    generator_from_basis,
    lincomb,
    min_distance_bruteforce,
    rank,
    row_reduce,
    star_product_membership,
    to_partially_systematic,
    weighted_gram,
)


def code_r2():
    spec = CurveSpec(field(1), s=2)
    table = build_places(spec)
    basis = rr_basis(spec)
    u = dual_twist_vector(spec, table, basis)
    return spec, generator_from_basis(spec, table, basis, u)


def code_r4():
    spec = CurveSpec(field(2), s=18)
    table = build_places(spec)
    basis = rr_basis(spec)
    u = dual_twist_vector(spec, table, basis)
    return spec, generator_from_basis(spec, table, basis, u)


def test_generator_shapes_and_constant_row():
    _, code = code_r2()
    assert code.gen_full.shape == (2, 8)
    assert np.all(code.gen_full[0] == 1)  # row of the constant monomial
    _, code4 = code_r4()
    assert code4.gen_full.shape == (13, 64)
    assert rank(field(2), code4.gen_full) == 13


def test_single_monomial_basis():
    spec = CurveSpec(field(1), s=2)
    table = build_places(spec)
    basis = RRBasis([(0, 0)], 0)
    code = generator_from_basis(spec, table, basis, np.ones(8, dtype=np.uint16))
    assert np.all(code.gen_full == 1)


def test_row_reduce_identity_on_systematic():
    gf = field(1)
    M = np.array([[1, 0, 2, 3], [0, 1, 1, 2]], dtype=np.uint16)
    R, U, pivots = row_reduce(gf, M, ncols=2)
    assert np.array_equal(R, M)
    assert np.array_equal(U, np.eye(2, dtype=np.uint16))
    assert pivots == [0, 1]


def test_partially_systematic_r4():
    spec, code = code_r4()
    Gt, U = to_partially_systematic(spec.gf, code.gen_full, code.k)
    k = code.k
    assert np.array_equal(Gt[:k, :k], np.eye(k, dtype=np.uint16))
    assert np.all(Gt[k:, :k] == 0)
    # basis_change really is the certificate: U @ gen_full == Gt
    mt = spec.gf.mul_table
    prod = np.zeros_like(Gt)
    for i in range(Gt.shape[0]):
        prod[i] = lincomb(spec.gf, U[i], code.gen_full)
    assert np.array_equal(prod, Gt)
    # row space preserved: mutual membership via ranks of stacked matrices
    stacked = np.vstack([code.gen_full, Gt])
    assert rank(spec.gf, stacked) == rank(spec.gf, code.gen_full) == Gt.shape[0]


def test_partially_systematic_rejects_repeated_beta_columns():
    gf = field(1)
    # adversarial: both beta columns equal forces rank 1 < k = 2
    M = np.array([[1, 1, 1, 1, 0, 2], [0, 0, 1, 2, 3, 1]], dtype=np.uint16)
    with pytest.raises(AxiomViolation, match="dual-distance"):
        to_partially_systematic(gf, M, 2)


def test_star_product_identity_and_x_squared():
    spec, _ = code_r2()
    basis2 = rr_basis(spec)                      # {1, x}
    basis4 = RRBasis(monomials_for_bound(2, 4), 4)  # {1, x, y, x^2}
    one = np.array([1, 0], dtype=np.uint16)
    x = np.array([0, 1], dtype=np.uint16)
    g = np.array([2, 3], dtype=np.uint16)
    prod = star_product_membership(spec, one, g, basis2, basis4)
    idx = basis4.index()
    assert prod[idx[(0, 0)]] == 2 and prod[idx[(1, 0)]] == 3
    xx = star_product_membership(spec, x, x, basis2, basis4)
    expect = np.zeros(len(basis4), dtype=np.uint16)
    expect[idx[(2, 0)]] = 1
    assert np.array_equal(xx, expect)


def test_star_product_componentwise_evaluation_exhaustive():
    # evaluation of the product == componentwise product, all pairs at r=2
    spec = CurveSpec(field(1), s=2)
    table = build_places(spec)
    basis2 = rr_basis(spec)
    basis4 = RRBasis(monomials_for_bound(2, 4), 4)
    gf = spec.gf
    for a in range(gf.q**2):
        fa = np.array([a % gf.q, a // gf.q], dtype=np.uint16)
        for b in range(gf.q**2):
            gb = np.array([b % gf.q, b // gf.q], dtype=np.uint16)
            prod = star_product_membership(spec, fa, gb, basis2, basis4)
            for p in table.places:
                lhs = 0
                for co, mon in zip(prod, basis4.monomials):
                    lhs ^= gf.mul(int(co), evaluate(gf, mon, p.x, p.y))
                f_val = gf.mul(int(fa[0]), 1) ^ gf.mul(int(fa[1]), p.x)
                g_val = gf.mul(int(gb[0]), 1) ^ gf.mul(int(gb[1]), p.x)
                assert lhs == gf.mul(f_val, g_val)


def test_star_product_reduction_uses_curve_relation():
    # y * y^(r-1) at r=2 wraps around to y + x^(r+1) = y + x^3
    spec = CurveSpec(field(1), s=2)
    basis_y = RRBasis([(0, 0), (0, 1)], 3)
    basis_big = RRBasis(monomials_for_bound(2, 6), 6)
    y = np.array([0, 1], dtype=np.uint16)
    prod = star_product_membership(spec, y, y, basis_y, basis_big)
    idx = basis_big.index()
    expect = np.zeros(len(basis_big), dtype=np.uint16)
    expect[idx[(0, 1)]] = 1
    expect[idx[(3, 0)]] = 1
    assert np.array_equal(prod, expect)


def test_star_product_escape_detected():
    spec = CurveSpec(field(1), s=2)
    basis2 = rr_basis(spec)
    x = np.array([0, 1], dtype=np.uint16)
    with pytest.raises(AxiomViolation, match="target space"):
        star_product_membership(spec, x, x, basis2, basis2)


def test_weighted_gram_zero_and_perturbed():
    spec, code = code_r2()
    gram = weighted_gram(spec.gf, code.gen_full, code.u_cols)
    assert np.all(gram == 0)
    bad = code.u_cols.copy()
    bad[0] = 0
    assert np.any(weighted_gram(spec.gf, code.gen_full, bad) != 0)


def test_weighted_gram_constants_even_length():
    gf = field(1)
    M = np.ones((1, 6), dtype=np.uint16)
    assert np.all(weighted_gram(gf, M, np.ones(6, dtype=np.uint16)) == 0)


def test_gram_split_identity():
    # sum_alpha y_P g g == sum_beta x_P g~ g~ for every row pair (char 2)
    spec, code = code_r4()
    Gt, _ = to_partially_systematic(spec.gf, code.gen_full, code.k)
    k = code.k
    beta_gram = weighted_gram(spec.gf, Gt[:, :k], code.u_cols[:k])
    alpha_gram = weighted_gram(spec.gf, Gt[:, k:], code.u_cols[k:])
    assert np.array_equal(alpha_gram, beta_gram)
    # and the beta side is diag(x_j) on the first k rows, zero elsewhere
    expect = np.zeros_like(beta_gram)
    for j in range(k):
        expect[j, j] = code.u_cols[j]
    assert np.array_equal(beta_gram, expect)


def test_min_distance_r2():
    spec, code = code_r2()
    d = min_distance_bruteforce(spec.gf, code.gen_full)
    assert d == 6            # frozen: codewords a + bx vanish on one fiber
    assert d >= 8 - 2        # designed bound N - s


def test_min_distance_trivial_cases():
    gf = field(1)
    rep = np.ones((1, 5), dtype=np.uint16)
    assert min_distance_bruteforce(gf, rep) == 5
    withlow = np.array([[1, 1, 1, 1, 1], [0, 0, 0, 0, 1]], dtype=np.uint16)
    assert min_distance_bruteforce(gf, withlow) == 1


def test_min_distance_budget():
    gf = field(2)
    G = np.ones((3, 4), dtype=np.uint16)
    with pytest.raises(ConfigError, match="budget"):
        min_distance_bruteforce(gf, G, budget=10)
    assert min_distance_bruteforce(gf, G, budget=10, force=True) == 4
