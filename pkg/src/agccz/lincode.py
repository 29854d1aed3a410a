"""Matrix algebra over GF(q): evaluation generators, reduction to the
partially systematic form (I_k G1; 0 G0), star products of basis functions,
twisted Gram checks, and a brute-force minimum-distance oracle.

Matrices are plain numpy uint16 arrays of canonical field representatives;
row order is basis order, column order is beta-first then alpha, both in
place-id order.  All pivoting is leftmost-column smallest-row-index, so
outputs are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import HERMITIAN, CurveSpec, PlaceTable, RRBasis, eval_matrix
from .errors import AxiomViolation, ConfigError
from .field import GF

DISTANCE_BUDGET = 2**24


def lincomb(gf: GF, coeffs, M: np.ndarray) -> np.ndarray:
    """XOR_j coeffs[j] * M[j, :]."""
    coeffs = np.asarray(coeffs, dtype=np.uint16)
    if M.shape[0] == 0:
        return np.zeros(M.shape[1], dtype=np.uint16)
    return np.bitwise_xor.reduce(gf.mul_table[coeffs[:, None], M], axis=0)


def row_reduce(gf: GF, M: np.ndarray, ncols: int | None = None):
    """Reduced row echelon form restricted to the first ncols columns.

    Returns (R, U, pivots) with R = U @ M over GF(q), U invertible by
    construction (a product of elementary operations).
    """
    R = np.array(M, dtype=np.uint16, copy=True)
    m = R.shape[0]
    U = np.eye(m, dtype=np.uint16)
    mt = gf.mul_table
    pivots: list[int] = []
    row = 0
    for col in range(R.shape[1] if ncols is None else ncols):
        pivot = next((i for i in range(row, m) if R[i, col] != 0), None)
        if pivot is None:
            continue
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
            U[[row, pivot]] = U[[pivot, row]]
        scale = gf.inv(int(R[row, col]))
        R[row] = mt[scale, R[row]]
        U[row] = mt[scale, U[row]]
        factors = R[:, col].copy()
        factors[row] = 0
        R ^= mt[factors[:, None], R[row][None, :]]
        U ^= mt[factors[:, None], U[row][None, :]]
        pivots.append(col)
        row += 1
        if row == m:
            break
    return R, U, pivots


def rank(gf: GF, M: np.ndarray) -> int:
    if M.shape[0] == 0:
        return 0
    return len(row_reduce(gf, M)[2])


@dataclass
class EvalCode:
    """Full evaluation generator matrix with its twist weights.

    gen_full is m x N; the first k columns are the distinguished (beta)
    fiber and the rest the alpha places, each block in place-id order.
    u_cols is the twist vector in the same column order.
    """

    spec: CurveSpec
    table: PlaceTable
    basis: RRBasis
    gen_full: np.ndarray
    u_cols: np.ndarray
    col_place_ids: np.ndarray
    k: int


def generator_from_basis(
    spec: CurveSpec, table: PlaceTable, basis: RRBasis, u: np.ndarray
) -> EvalCode:
    """Row j = evaluations of basis function j; must have full row rank."""
    if len(basis) > table.n_places:
        raise ConfigError("basis larger than the evaluation support")
    beta = table.beta_ids
    alpha = table.alpha_ids
    cols = np.array(beta + alpha)
    gen = eval_matrix(spec.gf, basis, table, cols)
    if rank(spec.gf, gen) != len(basis):
        raise AxiomViolation(
            "evaluation-injectivity",
            f"rank {rank(spec.gf, gen)} < {len(basis)}; s too large or backend bug",
        )
    return EvalCode(spec, table, basis, gen, np.asarray(u)[cols], cols, len(beta))


def to_partially_systematic(gf: GF, M: np.ndarray, k: int):
    """Row-reduce so the first k columns become (I_k; 0).

    Returns (Gtilde, basis_change) with Gtilde = basis_change @ M.  Possible
    exactly when the first k columns have rank k, which the construction
    guarantees whenever the dual distance exceeds k.
    """
    R, U, pivots = row_reduce(gf, M, ncols=k)
    if len(pivots) != k:
        raise AxiomViolation(
            "beta-columns-rank",
            f"first {k} columns have rank {len(pivots)}; "
            f"dual-distance precondition d(C_perp) > k is violated",
        )
    return R, U


def star_product_membership(
    spec: CurveSpec, f_coeffs, g_coeffs, basis_in: RRBasis, basis_out: RRBasis
) -> np.ndarray:
    """Coefficients of the pointwise product f*g in the larger basis.

    Products are formed as polynomials in x, y; on the curve backend
    y-degrees >= r reduce through y^r = y + x^(r+1).  A nonzero leftover
    outside basis_out means the product escapes the target space.
    """
    gf = spec.gf
    r = gf.r
    f_coeffs = np.asarray(f_coeffs, dtype=np.uint16)
    g_coeffs = np.asarray(g_coeffs, dtype=np.uint16)
    poly: dict[tuple[int, int], int] = {}
    for (i1, j1), c1 in zip(basis_in.monomials, f_coeffs):
        if c1 == 0:
            continue
        for (i2, j2), c2 in zip(basis_in.monomials, g_coeffs):
            if c2 == 0:
                continue
            key = (i1 + i2, j1 + j2)
            poly[key] = poly.get(key, 0) ^ gf.mul(int(c1), int(c2))
    if spec.kind == HERMITIAN:
        # reduce y^j for j >= r: y^j = y^(j-r+1) + x^(r+1) y^(j-r)
        while True:
            high = [key for key, c in poly.items() if key[1] >= r and c != 0]
            if not high:
                break
            for (i, j) in high:
                c = poly.pop((i, j))
                for key in [(i, j - r + 1), (i + r + 1, j - r)]:
                    poly[key] = poly.get(key, 0) ^ c
    index = basis_out.index()
    out = np.zeros(len(basis_out), dtype=np.uint16)
    for key, c in poly.items():
        if c == 0:
            continue
        if key not in index:
            raise AxiomViolation(
                "star-product-membership", f"x^{key[0]} y^{key[1]} outside the target space"
            )
        out[index[key]] = c
    return out


def weighted_gram(gf: GF, M: np.ndarray, u) -> np.ndarray:
    """Entry (j1, j2) = sum_P u_P M[j1, P] M[j2, P]."""
    u = np.asarray(u, dtype=np.uint16)
    if M.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.uint16)
    weighted = gf.mul_table[M, u[None, :]]
    return np.bitwise_xor.reduce(gf.mul_table[M[:, None, :], weighted[None, :, :]], axis=2)


def min_distance_bruteforce(
    gf: GF, G: np.ndarray, budget: int = DISTANCE_BUDGET, force: bool = False
) -> int:
    """Exact minimum Hamming weight over the q^m - 1 nonzero codewords."""
    m = G.shape[0]
    if m == 0:
        raise ConfigError("empty code has no distance")
    total = gf.q**m
    if total > budget and not force:
        raise ConfigError(
            f"q^m = {total} exceeds the enumeration budget {budget}; "
            f"pass force=True or use the designed-distance bound"
        )
    best = None
    chunk = 4096
    digits = gf.q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    for start in range(1, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        msgs = (idx[:, None] // digits[None, :]) % gf.q
        rows = gf.mul_table[msgs.astype(np.uint16)[:, :, None], G[None, :, :]]
        words = np.bitwise_xor.reduce(rows, axis=1)
        weights = np.count_nonzero(words, axis=1)
        nonzero = weights[weights > 0]  # rank-deficient G maps some messages to 0
        if nonzero.size:
            low = int(nonzero.min())
            best = low if best is None else min(best, low)
    if best is None:
        raise ConfigError("the code contains no nonzero codeword")
    return best
