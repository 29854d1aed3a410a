"""Physical CCZ gate lists realizing a logical CCZ^gamma on qudits A, B, C.

One gate per alpha place: the gate at alpha_k carries the phase exponent
gamma * x_A^{-1} * y_k * g^A_k and its legs sit at alpha_k, phi_AB(alpha_k)
and phi_AC(alpha_k).  The three supported leg/block patterns are

    intra        blocks (1,1,1): one codeblock, depth <= 7 after scheduling
    two_block    blocks (1,1,2): legs 1,2 on block one, leg 3 on block two
    three_block  blocks (1,2,3): one leg per block, depth 1

Zero-coefficient gates are identities and are elided unless asked for.
Gates with repeated legs (repeated logical indices) are retained as
generalized diagonal phase gates; the verifier treats them exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .css import CssCode
from .errors import ConfigError

PATTERN_BLOCKS = {
    "intra": (1, 1, 1),
    "two_block": (1, 1, 2),
    "three_block": (1, 2, 3),
}
PATTERN_ALIASES = {
    "111": "intra",
    "112": "two_block",
    "123": "three_block",
    "intra": "intra",
    "two_block": "two_block",
    "three_block": "three_block",
}


@dataclass
class CczGate:
    coeff: int
    legs: tuple[tuple[int, int], ...]  # three (block_id, place_id) pairs


@dataclass
class GateList:
    pattern: str
    target: dict  # {"A","B","C","gamma"} with 1-based logical labels
    gates: list[CczGate]

    def __len__(self) -> int:
        return len(self.gates)


def canonical_pattern(pattern: str) -> str:
    try:
        return PATTERN_ALIASES[pattern]
    except KeyError:
        raise ConfigError(f"unknown pattern {pattern!r}; use intra/112/123") from None


def coefficient_vector(css: CssCode, A: int, gamma: int) -> np.ndarray:
    """gamma * x_A^{-1} * (y entrywise-times row A of G); recomputable from
    the CssCode alone, independent of any synthesized list."""
    gf = css.gf
    gf.check(gamma)
    if not 1 <= A <= css.k:
        raise ConfigError(f"logical index {A} out of range 1..{css.k}")
    scale = gf.mul(gamma, gf.inv(int(css.partition.x[A - 1])))
    return gf.mul_table[scale, gf.mul_table[css.partition.y, css.G1[A - 1]]]


def synth(css: CssCode, pattern: str, A: int, B: int, C: int, gamma: int,
          keep_zero: bool = False) -> GateList:
    pattern = canonical_pattern(pattern)
    for label in (A, B, C):
        if not 1 <= label <= css.k:
            raise ConfigError(f"logical index {label} out of range 1..{css.k}")
    coeffs = coefficient_vector(css, A, gamma)
    perm_ab = css.aut_table[(A, B)].alpha_perm
    perm_ac = css.aut_table[(A, C)].alpha_perm
    alpha = css.alpha_place_ids
    blocks = PATTERN_BLOCKS[pattern]
    gates = []
    for k, c in enumerate(coeffs):
        if c == 0 and not keep_zero:
            continue
        legs = (
            (blocks[0], alpha[k]),
            (blocks[1], alpha[perm_ab[k]]),
            (blocks[2], alpha[perm_ac[k]]),
        )
        gates.append(CczGate(int(c), legs))
    return GateList(pattern, {"A": A, "B": B, "C": C, "gamma": gamma}, gates)


def synth_intra(css, A, B, C, gamma, **kw) -> GateList:
    return synth(css, "intra", A, B, C, gamma, **kw)


def synth_two_block(css, A, B, C, gamma, **kw) -> GateList:
    return synth(css, "two_block", A, B, C, gamma, **kw)


def synth_three_block(css, A, B, C, gamma, **kw) -> GateList:
    return synth(css, "three_block", A, B, C, gamma, **kw)
