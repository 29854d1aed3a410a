"""Proofs, at desk scale, that a synthesized gate list implements the claimed
logical gate.

Two independent routes:

*   The trilinear route: a list of diagonal CCZ gates acts on basis coset
    states by the phase (-1)^{tr T(w, w', w'')} where T is the m x m x m
    tensor with entries sum_gates coeff * g^{j1}(leg1) g^{j2}(leg2)
    g^{j3}(leg3).  Trilinearity makes the m^3 basis evaluations a complete
    certificate: the list implements CCZ^gamma[A, B, C] exactly when T equals
    gamma at (A, B, C) and zero elsewhere.  The intra and two-block patterns
    evaluate the same tensor at repeated arguments (T(w,w,w) and T(w,w,w')),
    so the criterion carries over.

*   The state route: accumulate the physical phase exponent
    sum_gates tr(coeff * eta1 eta2 eta3) on explicit coset words and compare
    against tr(gamma w_A w'_B w''_C), exhaustively when the word count fits
    the budget and by seeded sampling otherwise.  This checks the trilinear
    reduction itself, since it never sums over beta places.

A dense-vector mode exists for single-block systems with q^n within budget:
the diagonal circuit is applied to the full q^n amplitude vector.  Never used
above toy scale; the phase-combinatoric routes are the scalable ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dfield

import numpy as np

from .css import CssCode, logical_coset_enumerator
from .errors import ConfigError
from .synth import PATTERN_BLOCKS, GateList

STATE_BUDGET = 2**20
DENSE_BUDGET = 2**20


@dataclass
class PhaseForm:
    """The exact m x m x m phase tensor of a gate list over the code basis."""

    tensor: np.ndarray
    pattern: str
    target: dict


@dataclass
class Certificate:
    pattern: str
    target: dict
    method: str      # tensor | state | dense
    mode: str        # exhaustive | sampled
    result: str      # PASS | FAIL
    seed: int | None = None
    witness: dict | None = None
    details: dict = dfield(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.result == "PASS"


def _gate_arrays(css: CssCode, gl: GateList):
    """Coefficients and per-leg alpha positions of a gate list."""
    pos = css.alpha_position()
    coeffs = np.array([g.coeff for g in gl.gates], dtype=np.uint16)
    legs = np.zeros((3, len(gl.gates)), dtype=np.int64)
    blocks = np.zeros((3, len(gl.gates)), dtype=np.int64)
    for i, gate in enumerate(gl.gates):
        for slot, (block, pid) in enumerate(gate.legs):
            if pid not in pos:
                raise ConfigError(f"gate leg at place {pid} is not an alpha place")
            legs[slot, i] = pos[pid]
            blocks[slot, i] = block
    return coeffs, legs, blocks


def build_phase_form(css: CssCode, gl: GateList) -> PhaseForm:
    """T[j1, j2, j3] = sum_gates coeff * g^{j1}(leg1) g^{j2}(leg2) g^{j3}(leg3),
    computed from the gate list itself so tampering is visible."""
    m = css.m
    mt = css.gf.mul_table
    if not gl.gates:
        return PhaseForm(np.zeros((m, m, m), dtype=np.uint16), gl.pattern, gl.target)
    coeffs, legs, _ = _gate_arrays(css, gl)
    M1 = css.G[:, legs[0]]
    M2 = css.G[:, legs[1]]
    M3 = css.G[:, legs[2]]
    t12 = mt[M1[:, None, :], M2[None, :, :]]
    t123 = mt[t12[:, :, None, :], M3[None, None, :, :]]
    weighted = mt[t123, coeffs[None, None, None, :]]
    return PhaseForm(np.bitwise_xor.reduce(weighted, axis=3), gl.pattern, gl.target)


def verify_logical_ccz(css: CssCode, gl: GateList) -> Certificate:
    """PASS iff the tensor is exactly gamma * e_A (x) e_B (x) e_C."""
    form = build_phase_form(css, gl)
    A, B, C = gl.target["A"], gl.target["B"], gl.target["C"]
    gamma = gl.target["gamma"]
    expected = np.zeros_like(form.tensor)
    expected[A - 1, B - 1, C - 1] = gamma
    diff = form.tensor != expected
    if not diff.any():
        return Certificate(gl.pattern, gl.target, "tensor", "exhaustive", "PASS",
                           details={"entries": int(form.tensor.size)})
    j1, j2, j3 = (int(v) for v in np.argwhere(diff)[0])
    return Certificate(
        gl.pattern, gl.target, "tensor", "exhaustive", "FAIL",
        witness={
            "entry": [j1 + 1, j2 + 1, j3 + 1],
            "value": f"{int(form.tensor[j1, j2, j3]):#x}",
            "expected": f"{int(expected[j1, j2, j3]):#x}",
        },
    )


def _pattern_word_slots(pattern: str) -> tuple[int, list[int]]:
    """Number of independent blocks and the block index feeding each leg slot."""
    blocks = PATTERN_BLOCKS[pattern]
    distinct = sorted(set(blocks))
    return len(distinct), [distinct.index(b) for b in blocks]


def _expected_exponent(css, gl, words_logical) -> int:
    """tr(gamma * w_A w'_B w''_C) with the pattern's block-to-slot map."""
    gf = css.gf
    A, B, C = gl.target["A"], gl.target["B"], gl.target["C"]
    _, slot_block = _pattern_word_slots(gl.pattern)
    vals = [
        int(words_logical[slot_block[0]][A - 1]),
        int(words_logical[slot_block[1]][B - 1]),
        int(words_logical[slot_block[2]][C - 1]),
    ]
    prod = gf.mul(gf.mul(vals[0], vals[1]), vals[2])
    return gf.trace2(gf.mul(gl.target["gamma"], prod))


def _phase_exponents(css, coeffs, legs, slot_block, words_physical) -> np.ndarray:
    """Vectorized physical phase exponents for a batch of physical words.

    words_physical: list over blocks of (batch, n) arrays.  Returns a batch
    of {0,1} exponents tr(sum_gates coeff * eta1 eta2 eta3).
    """
    gf = css.gf
    mt = gf.mul_table
    eta1 = words_physical[slot_block[0]][:, legs[0]]
    eta2 = words_physical[slot_block[1]][:, legs[1]]
    eta3 = words_physical[slot_block[2]][:, legs[2]]
    prod = mt[mt[eta1, eta2], eta3]
    total = np.bitwise_xor.reduce(mt[prod, coeffs[None, :]], axis=1)
    return gf.trace2_table[total]


def verify_state_oracle(
    css: CssCode,
    gl: GateList,
    budget: int = STATE_BUDGET,
    samples: int = 10_000,
    seed: int | None = None,
) -> Certificate:
    """Phase check on explicit coset words.

    Exhaustive when (q^m)^blocks words fit the budget: every logical word
    tuple and every coset element.  Otherwise `samples` seeded draws of
    (logical words, coset elements).  Either way the criterion is that the
    physical exponent equals tr(gamma w_A w'_B w''_C): equality across all
    coset draws is exactly phase constancy on the coset.
    """
    gf = css.gf
    nblocks, slot_block = _pattern_word_slots(gl.pattern)
    if not gl.gates:
        coeffs = np.zeros(0, dtype=np.uint16)
        legs = np.zeros((3, 0), dtype=np.int64)
    else:
        coeffs, legs, _ = _gate_arrays(css, gl)

    total_states = (gf.q**css.m) ** nblocks
    exhaustive = total_states <= budget
    if not exhaustive and seed is None:
        raise ConfigError("sampled state oracle requires a seed")

    A, B, C = gl.target["A"], gl.target["B"], gl.target["C"]
    gamma = gl.target["gamma"]

    if exhaustive:
        # all q^m coefficient vectors per block: logical part w plus coset part
        digits = gf.q ** np.arange(css.m - 1, -1, -1, dtype=np.int64)
        idx = np.arange(gf.q**css.m, dtype=np.int64)
        allco = ((idx[:, None] // digits[None, :]) % gf.q).astype(np.uint16)
        words = np.zeros((len(idx), css.n), dtype=np.uint16)
        for j in range(css.m):
            words ^= gf.mul_table[allco[:, j][:, None], css.G[j][None, :]]
        combos = itertools.product(range(len(idx)), repeat=nblocks)
        batch = np.array(list(combos), dtype=np.int64)
        words_per_block = [words[batch[:, b]] for b in range(nblocks)]
        got = _phase_exponents(css, coeffs, legs, slot_block, words_per_block)
        logical = allco[:, : css.k]
        exp_vals = []
        for row in batch:
            wl = [logical[row[b]] for b in range(nblocks)]
            exp_vals.append(_expected_exponent(css, gl, wl))
        expected = np.array(exp_vals, dtype=np.uint16)
        mismatch = got != expected
        if mismatch.any():
            bad = int(np.argmax(mismatch))
            witness = {
                "coefficients": [[int(v) for v in allco[batch[bad, b]]] for b in range(nblocks)],
                "phase": int(got[bad]),
                "expected": int(expected[bad]),
            }
            return Certificate(gl.pattern, gl.target, "state", "exhaustive", "FAIL",
                               witness=witness)
        return Certificate(gl.pattern, gl.target, "state", "exhaustive", "PASS",
                           details={"states": int(len(batch))})

    rng = np.random.default_rng(seed)
    m0 = css.G0.shape[0]
    logical_words = rng.integers(0, gf.q, size=(samples, nblocks, css.k)).astype(np.uint16)
    coset_coeffs = rng.integers(0, gf.q, size=(samples, nblocks, m0)).astype(np.uint16)
    words_per_block = []
    for b in range(nblocks):
        wb = np.zeros((samples, css.n), dtype=np.uint16)
        for j in range(css.k):
            wb ^= gf.mul_table[logical_words[:, b, j][:, None], css.G1[j][None, :]]
        for j in range(m0):
            wb ^= gf.mul_table[coset_coeffs[:, b, j][:, None], css.G0[j][None, :]]
        words_per_block.append(wb)
    got = _phase_exponents(css, coeffs, legs, slot_block, words_per_block)
    expected = np.zeros(samples, dtype=np.uint16)
    for i in range(samples):
        wl = [logical_words[i, b] for b in range(nblocks)]
        expected[i] = _expected_exponent(css, gl, wl)
    mismatch = got != expected
    if mismatch.any():
        bad = int(np.argmax(mismatch))
        witness = {
            "logical_words": [[int(v) for v in logical_words[bad, b]] for b in range(nblocks)],
            "coset_coefficients": [[int(v) for v in coset_coeffs[bad, b]] for b in range(nblocks)],
            "phase": int(got[bad]),
            "expected": int(expected[bad]),
        }
        return Certificate(gl.pattern, gl.target, "state", "sampled", "FAIL",
                           seed=seed, witness=witness)
    return Certificate(gl.pattern, gl.target, "state", "sampled", "PASS",
                       seed=seed, details={"samples": samples})


def dense_state_check(css: CssCode, gl: GateList, budget: int = DENSE_BUDGET) -> Certificate:
    """Apply the diagonal circuit to the full q^n amplitude vector of one
    block and compare every logical basis state against its expected global
    phase.  Intra-pattern only; the state space must fit the budget."""
    gf = css.gf
    if gl.pattern != "intra":
        raise ConfigError("dense mode simulates a single block (intra pattern)")
    size = gf.q**css.n
    if size > budget:
        raise ConfigError(f"q^n = {size} exceeds the dense budget {budget}")

    if gl.gates:
        coeffs, legs, _ = _gate_arrays(css, gl)
    else:
        coeffs = np.zeros(0, dtype=np.uint16)
        legs = np.zeros((3, 0), dtype=np.int64)

    # digits[i, pos] = symbol of basis index i at alpha position pos
    idx = np.arange(size, dtype=np.int64)
    weights = gf.q ** np.arange(css.n - 1, -1, -1, dtype=np.int64)
    digits = ((idx[:, None] // weights[None, :]) % gf.q).astype(np.uint16)

    amp = np.ones(size, dtype=np.int8)  # signs; diagonal circuit keeps support
    mt = gf.mul_table
    for g in range(len(coeffs)):
        eta = mt[mt[digits[:, legs[0, g]], digits[:, legs[1, g]]], digits[:, legs[2, g]]]
        bits = gf.trace2_table[mt[coeffs[g], eta]]
        amp = np.where(bits == 1, -amp, amp).astype(np.int8)

    A, B, C = gl.target["A"], gl.target["B"], gl.target["C"]
    gamma = gl.target["gamma"]
    k = css.k
    for wi in range(gf.q**k):
        w = np.array([(wi // gf.q**p) % gf.q for p in range(k - 1, -1, -1)], dtype=np.uint16)
        prod = gf.mul(gf.mul(int(w[A - 1]), int(w[B - 1])), int(w[C - 1]))
        want = 1 - 2 * gf.trace2(gf.mul(gamma, prod))
        for word in logical_coset_enumerator(css, w, budget=budget):
            i = int(np.dot(word.astype(np.int64), weights))
            if amp[i] != want:
                return Certificate(
                    gl.pattern, gl.target, "dense", "exhaustive", "FAIL",
                    witness={"logical_word": [int(v) for v in w],
                             "state_index": i, "phase": int(amp[i]), "expected": int(want)},
                )
    return Certificate(gl.pattern, gl.target, "dense", "exhaustive", "PASS",
                       details={"dimension": int(size)})
