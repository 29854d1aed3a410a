import itertools

import numpy as np
import pytest

from agccz.css import build_css
from agccz.curve import CurveSpec, build_backend, builtin_toy_r2, toy_spec
from agccz.errors import ConfigError
from agccz.field import field
from agccz.synth import CczGate, synth
from agccz.verifier import (
    build_phase_form,
    dense_state_check,
    verify_logical_ccz,
    verify_state_oracle,
)


@pytest.fixture(scope="module")
def css4():
    return build_css(build_backend(CurveSpec(field(2), s=18)))


@pytest.fixture(scope="module")
def css_toy():
    return build_css(build_backend(toy_spec(builtin_toy_r2())))


def test_tensor_shape_and_target_entry(css4):
    gl = synth(css4, "123", 1, 2, 3, 1)
    form = build_phase_form(css4, gl)
    assert form.tensor.shape == (13, 13, 13)
    assert form.tensor[0, 1, 2] == 1  # gamma after the x_A cancellation
    # single nonzero entry
    assert np.count_nonzero(form.tensor) == 1


def test_gamma_zero_tensor(css4):
    gl = synth(css4, "intra", 1, 2, 3, 0)
    assert np.all(build_phase_form(css4, gl).tensor == 0)
    assert verify_logical_ccz(css4, gl).passed  # logical identity


def test_tensor_pass_sample_triples(css4):
    w = css4.gf.nonsubfield_element()
    for pattern in ["intra", "112", "123"]:
        for (A, B, C) in [(1, 2, 3), (2, 2, 2), (4, 1, 3), (3, 3, 1)]:
            for gamma in [1, w]:
                cert = verify_logical_ccz(css4, synth(css4, pattern, A, B, C, gamma))
                assert cert.passed, (pattern, A, B, C, gamma, cert.witness)


def test_tensor_detects_perturbed_coefficient(css4):
    gl = synth(css4, "123", 1, 2, 3, 1)
    gl.gates[5] = CczGate(gl.gates[5].coeff ^ 3, gl.gates[5].legs)
    cert = verify_logical_ccz(css4, gl)
    assert not cert.passed and cert.witness is not None


def test_state_oracle_toy_exhaustive(css_toy):
    w = css_toy.gf.nonsubfield_element()
    for pattern in ["intra", "112", "123"]:
        for (A, B, C) in itertools.product([1, 2], repeat=3):
            for gamma in [1, w]:
                gl = synth(css_toy, pattern, A, B, C, gamma)
                cert = verify_state_oracle(css_toy, gl)
                assert cert.mode == "exhaustive"
                assert cert.passed, (pattern, A, B, C, gamma, cert.witness)
                # agreement with the tensor route
                assert verify_logical_ccz(css_toy, gl).passed


def test_state_oracle_sampled_r4(css4):
    gl = synth(css4, "intra", 1, 2, 3, 1)
    cert = verify_state_oracle(css4, gl, samples=500, seed=11)
    assert cert.mode == "sampled" and cert.seed == 11 and cert.passed
    with pytest.raises(ConfigError, match="seed"):
        verify_state_oracle(css4, gl, samples=10)


def test_state_oracle_detects_broken_aut(css_toy):
    # swap the images of two alpha places in one leg column
    gl = synth(css_toy, "123", 1, 2, 1, 1)
    g0, g1 = gl.gates[0], gl.gates[1]
    gl.gates[0] = CczGate(g0.coeff, (g0.legs[0], g1.legs[1], g0.legs[2]))
    gl.gates[1] = CczGate(g1.coeff, (g1.legs[0], g0.legs[1], g1.legs[2]))
    state = verify_state_oracle(css_toy, gl)
    tensor = verify_logical_ccz(css_toy, gl)
    assert not state.passed and not tensor.passed


def test_identity_list_keeps_all_phases(css_toy):
    gl = synth(css_toy, "intra", 1, 2, 2, 0)
    cert = verify_state_oracle(css_toy, gl)
    assert cert.passed and len(gl) == 0


def test_dense_mode_toy(css_toy):
    w = css_toy.gf.nonsubfield_element()
    for (A, B, C) in [(1, 1, 1), (1, 2, 1), (2, 2, 2), (2, 1, 2)]:
        for gamma in [1, w]:
            gl = synth(css_toy, "intra", A, B, C, gamma)
            cert = dense_state_check(css_toy, gl)
            assert cert.passed, (A, B, C, gamma, cert.witness)


def test_dense_mode_guards(css4, css_toy):
    with pytest.raises(ConfigError, match="single block"):
        dense_state_check(css_toy, synth(css_toy, "123", 1, 2, 1, 1))
    with pytest.raises(ConfigError, match="budget"):
        dense_state_check(css4, synth(css4, "intra", 1, 2, 3, 1))


def test_dense_mode_catches_wrong_phase(css_toy):
    gl = synth(css_toy, "intra", 1, 2, 1, 1)
    gl.gates[0] = CczGate(gl.gates[0].coeff ^ 1, gl.gates[0].legs)
    assert not dense_state_check(css_toy, gl).passed


def test_mutation_sensitivity_sample(css4):
    rng = np.random.default_rng(3)
    detected = 0
    trials = 20
    for _ in range(trials):
        gl = synth(css4, "123", 1, 2, 3, 1)
        which = int(rng.integers(0, len(gl.gates)))
        gate = gl.gates[which]
        delta = int(rng.integers(1, css4.gf.q))
        gl.gates[which] = CczGate(gate.coeff ^ delta, gate.legs)
        if not verify_logical_ccz(css4, gl).passed:
            detected += 1
    assert detected == trials
