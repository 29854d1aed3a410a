"""CSS codes from curve evaluation codes with addressable transversal CCZ
gates: field arithmetic, curve backends, code assembly, gate synthesis,
depth scheduling and exact verification."""

__version__ = "0.1.0"

from .css import CssCode, build_css, quantum_params, tower_calculator
from .curve import CurveSpec, build_backend, builtin_toy_r2
from .field import GF, field
from .scheduler import greedy_schedule, validate_schedule
from .synth import synth, synth_intra, synth_three_block, synth_two_block
from .verifier import dense_state_check, verify_logical_ccz, verify_state_oracle

__all__ = [
    "GF",
    "field",
    "CurveSpec",
    "build_backend",
    "builtin_toy_r2",
    "CssCode",
    "build_css",
    "quantum_params",
    "tower_calculator",
    "synth",
    "synth_intra",
    "synth_two_block",
    "synth_three_block",
    "greedy_schedule",
    "validate_schedule",
    "verify_logical_ccz",
    "verify_state_oracle",
    "dense_state_check",
    "__version__",
]
