"""Exception types shared across the package.

The CLI maps these onto distinct exit codes (config 2, axiom 3, verify 4).
"""


class ConfigError(ValueError):
    """Invalid user input: parameters out of range, malformed artifacts."""


class AxiomViolation(RuntimeError):
    """A backend or build invariant failed; carries the failing axiom name."""

    def __init__(self, axiom: str, detail: str = ""):
        self.axiom = axiom
        self.detail = detail
        msg = f"axiom violated: {axiom}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class VerificationFailure(RuntimeError):
    """A gate-list certificate came back FAIL."""
