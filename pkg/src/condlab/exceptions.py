from typing import Any, Optional

class CondlabError(Exception):
    """
    Base exception class for all custom errors within condlab.
    Catching this will catch any condlab-specific operational failure.
    """
    __module__ = "builtins"
    pass

# -------------------------------------------------------------------------
# Usage errors: invalid parameters or inputs (CLI exit code 1)
# -------------------------------------------------------------------------

class ParameterError(CondlabError, ValueError):
    """
    Raised when a model parameter or call argument violates its documented precondition
    (e.g. β outside (0,1), an interval width h outside [0,1], a generation beyond the
    computed weight sequence).
    """
    __module__ = "builtins"

    def __init__(self, name: str, value: Any, requirement: str) -> None:
        self.name = name
        self.value = value
        self.requirement = requirement
        super().__init__(f"Invalid {name}={value!r}: {requirement}.")

class DistributionSpecError(CondlabError, ValueError):
    """
    Raised when a distribution string such as 'polytail:2' or 'point:0.5' cannot be parsed.
    """
    __module__ = "builtins"

    def __init__(self, text: str, issue: str) -> None:
        self.text = text
        super().__init__(
            f"Cannot parse distribution '{text}': {issue}. "
            f"Expected 'polytail:ALPHA', 'point:A' or 'grid:x1@w1,x2@w2,...'."
        )

class NoCondensationError(CondlabError, ValueError):
    """
    Raised when an operation that needs the condensation phase (γ(β) > 0) is requested
    for parameters in the mutation-dominated regime.
    """
    __module__ = "builtins"

    def __init__(self, gamma: float, context: Optional[str] = "") -> None:
        self.gamma = gamma
        ctx_msg = f" ({context})" if context else ""
        super().__init__(f"No condensation{ctx_msg}: γ(β) = {gamma!r} must be strictly positive.")

class PhaseError(CondlabError, ValueError):
    """
    Raised when a fit-get-richer quantity is requested for a Bose-Einstein phase input.
    """
    __module__ = "builtins"

    def __init__(self, integral: float, lam: float) -> None:
        self.integral = integral
        self.lam = lam
        super().__init__(
            f"Bose-Einstein phase: ∫q(dx)/(1-x) = {integral!r} < 1 + λ = {1.0 + lam!r}; "
            f"the fit-get-richer root λ* does not exist."
        )

class UsageError(CondlabError, ValueError):
    """Raised by the command-line front end for malformed invocations."""
    __module__ = "builtins"

class ManifestError(CondlabError, ValueError):
    """
    Raised when a run manifest is missing, malformed or names an unknown subcommand.
    """
    __module__ = "builtins"

# -------------------------------------------------------------------------
# Numerical failures (CLI exit code 2)
# -------------------------------------------------------------------------

class NumericalError(CondlabError, ArithmeticError):
    """
    Base class for numerical failures: the inputs were valid, but the computation
    could not deliver a certified answer.
    """
    __module__ = "builtins"

class NonDefectiveSystemError(NumericalError):
    """
    Raised when a renewal system whose kernel sums to one or more is asked for its total sum.
    """
    __module__ = "builtins"

    def __init__(self, kernel_total: float) -> None:
        self.kernel_total = kernel_total
        super().__init__(
            f"Renewal system is not defective: kernel total {kernel_total!r} >= 1, "
            f"the solution is not summable."
        )

class NoRootError(NumericalError):
    """
    Raised when a monotone root search has no sign change to bracket
    (e.g. a Malthusian parameter for a sequence whose total mass never exceeds one).
    """
    __module__ = "builtins"

    def __init__(self, what: str, detail: str) -> None:
        self.what = what
        super().__init__(f"No root for {what}: {detail}.")

class ConvergenceError(NumericalError):
    """Raised when an iterative method exhausts its iteration or term budget."""
    __module__ = "builtins"

class WeightNormalizationError(NumericalError):
    """
    Raised when the categorical law of a cycle length does not sum to one,
    which indicates a corrupted normalisation sequence.
    """
    __module__ = "builtins"

    def __init__(self, size: int, total: float) -> None:
        self.size = size
        self.total = total
        super().__init__(
            f"Cycle-length weights for remaining size {size} sum to {total!r}, not 1."
        )

class DegenerateMeasureError(NumericalError):
    """
    Raised when a measure loses all of its mass or its normalising mean vanishes
    (e.g. zero mean fitness during direct iteration, non-finite Poisson parameters).
    """
    __module__ = "builtins"

class DegenerateProfileError(NumericalError):
    """
    Raised when a wave profile cannot be fitted or compared: zero plateau or
    a non-monotone empirical distribution function.
    """
    __module__ = "builtins"

class ReproducibilityError(NumericalError):
    """
    Raised by manifest verification when a re-run produces different output bytes.
    """
    __module__ = "builtins"

    def __init__(self, path: str, expected: str, received: str) -> None:
        self.path = path
        self.expected = expected
        self.received = received
        msg = (
            f"Output '{path}' is not reproducible.\n"
            f"  Recorded SHA-256 : {expected}\n"
            f"  Re-run SHA-256   : {received}"
        )
        super().__init__(msg)
