"""Exception hierarchy and residual-backed verdicts.

Every verdict carried by the toolkit is backed by a concrete residual so
that boolean answers can always be audited numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class ToolkitError(Exception):
    """Base class for all toolkit errors.

    ``code`` is a stable machine-readable identifier, ``residual`` the
    numerical evidence (when there is one).
    """

    code = "toolkit-error"
    exit_category = "validation"  # one of: validation, parse, numerical

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.message = message
        self.residual = residual


class DimensionMismatch(ToolkitError):
    code = "dimension-mismatch"


class BadDims(ToolkitError):
    code = "bad-dims"


class DimNot2(ToolkitError):
    code = "dim-not-2"


class NotHermitian(ToolkitError):
    code = "not-hermitian"


class NegativeEigenvalue(ToolkitError):
    code = "negative-eigenvalue"


class NotPSD(ToolkitError):
    code = "not-psd"


class NotContraction(ToolkitError):
    code = "not-contraction"


class NotCSymmetric(ToolkitError):
    code = "not-c-symmetric"


class NotCSelfAdjoint(ToolkitError):
    code = "not-c-self-adjoint"


class NotExtension(ToolkitError):
    code = "not-extension"


class SupportViolation(ToolkitError):
    code = "support-violation"


class InconsistentGenerators(ToolkitError):
    code = "inconsistent-generators"


class ReconstructionResidual(ToolkitError):
    code = "reconstruction-residual"


class InvalidParam(ToolkitError):
    code = "invalid-param"


class InvalidInstance(ToolkitError):
    code = "invalid-instance"


class ConsistencyError(ToolkitError):
    """Two routes that must agree numerically did not.

    Signals a tolerance misconfiguration or an instance at the edge of
    numerical resolution, never a normal outcome.
    """

    code = "consistency-error"
    exit_category = "numerical"


class NotDissipative(ToolkitError):
    code = "not-dissipative"


class LambdaNotUpperHalfPlane(ToolkitError):
    code = "lambda-not-upper-half-plane"


class NotMaximal(ToolkitError):
    code = "not-maximal"


class OneInSpectrum(ToolkitError):
    """1 is a numerical eigenvalue of the contraction, so the inverse
    Cayley transform would be a relation instead of an operator."""

    code = "one-in-spectrum"
    exit_category = "numerical"


class ParseError(ToolkitError):
    code = "parse-error"
    exit_category = "parse"


@dataclass
class Certificate:
    """Residual-based verdict: ``ok`` holds iff ``residual`` is within the
    tolerance the issuing operation was given. ``checks`` itemizes the
    individual residuals behind the verdict."""

    ok: bool
    residual: float
    checks: dict[str, float] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok
