"""Exception and warning vocabulary shared across the package.

Three failure families matter to callers (and to the CLI exit-code map):

* bad input          -> InputError subtree (exit code 1)
* certification loss -> CertificationError subtree (exit code 2); the result
                        is *inconclusive*, never silently wrong
* internal fault     -> ConsistencyFault (exit code 3); two routes that must
                        agree did not, i.e. a bug surfaced
"""

from __future__ import annotations


class SpecFlowError(Exception):
    """Base class for all package-specific errors."""


class InputError(SpecFlowError, ValueError):
    """A caller-supplied value violates a documented precondition."""


class HermiticityError(InputError):
    """Matrix is not Hermitian within tolerance; carries the defect norm."""

    def __init__(self, defect: float, tol: float):
        self.defect = float(defect)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not Hermitian: symmetry defect {defect:.3e} exceeds tol {tol:.3e}"
        )


class DimensionMismatchError(InputError):
    """Operands have incompatible shapes."""


class FinitenessError(InputError):
    """Matrix entries contain NaN or Inf."""


class FunctionDomainError(InputError):
    """A scalar function was undefined (or non-finite) at an eigenvalue."""

    def __init__(self, eigenvalue: float, detail: str = ""):
        self.eigenvalue = float(eigenvalue)
        msg = f"scalar function undefined at eigenvalue {eigenvalue!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class BoundaryCollisionError(InputError):
    """An interval endpoint sits too close to the spectrum for a stable cut."""


class ContourCollisionError(InputError):
    """An eigenvalue lies too close to the integration contour."""


class InvertibilityError(InputError):
    """An operator that must be invertible has spectrum too close to 0."""


class DefinitenessError(InputError):
    """An operator that must be positive definite is not."""


class ImageMembershipError(InputError):
    """Input is not in the domain/image required by a transform.

    Used e.g. when a proposed Riesz-image element has norm >= 1, or when a
    unitary has +1 in its spectrum so the inverse Cayley transform would have
    to produce a point at infinity.
    """


class EndpointError(InputError):
    """A path endpoint violates the invertibility convention, or two paths
    that should share an endpoint do not."""


class CertificationError(SpecFlowError):
    """A result could not be certified at the requested resolution.

    Carries the parameter window that resisted certification so callers can
    refine. The verdict is "inconclusive", not "false".
    """

    def __init__(self, message: str, window: tuple[float, float] | None = None):
        self.window = window
        if window is not None:
            message += f" (window t in [{window[0]:.6g}, {window[1]:.6g}])"
        super().__init__(message)


class SamplingError(CertificationError):
    """Sampling too coarse: an observed jump cannot be accounted for."""


class ConsistencyFault(SpecFlowError):
    """Two independent routes that must agree disagreed beyond tolerance.

    This is an internal-error surface: it indicates a bug, not bad input.
    """


class IllConditionedRankWarning(UserWarning):
    """A singular value lies within a factor 10 of the rank threshold."""
