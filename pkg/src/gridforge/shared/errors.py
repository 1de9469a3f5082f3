"""Error hierarchy for grid generation.

Every failure raised by the library derives from ``GridforgeError``. The two
main branches map onto CLI exit codes: configuration problems (2) and
numerical failures (3). Grid file problems map to 4.
"""

from __future__ import annotations


class GridforgeError(Exception):
    """Base class for all library errors."""

    exit_code: int = 1


class ConfigurationError(GridforgeError, ValueError):
    """Invalid configuration, unknown preset or malformed field description."""

    exit_code = 2


class GridFileError(GridforgeError):
    """Unreadable or schema-violating grid container."""

    exit_code = 4


class NumericalError(GridforgeError):
    """A computation could not meet its preconditions or tolerances."""

    exit_code = 3


class FluxDomainError(NumericalError, ValueError):
    def __init__(self, field: str, x: float, y: float, reason: str):
        self.field = field
        self.x = x
        self.y = y
        self.reason = reason
        super().__init__(f"{field} is not defined at ({x:.6g}, {y:.6g}): {reason}")


class SingularGradientError(NumericalError):
    def __init__(self, x: float, y: float, grad_sq: float):
        self.x = x
        self.y = y
        self.grad_sq = grad_sq
        super().__init__(f"Gradient of psi vanishes at ({x:.6g}, {y:.6g}) (|grad psi|^2={grad_sq:.3e})")


class SingularJacobianError(NumericalError):
    def __init__(self, determinant: float, threshold: float):
        self.determinant = determinant
        self.threshold = threshold
        super().__init__(
            f"Jacobian determinant {determinant:.3e} is below the threshold {threshold:.3e}"
        )


class DegenerateMetricError(NumericalError):
    def __init__(self, determinant: float):
        self.determinant = determinant
        super().__init__(f"Inverse metric determinant {determinant:.3e} is not positive")


class CenterPointError(NumericalError):
    def __init__(self, x: float, y: float):
        self.x = x
        self.y = y
        super().__init__(f"Angle is undefined at the frame center ({x:.6g}, {y:.6g})")


class StepFailureError(NumericalError):
    def __init__(self, message: str, steps: int, t: float):
        self.steps = steps
        self.t = t
        super().__init__(f"{message} (after {steps} steps at parameter {t:.12g})")


class DenominatorVanishingError(NumericalError):
    def __init__(self, value: float, t: float):
        self.value = value
        self.t = t
        super().__init__(
            f"Reparameterization denominator {value:.3e} vanished at parameter {t:.12g}"
        )


class BracketFailureError(NumericalError):
    def __init__(self, target: float, reach: float):
        self.target = target
        self.reach = reach
        super().__init__(
            f"No sign change of psi - {target:.12g} found along the ray within distance {reach:.6g}"
        )


class ContourResidualError(NumericalError):
    def __init__(self, target: float, residual: float, tolerance: float):
        self.target = target
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(
            f"Point found for psi = {target:.12g} misses it by {residual:.3e} "
            f"(tolerance {tolerance:.3e})"
        )


class ClosureError(NumericalError):
    def __init__(self, gap: float, tolerance: float):
        self.gap = gap
        self.tolerance = tolerance
        super().__init__(f"Closed trace misses its start by {gap:.3e} (tolerance {tolerance:.3e})")


class PositivityError(NumericalError):
    def __init__(self, what: str, value: float):
        self.what = what
        self.value = value
        super().__init__(f"{what} is not positive definite (min eigen-quantity {value:.3e})")


class SolverConvergenceError(NumericalError):
    def __init__(self, iterations: int, residual: float, tolerance: float):
        self.iterations = iterations
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(
            f"Conjugate gradient stopped after {iterations} iterations with relative residual "
            f"{residual:.3e} > {tolerance:.3e}"
        )


class IndefiniteOperatorError(NumericalError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"Assembled operator is not positive definite: {detail}")


class LatticeMismatchError(NumericalError, ValueError):
    def __init__(self, shape_a: tuple[int, ...], shape_b: tuple[int, ...]):
        self.shape_a = shape_a
        self.shape_b = shape_b
        super().__init__(f"Lattices {shape_a} and {shape_b} are not nested; pass interpolate=True")


class SignChangeError(NumericalError):
    def __init__(self, what: str):
        self.what = what
        super().__init__(f"{what} changes sign along the boundary")


class OutOfBoxError(NumericalError):
    def __init__(self, zeta: float, lower: float, upper: float):
        self.zeta = zeta
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"Streamline left the computational box: zeta={zeta:.6g} outside [{lower:.6g}, {upper:.6g}]"
        )


class InterpolationOrderError(NumericalError, ValueError):
    def __init__(self, order: int):
        self.order = order
        super().__init__(f"Interpolation order {order} is too low; at least 3 is required")


class NonPositiveValueError(NumericalError, ValueError):
    def __init__(self, what: str, value: float):
        self.what = what
        self.value = value
        super().__init__(f"{what} must be positive, got {value:.6g}")
