"""Exception types raised across the package.

The CLI maps each of these onto a distinct exit code.
"""


class NotHermitianError(ValueError):
    """A matrix expected to be Hermitian is not, within tolerance."""


class DimensionCapError(ValueError):
    """A dense construction would exceed the configured size cap."""


class GroundSpaceError(RuntimeError):
    """No eigenvalue fell inside the ground-energy tolerance band."""


class ImpossibleOutcomeError(RuntimeError):
    """A measurement branch with zero probability was requested."""


class CombinatorialSizeError(RuntimeError):
    """Exhaustive branch enumeration would exceed the configured cap."""


class CircuitError(ValueError):
    """A logical circuit failed to parse or validate."""

    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class BudgetExhaustedError(RuntimeError):
    """A wire ran out of chain sites before the circuit finished.

    ``gate_index`` is the position of the gate that could not complete and
    ``trace`` holds the partial run trace up to that point.
    """

    def __init__(self, message, gate_index, trace=None):
        super().__init__(message)
        self.gate_index = gate_index
        self.trace = trace
