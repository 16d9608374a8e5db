"""Exception types shared across the package."""


class KerrOscillatorError(Exception):
    """Base class for all package-specific errors."""


class TruncationError(KerrOscillatorError, ValueError):
    """Fock-space truncation is invalid or too small for the requested state."""


class ParityViolationError(KerrOscillatorError, ValueError):
    """A matrix expected to be parity-block-diagonal couples even and odd sectors."""


class KerrFreePointError(KerrOscillatorError, ValueError):
    """The microscopic parameters sit at a Kerr-free point (K = 0), xi is undefined."""


class ConvergenceError(KerrOscillatorError, RuntimeError):
    """A numerical routine failed to reach its accuracy target."""


class StepSizeError(ConvergenceError):
    """Fixed-step integration drifted beyond the acceptable energy error."""
