"""Exception types shared across the solver modules."""


class GridMismatchError(ValueError):
    """Two fields that must share a grid do not."""


class MultiplierDomainError(ValueError):
    """A Fourier symbol evaluated to a non-finite value on the grid."""


class CavitationError(RuntimeError):
    """The water column depth H + zeta reached zero: hyperbolicity is lost.

    Carries ``partial_trajectory`` when raised mid-run so callers can
    inspect the states computed before the halt.
    """

    def __init__(self, message, partial_trajectory=None):
        super().__init__(message)
        self.partial_trajectory = partial_trajectory


class BreakingError(RuntimeError):
    """A wavebreaking time was reached (characteristics cross)."""


class RiemannOrderingError(ValueError):
    """r_plus <= r_minus at some node: no water state corresponds."""


class SingularSymbolError(ValueError):
    """A dispersion-relation denominator vanishes at a real wavenumber."""


class IllPosedError(ValueError):
    """Model parameters fail the linear well-posedness screen."""


class ResonanceError(RuntimeError):
    """The traveling-wave linear operator vanishes at a grid wavenumber."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to converge.

    ``history`` holds per-iteration diagnostics (e.g. the Petviashvili
    normalization factors) for post-mortem inspection.
    """

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history if history is not None else []


class StepSizeUnderflowError(RuntimeError):
    """Time-step refinement hit the minimum step without meeting tolerance."""
