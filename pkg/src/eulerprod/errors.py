"""Error types shared across the package.

Everything raised deliberately by this library derives from
:class:`EulerProdError`, so callers (notably the CLI) can map domain
failures to a single exit path.  Plain ``ValueError`` is still used for
malformed direct arguments (bad degrees, out-of-range levels, unparsable
rationals).
"""


class EulerProdError(Exception):
    """Base class for domain errors raised by this package."""


class RegionError(EulerProdError):
    """An evaluation was requested outside a method's validity region."""


class ZetaPoleError(RegionError):
    """A zeta evaluation hit the pole at argument 1 exactly."""


class VanishingFactorError(EulerProdError):
    """A local Euler factor vanished at the evaluation point."""

    def __init__(self, norm: float, message: str | None = None):
        self.norm = norm
        super().__init__(message or f"local factor vanishes at norm {norm!r}")


class RootConvergenceError(EulerProdError):
    """The simultaneous root refinement failed to converge."""

    def __init__(self, x: float, message: str | None = None):
        self.x = x
        super().__init__(message or f"root finding did not converge at sample x={x!r}")


class ConsistencyError(EulerProdError):
    """Independent signals that must agree disagreed; indicates a bug."""


class DatumError(EulerProdError):
    """A norm-system file could not be parsed or violates its invariants."""
