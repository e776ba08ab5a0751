"""Exception types raised by the library.

Every search in the library runs against a finite index horizon, so most
errors signal either a violated semantic precondition or a horizon that is
too small. The CLI reports the class name of any of these on stderr.
"""


class NearcompError(Exception):
    """Base class for domain errors."""


class HorizonExceeded(NearcompError):
    def __init__(self, what, horizon):
        self.what = what
        self.horizon = horizon
        super().__init__(f"{what}: search passed index horizon {horizon}")


class UnboundednessUnverified(NearcompError):
    pass


class ModulusViolated(NearcompError):
    """A caller-supplied modulus was falsified on a sample window."""


class KraftOverflow(NearcompError):
    def __init__(self, index, mass, length):
        self.index = index
        self.mass = mass
        self.length = length
        super().__init__(
            f"request {index} for length {length} would push Kraft mass {mass} above 1"
        )


class WeightNotPositive(NearcompError):
    pass


class MassExceeded(NearcompError):
    pass


class TieUndecidable(NearcompError):
    def __init__(self, n, precision):
        self.n = n
        self.precision = precision
        super().__init__(
            f"cannot separate nu_q({n}) from the input at precision {precision}"
        )


class WitnessInsideBall(NearcompError):
    pass


class ZeroWitnessNotFound(NearcompError):
    pass


class SignUndecidable(NearcompError):
    pass
