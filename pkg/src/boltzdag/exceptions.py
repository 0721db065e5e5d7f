"""Exception types raised by the samplers and numerics."""


class DomainError(ValueError):
    """A Boltzmann parameter lies outside the domain of its generating function."""


class ConvergenceError(ArithmeticError):
    """A series or root solve did not converge; usually a misconfigured tolerance."""


class SamplerError(RuntimeError):
    """A sampler hit its size guard or an impossible numerical state."""
