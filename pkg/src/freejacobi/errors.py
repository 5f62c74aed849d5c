"""Exceptions shared across the numerical routines."""


class ConvergenceError(RuntimeError):
    """A node-doubling or extrapolation loop failed to settle.

    Raised instead of silently returning a value whose accuracy cannot be
    certified.  The CLI maps this to exit code 2.
    """


class PositivityError(RuntimeError):
    """Orthogonalization lost positive-definiteness (some omega <= 0).

    Indicates quadrature exhaustion during recurrence extraction.  The index
    of the last coefficient pair that is still trustworthy is stored in
    ``last_reliable``.
    """

    def __init__(self, message, last_reliable):
        super().__init__(message)
        self.last_reliable = last_reliable
