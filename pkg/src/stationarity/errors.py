"""Exception types shared across the package."""


class InputError(ValueError):
    """Bad input: dimensions, infeasible point, direction outside a cone."""


class InfeasiblePointError(InputError):
    def __init__(self, block, index, message):
        self.block = block
        self.index = index
        super().__init__(message)


class HessianUnavailable(Exception):
    """A second-order quantity needs a Hessian that was not supplied."""

    def __init__(self, labels):
        self.labels = tuple(labels)
        super().__init__("missing Hessian for " + ", ".join(self.labels))


class NotRepresentable(Exception):
    """The objective gradient is outside the span of the working-set gradients."""


class DegenerateInput(Exception):
    """The pivot kept hitting ties or zero steps after all re-draws of b."""
