"""Exception types raised across the package."""


class UnknownBodyError(ValueError):
    """A generator, coordinate or action referenced a body the frame does not declare."""

    def __init__(self, label, context=""):
        self.label = label
        msg = f"unknown body {label!r}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class FrameMismatchError(ValueError):
    pass


class MissingRuleError(ValueError):
    def __init__(self, generator):
        self.generator = generator
        super().__init__(f"substitution has no rule for generator {generator}")


class AliasingError(ValueError):
    """State parameters too close to the grid resolution or the periodic seam."""


class StabilityError(ValueError):
    def __init__(self, dt, suggested_dt):
        self.dt = dt
        self.suggested_dt = suggested_dt
        super().__init__(
            f"time step {dt:g} violates the split-step bound; try dt <= {suggested_dt:.6g}"
        )


class BoundaryContactError(RuntimeError):
    pass
