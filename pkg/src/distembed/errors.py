"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed user input: bad graph file, invalid host spec, bad flags."""


class PartialityError(ValueError):
    """An operation needed a total embedding but got a partial one."""


class InjectivityError(ValueError):
    """Two guest vertices were mapped to the same host vertex."""


class ConflictError(ValueError):
    """Two partial maps disagree on a shared vertex."""

    def __init__(self, vertex, image_a, image_b):
        self.vertex = vertex
        super().__init__(
            f"conflicting images for vertex {vertex}: {image_a} vs {image_b}"
        )


class BudgetExceeded(RuntimeError):
    """Search budget ran out; the instance is undecided, not infeasible."""
