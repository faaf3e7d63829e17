"""Exception types shared across the package."""


class GridError(ValueError):
    """Structural misuse: malformed edges, out-of-bounds vertices, bad shapes."""


class NotUsoError(GridError):
    """An operation that requires the unique-sink property found it violated."""


class CyclicOrientationError(NotUsoError):
    """A directed cycle was found; ``cycle`` holds the witness vertices."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(
            f"orientation contains a directed cycle of length {len(self.cycle)}"
        )


class CapExceededError(GridError):
    """An exhaustive operation would exceed its explicit size cap."""


class SubSolverError(GridError):
    """A recursive sub-solver handed back a vertex that is not its block's sink."""


class AdversaryError(GridError):
    """Adversary interaction used out of order, e.g. materializing too early."""
