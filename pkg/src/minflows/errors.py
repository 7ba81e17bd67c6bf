"""Exception hierarchy shared by all modules."""


class MinflowsError(Exception):
    """Base class for every error raised by this package."""


class ResourceLimitError(MinflowsError):
    """A finite set or enumeration grew past a configured cap."""

    def __init__(self, what, size, cap):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class GroupMismatchError(MinflowsError, ValueError):
    pass


class SymmetryError(MinflowsError):
    def __init__(self, level, witness):
        super().__init__(f"A_{level} is not symmetric: inverse of {witness!r} missing")
        self.level = level
        self.witness = witness


class NotSpacedError(MinflowsError, ValueError):
    pass


class SizeConditionError(MinflowsError):
    def __init__(self, stage, r, required, radius_hint=None):
        msg = f"stage {stage}: size condition needs r >= {required}, got r = |S_n(n-1)| = {r}"
        if radius_hint is not None:
            msg += f"; smallest B_{stage} radius meeting it is about {radius_hint}"
        else:
            msg += f"; enlarge the B_{stage} radius"
        super().__init__(msg)
        self.stage = stage
        self.r = r
        self.required = required
        self.radius_hint = radius_hint


class BudgetExceeded(MinflowsError):
    def __init__(self, what, required, budget):
        super().__init__(f"{what}: needs {required} candidates, budget is {budget}")
        self.what = what
        self.required = required
        self.budget = budget


class BlendError(MinflowsError):
    """A blend or completion could not be carried out."""


class TilingError(MinflowsError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class WindowTooSmall(MinflowsError):
    def __init__(self, msg, minimal=None):
        super().__init__(msg)
        self.minimal = minimal


class ConfigError(MinflowsError):
    pass


class AlphabetError(MinflowsError, ValueError):
    """A pattern uses a symbol outside the subshift's alphabet."""
