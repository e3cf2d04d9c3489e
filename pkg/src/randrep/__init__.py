"""Random presentations, nonbacktracking walks and finite-field representation search."""

__version__ = "0.1.0"


class CapExceeded(RuntimeError):
    """A computation would exceed a configured size cap."""

    def __init__(self, what, required, cap):
        super().__init__(f"{what}: requires {required}, cap is {cap}")
        self.what = what
        self.required = required
        self.cap = cap
