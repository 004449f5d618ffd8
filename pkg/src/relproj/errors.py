class InputError(ValueError):
    """Malformed input or a violated precondition (exit status 2)."""

    def __init__(self, message: str, location: str | None = None):
        super().__init__(message)
        self.location = location
