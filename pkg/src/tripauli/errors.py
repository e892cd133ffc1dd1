class ValidationError(ValueError):
    """Input data violates a declared contract (class tag, lengths, parse errors)."""


class CapExceededError(ValueError):
    """Requested dense work exceeds the simulator width cap."""


class NonCommutingError(ValueError):
    """A set passed as commuting contains an anticommuting pair."""

    def __init__(self, first, second):
        super().__init__(f"{first} and {second} anticommute")
        self.pair = (first, second)
