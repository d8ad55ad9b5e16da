"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-domain input (CLI exit code 3)."""


class GraphParseError(InputError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class PreconditionError(InputError):
    """A checked precondition failed; ``payload`` carries the evidence."""

    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload


class StageFailure(RuntimeError):
    """A threshold or retry budget was not met (CLI exit code 2)."""

    def __init__(self, stage: str, message: str, data=None):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.message = message
        self.data = dict(data or {})
