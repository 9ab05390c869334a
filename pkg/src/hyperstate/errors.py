"""Exception types.  Everything the CLI maps to exit code 1 derives from
:class:`HyperstateError`."""


class HyperstateError(Exception):
    pass


class HypergraphError(HyperstateError, ValueError):
    pass


class ParseError(HyperstateError, ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        where = f"line {line}: " if line else ""
        super().__init__(f"{where}{message}")


class CapacityError(HyperstateError, MemoryError):
    pass


class DimensionError(HyperstateError, ValueError):
    pass
