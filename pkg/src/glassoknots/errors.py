"""Exception types raised across the package.

All input problems derive from :class:`InputError` so the CLI can map them to
exit code 1 in one place.
"""


class InputError(ValueError):
    pass


class ParseError(InputError):
    pass


class DimensionError(InputError):
    pass


class DegenerateColumnError(InputError):
    def __init__(self, column, name=None):
        self.column = column
        label = f"{column} ({name})" if name is not None else str(column)
        super().__init__(f"column {label} has zero sample variance")


class DomainError(InputError):
    pass


class InsufficientKnotsError(InputError):
    pass


class InvalidStepError(InputError):
    pass
