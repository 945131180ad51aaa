"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument or state violates a documented precondition."""


class SchemaError(ValueError):
    """An input file does not match the expected schema."""
