import os

DEFAULT_MAX_ENUM = 10**7


class EnumerationLimitError(RuntimeError):
    """An exhaustive check would exceed the configured enumeration cap."""


def max_enum(limit: int | None = None) -> int:
    if limit is not None:
        return limit
    return int(os.environ.get("HON_FORGE_MAX_ENUM", DEFAULT_MAX_ENUM))
