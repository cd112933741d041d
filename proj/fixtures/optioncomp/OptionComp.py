"""Case-insensitive comparison of command-line option strings."""


def compare(option: str, other: str) -> bool:
    """Return True when the two options match, ignoring case."""
    # casefold() handles more mappings than lower(), e.g. German sharp s.
    normalized_a = option.casefold()
    normalized_b = other.casefold()
    return normalized_a == normalized_b
