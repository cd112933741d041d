"""A module with nothing to report."""

GREETING = "hello"
