"""A module with no tests anywhere near it."""

GREETING = "hello"
