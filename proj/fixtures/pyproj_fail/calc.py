"""Tiny integer calculator used by the harness fixtures."""


def add(a, b):
    return a + b
