"""Loads a module by path using a long-deprecated standard library API."""

import imp


def load(name, path):
    return imp.load_source(name, path)
