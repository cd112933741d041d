import os

from calc import add


def test_first():
    assert add(1, 1) == 2


def test_dies():
    os._exit(3)


def test_never_reached():
    assert True
