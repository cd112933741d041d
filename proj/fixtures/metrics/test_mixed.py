"""Five assertions across three tests, deliberately mixed in kind."""
import unittest

from calc import add, items, flag


def test_sum():
    assert add(2, 3) == 5
    assert add(-1, 1) == 0, "zero crossing"


def test_contents():
    assert len(items()) > 0
    assert not flag()


class CalcCase(unittest.TestCase):
    def test_name(self):
        self.assertEqual(add(1, 1), "2")
